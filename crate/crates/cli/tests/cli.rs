use std::process::{Command, Output};

use dotcall64::vector::{read_dc64_file, write_dc64_file};
use dotcall64::TypedVector;
use dotcall64_cli::bench::{BenchRecord, CSV_HEADER};
use dotcall64_fixtures as fixtures;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dotcall64"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn lib() -> String {
    fixtures::library_path().display().to_string()
}

#[test]
fn call_get_c_writes_output_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "call",
        &lib(),
        "get_c",
        "--signature",
        "double,integer,double",
        "--arg",
        "input=1,2,3,4,5,6,7,8,9,10",
        "--arg",
        "index=9",
        "--arg",
        "output=0",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = read_dc64_file(dir.path().join("output.dc64")).unwrap();
    assert_eq!(v.as_f64().unwrap(), &[9.0]);
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("output"));
}

#[test]
fn descriptor_literal_under_write_intent() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "call",
        &lib(),
        "BENCHMARK",
        "-s",
        "double",
        "-i",
        "w",
        "-a",
        "zeros:double:1",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = read_dc64_file(dir.path().join("arg1.dc64")).unwrap();
    assert_eq!(v.as_f64().unwrap(), &[0.0]);
}

#[test]
fn file_arguments_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("x.dc64");
    let original = TypedVector::from_f64(vec![0.1, -0.0, f64::MAX, 1e-300]);
    write_dc64_file(&input, &original).unwrap();
    let out = run(&[
        "call",
        &lib(),
        "BENCHMARK",
        "-s",
        "double",
        "-i",
        "r",
        "--naok",
        "-a",
        &format!("x={}", input.display()),
        "--out",
        dir.path().join("out").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let back = read_dc64_file(dir.path().join("out/x.dc64")).unwrap();
    assert!(back.bitwise_eq(&original));
}

#[test]
fn fortran_and_package_flags() {
    let out = run(&[
        "call",
        &fixtures::library_stem_path().display().to_string(),
        "get_f",
        "--fortran",
        "--package",
        "fx",
        "-s",
        "double,int,double",
        "-a",
        "1:5",
        "-a",
        "2",
        "-a",
        "out=0",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let alt = run(&[
        "call",
        &fixtures::alt_library_path().display().to_string(),
        "get_c",
        "--package",
        "alt",
        "-s",
        "double,integer,double",
        "-a",
        "1:5",
        "-a",
        "2",
        "-a",
        "out=0",
    ]);
    let stdout = String::from_utf8(alt.stdout).unwrap();
    assert!(stdout.lines().any(|l| l.starts_with("3") && l.trim_end().ends_with("-2")), "{stdout}");
}

#[test]
fn bad_signature_exits_two() {
    let out = run(&["call", &lib(), "get_c", "-s", "double,float,double", "-a", "1", "-a", "1", "-a", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("argument 2"), "{stderr}");
}

#[test]
fn engine_errors_exit_one_with_position() {
    let out = run(&["call", &lib(), "get_c", "-s", "double,integer,double", "-a", "NaN", "-a", "1", "-a", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("argument 1"));

    let out = run(&["call", &lib(), "nope", "-s", "double", "-a", "0"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn arity_mismatch_is_a_spec_error() {
    let out = run(&["call", &lib(), "get_c", "-s", "double,double", "-a", "1", "-a", "1", "-a", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn inspect_listings() {
    let out = run(&["inspect", &lib()]);
    assert_eq!(out.status.code(), Some(0));
    let names: Vec<String> = String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(str::to_owned)
        .collect();
    for want in ["get_c", "get64_c", "get_f_", "BENCHMARK"] {
        assert!(names.iter().any(|n| n == want));
    }

    let out = run(&["inspect", &fixtures::empty_library_path().display().to_string()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());

    let out = run(&["inspect", "/nonexistent/lib.so"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn scaling_suite_rows() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("s.csv");
    let out = run(&[
        "bench",
        "scaling",
        "--threads",
        "1,2,4",
        "--length",
        "4096",
        "--replicates",
        "5",
        "--csv",
        csv_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let mut reader = csv::Reader::from_path(&csv_path).unwrap();
    assert_eq!(reader.headers().unwrap(), &csv::StringRecord::from(CSV_HEADER.to_vec()));
    let rows: Vec<BenchRecord> = reader.deserialize().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 15);
    assert!(rows.iter().all(|r| r.signature == "int64" && r.intent == "rw" && r.length == 4096));
    let threads: Vec<usize> = rows.iter().map(|r| r.threads).collect();
    assert_eq!(threads, [[1; 5], [2; 5], [4; 5]].concat());
}

#[test]
fn bench_missing_library() {
    let out = run(&["bench", "overhead", "--lib", "/nonexistent/lib.so", "--replicates", "1"]);
    assert_ne!(out.status.code(), Some(0));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["call"]).status.code(), Some(2));
    assert_eq!(run(&["bench", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["call", &lib(), "BENCHMARK", "-s", "double", "-a", "0", "-v", "3"]).status.code(), Some(2));
}
