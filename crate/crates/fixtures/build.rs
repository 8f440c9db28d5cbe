use std::env;
use std::path::PathBuf;
use std::process::Command;

const LIBRARIES: &[(&str, &str)] = &[
    ("fixtures", "c/fixtures.c"),
    ("fixtures_alt", "c/fixtures_alt.c"),
    ("empty", "c/empty.c"),
];

fn main() {
    let out_dir = PathBuf::from(env::var("OUT_DIR").unwrap()).join("fixtures");
    std::fs::create_dir_all(&out_dir).unwrap();

    let compiler = cc::Build::new()
        .opt_level(2)
        .cargo_metadata(false)
        .get_compiler();
    let suffix = if cfg!(target_os = "macos") {
        ".dylib"
    } else if cfg!(windows) {
        ".dll"
    } else {
        ".so"
    };

    for (name, source) in LIBRARIES {
        println!("cargo:rerun-if-changed={source}");
        let target = out_dir.join(format!("{name}{suffix}"));
        let mut cmd: Command = compiler.to_command();
        if cfg!(target_os = "macos") {
            cmd.arg("-dynamiclib");
        } else {
            cmd.arg("-shared");
        }
        let status = cmd
            .arg("-fPIC")
            .arg("-o")
            .arg(&target)
            .arg(source)
            .status()
            .unwrap_or_else(|e| panic!("failed to run C compiler for {source}: {e}"));
        assert!(status.success(), "compiling {source} failed with {status}");
    }
    println!("cargo:rustc-env=DOTCALL64_FIXTURE_DIR={}", out_dir.display());
    println!("cargo:rerun-if-changed=build.rs");
}
