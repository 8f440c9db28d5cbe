use std::fs;
use std::io::{self, Write};
use std::path::Path;

use dotcall64::{
    callspec, CallResult, CallSpec, Engine, LongThreshold, TypedVector, WorkerConfig,
};

use crate::args::{BenchArgs, CallArgs, Cli, Command};
use crate::bench::{self, BenchOptions};
use crate::{literal, CliError};

/// Runs a parsed command line, printing results to `out` and errors to
/// `err`, and returns the process exit code.
pub fn run<O: Write, E: Write>(cli: Cli, out: &mut O, err: &mut E) -> i32 {
    let result = match cli.command {
        Command::Call(a) => call(&a, out, err).map(drop),
        Command::Inspect { lib } => inspect(&lib, out),
        Command::Bench(a) => bench_cmd(&a, out, err),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn require_file(lib: &Path) -> Result<std::path::PathBuf, CliError> {
    let path = dotcall64::platform_path(lib);
    if path.is_file() {
        Ok(path)
    } else {
        Err(CliError::Usage(format!("no such library: {}", path.display())))
    }
}

pub fn call<O: Write, E: Write>(a: &CallArgs, out: &mut O, err: &mut E) -> Result<CallResult, CliError> {
    let signature = callspec::split_list(&a.signature);
    let mut spec = CallSpec::parse(a.symbol.clone(), &signature)?
        .with_naok(a.naok)
        .with_fortran(a.fortran)
        .with_verbosity(a.verbose);
    if let Some(intent) = &a.intent {
        spec = spec.parse_intents(&callspec::split_list(intent))?;
    }
    let args = a
        .args
        .iter()
        .enumerate()
        .map(|(i, text)| literal::parse_argument(text, i))
        .collect::<Result<Vec<_>, _>>()?;

    let mut workers = WorkerConfig::default();
    if let Some(n) = a.threads {
        workers = workers.with_threads(n)?;
    }
    let mut engine = Engine::new().with_workers(workers);
    if let Some(t) = a.long_threshold {
        engine = engine.with_long_threshold(LongThreshold::new(t)?);
    }
    let path = require_file(&a.lib)?;
    // SAFETY: the user names the library; loading it is the point.
    unsafe { engine.load_library(&path, a.package.as_deref()) }?;
    if let Some(p) = &a.package {
        spec = spec.with_package(p.clone());
    }

    // SAFETY: the caller of the tool vouches for the signature.
    let result = unsafe { engine.call64(&spec, args) }?;

    for d in &result.diagnostics {
        writeln!(err, "{d}")?;
    }
    print_summary(&result, out)?;
    if let Some(dir) = &a.out {
        fs::create_dir_all(dir)?;
        for (i, (name, v)) in result.iter().enumerate() {
            let name = name.map_or_else(|| format!("arg{}", i + 1), str::to_owned);
            dotcall64::vector::write_dc64_file(dir.join(format!("{name}.dc64")), v)?;
        }
    }
    Ok(result)
}

fn preview(v: &TypedVector) -> String {
    const SHOWN: usize = 6;
    let mut items: Vec<String> = match (v.as_f64(), v.as_i32(), v.as_i64()) {
        (Some(xs), _, _) => xs.iter().take(SHOWN).map(|x| format!("{x}")).collect(),
        (_, Some(xs), _) => xs
            .iter()
            .take(SHOWN)
            .map(|&x| if x == dotcall64::INT32_NA { "NA".into() } else { x.to_string() })
            .collect(),
        (_, _, Some(xs)) => xs.iter().take(SHOWN).map(i64::to_string).collect(),
        _ => Vec::new(),
    };
    if v.len() > SHOWN as u64 {
        items.push("...".into());
    }
    items.join(" ")
}

fn print_summary<O: Write>(result: &CallResult, out: &mut O) -> io::Result<()> {
    let rows: Vec<[String; 5]> = result
        .iter()
        .enumerate()
        .map(|(i, (name, v))| {
            [
                (i + 1).to_string(),
                name.unwrap_or("").to_owned(),
                v.elem_type().name().to_owned(),
                v.len().to_string(),
                preview(v),
            ]
        })
        .collect();
    let header = ["#", "name", "type", "length", "values"];
    let mut widths = header.map(str::len);
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: [&str; 5]| {
        let mut s = String::new();
        for (k, (cell, w)) in cells.iter().zip(widths).enumerate() {
            if k == 4 {
                s.push_str(cell);
            } else {
                s.push_str(&format!("{cell:<w$}  "));
            }
        }
        s.trim_end().to_owned()
    };
    writeln!(out, "{}", line(header))?;
    for row in &rows {
        writeln!(out, "{}", line(row.each_ref().map(String::as_str)))?;
    }
    let c = result.counters;
    writeln!(
        out,
        "copies={} casts={} backcasts={} scans={} coercions={}",
        c.copies, c.casts, c.backcasts, c.scans, c.coercions
    )
}

pub fn inspect<O: Write>(lib: &Path, out: &mut O) -> Result<(), CliError> {
    let path = require_file(lib)?;
    let mut engine = Engine::new();
    // SAFETY: as for `call`; the user names the library.
    let handle = unsafe { engine.load_library(&path, Some("inspected")) }?;
    for name in engine.exports(&handle.name)? {
        writeln!(out, "{name}")?;
    }
    Ok(())
}

fn bench_cmd<O: Write, E: Write>(a: &BenchArgs, out: &mut O, err: &mut E) -> Result<(), CliError> {
    let mut options = BenchOptions::new(a.suite);
    if !a.length.is_empty() {
        options.lengths = a.length.clone();
    }
    if !a.threads.is_empty() {
        options.threads = a.threads.clone();
    }
    if let Some(r) = a.replicates {
        options.replicates = r;
    }
    let lib = a
        .lib
        .clone()
        .unwrap_or_else(dotcall64_fixtures::library_path);
    let mut engine = bench::engine_for(&lib)?;
    let rows = match &a.csv {
        Some(path) => bench::write_csv(&mut engine, &options, io::BufWriter::new(fs::File::create(path)?))?,
        None => bench::write_csv(&mut engine, &options, &mut *out)?,
    };
    writeln!(err, "{rows} rows")?;
    Ok(())
}
