//! Paths to the compiled callee libraries used by tests and benchmarks.
//!
//! The build script compiles three shared objects into the build directory:
//!
//! - `fixtures`: `get_c`, `get64_c`, `get_f_`, `BENCHMARK`, `fill_seq`, `mutate_all`
//! - `fixtures_alt`: a second `get_c` that returns the negated element
//! - `empty`: no exported symbols

use std::path::{Path, PathBuf};

/// Symbols exported by the main fixture library.
pub const EXPORTS: &[&str] = &["BENCHMARK", "fill_seq", "get64_c", "get_c", "get_f_", "mutate_all"];

pub fn fixture_dir() -> &'static Path {
    Path::new(env!("DOTCALL64_FIXTURE_DIR"))
}

fn with_suffix(stem: &str) -> PathBuf {
    fixture_dir().join(format!("{stem}{}", std::env::consts::DLL_SUFFIX))
}

/// Full path of the main fixture library, platform suffix included.
pub fn library_path() -> PathBuf {
    with_suffix("fixtures")
}

/// Path of the main fixture library without the platform suffix.
pub fn library_stem_path() -> PathBuf {
    fixture_dir().join("fixtures")
}

pub fn alt_library_path() -> PathBuf {
    with_suffix("fixtures_alt")
}

pub fn empty_library_path() -> PathBuf {
    with_suffix("empty")
}
