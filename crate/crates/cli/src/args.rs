use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::bench::Suite;

#[derive(Debug, Parser)]
#[command(name = "dotcall64", version, about = "Call compiled functions on typed vectors with 64-bit lengths")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Call a symbol in a shared library and write the resulting vectors.
    Call(CallArgs),
    /// List the functions a shared library exports.
    Inspect {
        /// Library path; the platform suffix may be omitted.
        lib: PathBuf,
    },
    /// Run a benchmark suite and write one CSV row per replicate.
    Bench(BenchArgs),
}

#[derive(Debug, clap::Args)]
pub struct CallArgs {
    /// Library path; the platform suffix may be omitted.
    pub lib: PathBuf,
    pub symbol: String,
    /// Comma-separated callee types: double, integer (or int), int64.
    #[arg(long, short = 's')]
    pub signature: String,
    /// Comma-separated intents (rw, r, w). Defaults to rw for every argument.
    #[arg(long, short = 'i')]
    pub intent: Option<String>,
    /// Skip the missing/infinite value scan.
    #[arg(long)]
    pub naok: bool,
    /// Also try the lowercase name with a trailing underscore.
    #[arg(long)]
    pub fortran: bool,
    /// Registry name to load the library under and restrict the search to.
    #[arg(long)]
    pub package: Option<String>,
    /// `[name=]value`: numbers `1,2.5`, integer range `1:10`,
    /// descriptor `zeros:double:n`, or a `.dc64` file.
    #[arg(long = "arg", short = 'a', value_name = "VALUE", allow_hyphen_values = true)]
    pub args: Vec<String>,
    /// Directory receiving `<name>.dc64` for every argument after the call.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, short = 'v', default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=2))]
    pub verbose: u8,
    /// Worker threads for casts and scans.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Length above which vectors carry the long header.
    #[arg(long)]
    pub long_threshold: Option<u64>,
}

#[derive(Debug, clap::Args)]
pub struct BenchArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    /// Library exporting `BENCHMARK`; defaults to the bundled fixtures.
    #[arg(long)]
    pub lib: Option<PathBuf>,
    /// Vector lengths, comma-separated.
    #[arg(long, value_delimiter = ',')]
    pub length: Vec<u64>,
    #[arg(long)]
    pub replicates: Option<usize>,
    /// Thread counts, comma-separated.
    #[arg(long, value_delimiter = ',')]
    pub threads: Vec<usize>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}
