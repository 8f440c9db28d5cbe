//! Library half of the `dotcall64` command: argument parsing, the `call`,
//! `inspect` and `bench` commands, and the benchmark suites.

pub mod args;
pub mod bench;
pub mod commands;
pub mod literal;

use dotcall64::ErrorKind;

pub use args::{Cli, Command};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad command line, missing input file, malformed literal.
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Engine(#[from] dotcall64::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 2 for usage errors and malformed signatures or intents, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Engine(e) if e.kind() == ErrorKind::Spec => 2,
            _ => 1,
        }
    }
}
