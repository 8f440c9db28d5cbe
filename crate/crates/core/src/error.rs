use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Coarse classification of an [`Error`], stable across argument wrapping.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ErrorKind {
    Capacity,
    Range,
    Cast,
    MissingValue,
    Spec,
    Load,
    Symbol,
    Format,
    Io,
}

#[derive(Debug, Error)]
pub enum Error {
    /// Wraps an error raised while handling one positional argument.
    /// `position` is zero-based; the message uses one-based numbering.
    #[error("argument {}: {source}", .position + 1)]
    Argument {
        position: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("cannot allocate {requested} elements (limit {limit})")]
    Capacity { requested: u64, limit: u64 },

    #[error("element {index} ({value}) is outside the 32-bit integer range")]
    Range { index: u64, value: f64 },

    #[error("element {index} ({value}) cannot be cast to a 64-bit integer")]
    Cast { index: u64, value: f64 },

    #[error("missing or infinite value at element {index} (set naok to skip this check)")]
    MissingValue { index: u64 },

    #[error("{0}")]
    Spec(String),

    #[error("cannot load {}: {message}", .path.display())]
    Load { path: PathBuf, message: String },

    #[error("symbol `{name}` not found (searched: {})", .searched.join(", "))]
    Symbol { name: String, searched: Vec<String> },

    #[error("malformed vector file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn spec(message: impl Into<String>) -> Self {
        Error::Spec(message.into())
    }

    /// Tags `self` with a zero-based argument position. Already-tagged
    /// errors are returned unchanged.
    pub fn at_argument(self, position: usize) -> Self {
        match self {
            e @ Error::Argument { .. } => e,
            other => Error::Argument {
                position,
                source: Box::new(other),
            },
        }
    }

    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Argument { source, .. } => source.kind(),
            Error::Capacity { .. } => ErrorKind::Capacity,
            Error::Range { .. } => ErrorKind::Range,
            Error::Cast { .. } => ErrorKind::Cast,
            Error::MissingValue { .. } => ErrorKind::MissingValue,
            Error::Spec(_) => ErrorKind::Spec,
            Error::Load { .. } => ErrorKind::Load,
            Error::Symbol { .. } => ErrorKind::Symbol,
            Error::Format(_) => ErrorKind::Format,
            Error::Io(_) => ErrorKind::Io,
        }
    }

    /// Zero-based position of the offending argument, if any.
    pub fn position(&self) -> Option<usize> {
        match self {
            Error::Argument { position, .. } => Some(*position),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn argument_wrapping_is_one_based_and_idempotent() {
        let e = Error::MissingValue { index: 3 }.at_argument(0);
        assert_eq!(e.kind(), ErrorKind::MissingValue);
        assert_eq!(e.position(), Some(0));
        assert!(e.to_string().starts_with("argument 1: "));

        let e = e.at_argument(5);
        assert_eq!(e.position(), Some(0));
    }
}
