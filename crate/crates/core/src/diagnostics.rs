use std::fmt;

/// Verbosity level of a diagnostic. `Tuning` hints are shown at
/// verbosity 1 and above, `Debug` traces only at verbosity 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Level {
    Tuning = 1,
    Debug = 2,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub level: Level,
    /// Zero-based argument position the message refers to.
    pub argument: Option<usize>,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.level {
            Level::Tuning => "tuning",
            Level::Debug => "debug",
        };
        match self.argument {
            Some(p) => write!(f, "[{tag}] argument {}: {}", p + 1, self.message),
            None => write!(f, "[{tag}] {}", self.message),
        }
    }
}

/// Collects diagnostics, dropping anything above the configured verbosity.
#[derive(Debug, Clone, Default)]
pub struct Diagnostics {
    verbosity: u8,
    argument: Option<usize>,
    messages: Vec<Diagnostic>,
}

impl Diagnostics {
    pub fn new(verbosity: u8) -> Self {
        Diagnostics {
            verbosity,
            argument: None,
            messages: Vec::new(),
        }
    }

    pub fn verbosity(&self) -> u8 {
        self.verbosity
    }

    pub fn enabled(&self, level: Level) -> bool {
        self.verbosity >= level as u8
    }

    /// Sets the argument position attached to subsequent messages.
    pub fn set_argument(&mut self, position: Option<usize>) {
        self.argument = position;
    }

    pub fn emit(&mut self, level: Level, message: impl Into<String>) {
        if self.enabled(level) {
            self.messages.push(Diagnostic {
                level,
                argument: self.argument,
                message: message.into(),
            });
        }
    }

    /// Like [`emit`](Self::emit) but only builds the message when it will be kept.
    pub fn emit_with(&mut self, level: Level, message: impl FnOnce() -> String) {
        if self.enabled(level) {
            self.emit(level, message());
        }
    }

    pub fn messages(&self) -> &[Diagnostic] {
        &self.messages
    }

    pub fn into_messages(self) -> Vec<Diagnostic> {
        self.messages
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verbosity_zero_keeps_nothing() {
        let mut d = Diagnostics::new(0);
        d.emit(Level::Tuning, "hint");
        d.emit(Level::Debug, "trace");
        assert!(d.messages().is_empty());
    }

    #[test]
    fn verbosity_filters_by_level() {
        let mut d = Diagnostics::new(1);
        d.set_argument(Some(2));
        d.emit(Level::Tuning, "hint");
        d.emit(Level::Debug, "trace");
        assert_eq!(d.messages().len(), 1);
        assert_eq!(d.messages()[0].to_string(), "[tuning] argument 3: hint");

        let mut d = Diagnostics::new(2);
        d.emit(Level::Tuning, "hint");
        d.emit(Level::Debug, "trace");
        assert_eq!(d.messages().len(), 2);
    }
}
