use thiserror::Error;

/// Errors raised by constructions and parsers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A caller violated an operation's precondition.
    #[error("usage error: {0}")]
    Usage(String),
    /// A value failed validation at construction time.
    #[error("invalid {what}: {reason}")]
    Invalid { what: &'static str, reason: String },
    /// Malformed input text.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    /// A configured size cap was exceeded.
    #[error("cap exceeded: {0}")]
    Cap(String),
    /// A budgeted search or oracle gave up.
    #[error("search exhausted: {0}")]
    Exhausted(String),
    /// Something that should be impossible happened.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Usage(msg.into()))
}

pub(crate) fn invalid<T>(what: &'static str, reason: impl Into<String>) -> Result<T> {
    Err(Error::Invalid {
        what,
        reason: reason.into(),
    })
}
