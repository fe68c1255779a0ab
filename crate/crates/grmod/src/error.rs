use thiserror::Error;

/// Errors raised by constructors, parsers, and checkers.
///
/// A `Structural` error means the input data is malformed (shape mismatch,
/// unknown label, inconsistent declaration) — as opposed to well-formed data
/// that fails an axiom, which is reported through [`crate::report::Report`].
/// A `Refusal` means the requested computation exceeds a declared enumeration
/// limit; callers surface it separately from failures.
#[derive(Debug, Error)]
pub enum Error {
    #[error("structural error: {0}")]
    Structural(String),

    #[error("refused: {0}")]
    Refusal(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn structural(msg: impl Into<String>) -> Self {
        Error::Structural(msg.into())
    }

    pub fn refusal(msg: impl Into<String>) -> Self {
        Error::Refusal(msg.into())
    }

    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}
