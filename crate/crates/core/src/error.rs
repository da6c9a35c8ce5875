use thiserror::Error;

/// Errors raised by the structured-operator machinery.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("malformed input: {0}")]
    MalformedInput(String),

    #[error("not an isometry: {0}")]
    NotIsometry(String),

    #[error("malformed composition: {0}")]
    MalformedComposition(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("refused: {0}")]
    Refused(String),
}

pub type Result<T> = std::result::Result<T, Error>;
