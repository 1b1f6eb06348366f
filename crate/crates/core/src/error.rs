use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Graph parameters, coordinates or ranks outside their valid range.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// A partition that violates its own invariants (empty cell, wrong length).
    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    /// A pattern whose induced partition has an empty cell.
    #[error("invalid pattern: {0}")]
    InvalidPattern(String),

    /// Input that contradicts a structural fact the operation relies on.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An instance larger than the configured guard of an exact algorithm.
    #[error("instance too large: {0}")]
    TooLarge(String),

    /// A malformed file or string representation.
    #[error("format error: {0}")]
    Format(String),

    /// An internal consistency check failed. This indicates a bug.
    #[error("internal consistency error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}
