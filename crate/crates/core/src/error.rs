use thiserror::Error;

/// Errors raised by the library. Everything here is a domain error; I/O is
/// left to callers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex index {index} out of range for {n} vertices")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("size limit exceeded: {what} is {got}, limit {limit}")]
    LimitExceeded {
        what: &'static str,
        got: usize,
        limit: usize,
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed stabilizer: {0}")]
    MalformedStabilizer(String),

    #[error("graph is not two-colorable")]
    NotTwoColorable,

    #[error("graph is not connected")]
    Disconnected,

    #[error("forced outcome {outcome:+} at vertex {vertex} has probability zero")]
    ImpossibleOutcome { vertex: usize, outcome: i8 },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_index(index: usize, n: usize) -> Result<()> {
    if index < n {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange { index, n })
    }
}

pub(crate) fn check_limit(what: &'static str, got: usize, limit: usize) -> Result<()> {
    if got <= limit {
        Ok(())
    } else {
        Err(Error::LimitExceeded { what, got, limit })
    }
}
