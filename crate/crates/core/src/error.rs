use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Input that does not have the expected shape (dimension mismatch, ragged grid, ...).
    #[error("malformed input: {0}")]
    Malformed(String),

    /// An argument outside the domain of the operation (point not in image, subset violation, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A precondition on a map, chain or homotopy that the caller was required to uphold.
    #[error("contract violation: {0}")]
    Contract(String),

    /// The request exceeds a configured resource cap.
    #[error("refused: {0}")]
    Refused(String),

    /// Integer arithmetic left the representable range.
    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    /// Two computations that must agree did not; indicates an engine fault.
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn malformed(msg: impl Into<String>) -> Self {
        Error::Malformed(msg.into())
    }
}
