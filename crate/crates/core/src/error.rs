use thiserror::Error;

/// Errors raised by the library. Each variant maps onto one CLI exit code.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FanoError {
    /// Arguments outside the domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// An enumeration or canonicalization would exceed its configured cap.
    #[error("resource cap exceeded: {0}")]
    Resource(String),
    /// Malformed input document.
    #[error("parse error: {0}")]
    Parse(String),
    /// Input parsed but violates a structural invariant.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, FanoError>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(FanoError::Domain(msg.into()))
}
