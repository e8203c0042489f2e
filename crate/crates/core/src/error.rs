use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation (n = 0, a non-prime, ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// A result or an enumeration would exceed a numeric bound or a configured cap.
    #[error("range error: {0}")]
    Range(String),
    /// A (field, prime) combination the splitting rules do not cover.
    #[error("unsupported case: {0}")]
    Unsupported(String),
    /// A checked inequality or identity did not hold.
    #[error("verification failure: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn range(msg: impl Into<String>) -> Error {
    Error::Range(msg.into())
}
