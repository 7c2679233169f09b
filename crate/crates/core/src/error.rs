//! Error type shared by every module of the crate.

use thiserror::Error;

/// Failure modes of the numerical operations.
///
/// `Domain` flags arguments outside an operation's contract (bad bounds,
/// unsupported dimension, `p <= N` where supercriticality is required).
/// `Precondition` flags structured inputs that fail a validated hypothesis,
/// such as an inadmissible weight pair. `Computation` flags non-finite data
/// encountered while evaluating.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("computation error: {0}")]
    Computation(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub fn computation(msg: impl Into<String>) -> Self {
        Error::Computation(msg.into())
    }
}
