use thiserror::Error;

/// Errors surfaced by the engines.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("representation not admissible: {0}")]
    NotAdmissible(String),
    #[error("cost gate exceeded: {what} (limit {limit}, requested {requested})")]
    CostGate {
        what: String,
        limit: usize,
        requested: usize,
    },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal assertion failed: {0}")]
    Assertion(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Invalid(msg.into()))
}
