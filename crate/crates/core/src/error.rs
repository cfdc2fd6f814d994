use thiserror::Error;

use crate::dsl::Diagnostic;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed input: an element of the wrong shape for its family, a
    /// bad index range, and so on.
    #[error("input error: {0}")]
    Input(String),
    /// An operation was called on values that violate its precondition
    /// (for example, an element that is not in the monoid).
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("arithmetic overflow: {0}")]
    Overflow(String),
    #[error("{} parse diagnostic(s); first: {}", .0.len(), .0.first().map(|d| d.to_string()).unwrap_or_default())]
    Parse(Vec<Diagnostic>),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input(msg: impl Into<String>) -> Error {
    Error::Input(msg.into())
}

pub(crate) fn precondition(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}
