use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A configured size bound would be exceeded.
    #[error("guard violation: {what} is {actual}, limit is {limit}")]
    Guard {
        what: &'static str,
        actual: u128,
        limit: u128,
    },

    /// A chain of (component, factor) pairs is not a joint ordered factorisation.
    #[error("invalid joint ordered factorisation: {0}")]
    InvalidJof(String),

    /// Malformed sum-system input.
    #[error("invalid sum system: {0}")]
    InvalidSumSystem(String),

    /// A value does not fit in 64 bits.
    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    /// An internal consistency check failed.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
