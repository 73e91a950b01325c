use thiserror::Error;

/// Errors raised by the arithmetic, classification and sieve layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An input violated a documented precondition.
    #[error("domain error: {0}")]
    Domain(String),

    /// An exact intermediate value would not fit in 128 bits.
    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    /// A place or modulus that must be prime is not.
    #[error("{0} is not prime")]
    NotPrime(i128),

    /// A computation would exceed the configured resource cap.
    #[error("resource limit: {what} needs {requested} bytes, cap is {cap}")]
    ResourceLimit {
        what: String,
        requested: u64,
        cap: u64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
