use thiserror::Error;

/// Errors raised by the simulation library.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller violated an operation's precondition.
    #[error("contract violation: {0}")]
    Contract(String),
    /// An environment, agent, or experiment configuration is invalid.
    #[error("invalid configuration: {0}")]
    Config(String),
    /// Observed data has zero probability under the current belief.
    #[error("inconsistent observation: {0}")]
    Inconsistency(String),
    /// A numerical routine produced an invalid intermediate (e.g. a non-positive pivot).
    #[error("numerical failure: {0}")]
    Numerical(String),
    /// The requested configuration is outside what an operation supports.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// A brute-force enumeration would exceed its budget.
    #[error("enumeration size {size} exceeds budget {budget}")]
    Budget { size: u128, budget: u128 },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn contract(msg: impl Into<String>) -> Error {
    Error::Contract(msg.into())
}

pub(crate) fn config(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}
