use thiserror::Error;

/// Error type shared by all modules of the workbench.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument is outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// The instance is too large for an exact/exhaustive method.
    #[error("size error: {0}")]
    Size(String),
    /// The requested combination of class/method is not supported.
    #[error("capability error: {0}")]
    Capability(String),
    /// A constructive certificate could not be produced.
    #[error("certification error: {0}")]
    Certification(String),
    /// Harness configuration is invalid (e.g. too few trials).
    #[error("configuration error: {0}")]
    Config(String),
    /// An exhaustive search exceeded its node budget.
    #[error("budget exhausted: {0}")]
    Budget(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn size(msg: impl Into<String>) -> Error {
    Error::Size(msg.into())
}
