use thiserror::Error;

/// Failure categories shared by every module.
///
/// The CLI maps these onto exit codes: `Usage`/`Domain`/`Config` → 1,
/// `Capacity` → 2, `Numeric` → 3.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpinError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("capacity exceeded: {what} (limit {limit}, requested {requested})")]
    Capacity {
        what: &'static str,
        limit: usize,
        requested: usize,
    },
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("usage error: {0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, SpinError>;

impl SpinError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        SpinError::Domain(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        SpinError::Config(msg.into())
    }

    pub(crate) fn numeric(msg: impl Into<String>) -> Self {
        SpinError::Numeric(msg.into())
    }
}
