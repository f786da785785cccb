use thiserror::Error;

/// Errors raised by series operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("truncation order mismatch: {left} vs {right}")]
    TruncationMismatch { left: usize, right: usize },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("diagnostic: {0}")]
    Diagnostic(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Short machine-readable tag for the error class.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::TruncationMismatch { .. } => "truncation_mismatch",
            Error::Domain(_) => "domain",
            Error::Parameter(_) => "parameter",
            Error::Precondition(_) => "precondition",
            Error::Diagnostic(_) => "diagnostic",
            Error::Parse(_) => "parse",
        }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn parameter(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
