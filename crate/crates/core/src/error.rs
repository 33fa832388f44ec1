use thiserror::Error;

/// Errors raised by the belief-function routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument falls outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The integrand produced a non-finite value.
    #[error("non-finite integrand value {value} at {location:?}")]
    NonFinite { value: f64, location: Vec<f64> },

    /// A distribution spec, range or mass-function line could not be parsed.
    #[error("parse error at `{token}`: {reason}")]
    Parse { token: String, reason: String },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn parse(token: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Parse {
            token: token.into(),
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
