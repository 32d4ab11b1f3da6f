use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A parameter is outside the validity range of the operation.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Argument outside the convergence/validity region of a series or
    /// integral representation.
    #[error("{op}: domain error: {detail}")]
    DomainError { op: &'static str, detail: String },

    /// Series caps exhausted before the requested tolerance was met.
    #[error("{op}: series did not converge within {terms} terms")]
    NonConvergence { op: &'static str, terms: u64 },

    /// Adaptive quadrature could not reach the requested tolerance.
    #[error("{op}: quadrature failure: {detail}")]
    QuadratureFailure { op: &'static str, detail: String },

    /// Sequence lengths that must match do not.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Self {
        Error::DomainError {
            op,
            detail: detail.into(),
        }
    }
}
