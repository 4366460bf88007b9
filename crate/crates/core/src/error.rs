use thiserror::Error;

/// Errors raised by the Gaussian-state numerics.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unknown subsystem label `{0}`")]
    UnknownLabel(String),

    #[error(
        "invalid covariance: minimum symplectic eigenvalue {min_symplectic_eigenvalue} below 1/2"
    )]
    InvalidCovariance { min_symplectic_eigenvalue: f64 },

    #[error("numerical degeneracy in {what} (residual {residual:e})")]
    NumericalDegeneracy { what: &'static str, residual: f64 },

    #[error("conditional independence violated: I(A:B|M) = {cmi:e} exceeds {tol:e}")]
    ConditionalDependence { cmi: f64, tol: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
