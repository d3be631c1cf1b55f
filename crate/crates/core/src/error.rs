use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max |A - A^dag| = {asymmetry:.3e})")]
    NonHermitian { asymmetry: f64 },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("dimension mismatch: {0}")]
    DimMismatch(String),

    #[error("eigensolver did not converge on a block of size {0}")]
    NoConvergence(usize),

    #[error("coherent-state tail mass {tail:.3e} exceeds the allowed {limit:.1e}")]
    TailMassTooLarge { tail: f64, limit: f64 },

    #[error("sampling budget is zero")]
    BudgetZero,

    #[error("problem too large for the brute-force oracle: {0}")]
    ScaleTooLarge(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("validation failed: {invariant} ({detail})")]
    Validation { invariant: String, detail: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn dims(msg: impl Into<String>) -> Self {
        Error::DimMismatch(msg.into())
    }

    pub(crate) fn invalid(invariant: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Validation {
            invariant: invariant.into(),
            detail: detail.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
