use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not positive definite: pivot {pivot:e} at index {index}")]
    NotPositiveDefinite { index: usize, pivot: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),

    #[error("symmetric eigensolver did not converge")]
    EigenFailure,

    #[error("singular velocity update (step size too large?)")]
    SingularUpdate,

    #[error("metric derivatives were requested but not evaluated")]
    MissingDerivatives,

    #[error("parameter {0} has zero variance")]
    ZeroVariance(usize),

    #[error("all points of the sample set coincide")]
    DegenerateSet,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("data error: {0}")]
    Data(String),
}

pub type Result<T> = std::result::Result<T, Error>;
