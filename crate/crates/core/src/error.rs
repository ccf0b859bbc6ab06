use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeError {
    #[error("duplicate interpolation nodes")]
    DuplicateNodes,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("entry degree exceeds declared degree {declared}")]
    DegreeMismatch { declared: usize },
    #[error("P(t) is not positive semidefinite on [-1,1] (negative direction at t = {t})")]
    PsdConditionViolated { t: String },
    #[error("common kernel of P(t) is nontrivial (vector {vector:?})")]
    KernelConditionViolated { vector: Vec<String> },
    #[error("operation requires n = 2")]
    DimensionNotTwo,
    #[error("sum of semiellipsoid matrices is singular; intersection is not compact")]
    NotCompact,
    #[error("input matrix {index} is not positive semidefinite")]
    NotPsd { index: usize },
    #[error("polynomial matrix is not positive semidefinite on [-1,1]")]
    NotPsdOnInterval,
    #[error("reindexing polynomial leaves [-1,1]")]
    ReindexOutOfRange,
    #[error("conic problem is infeasible")]
    Infeasible,
    #[error("conic problem is unbounded")]
    Unbounded,
    #[error("solver failed: {0}")]
    NumericalFailure(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, GeError>;
