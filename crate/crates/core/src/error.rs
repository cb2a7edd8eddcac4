use thiserror::Error;

/// Errors raised by the selection kernels and experiment runners.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("design is rank deficient (column {column})")]
    RankDeficient { column: usize },
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("argument out of domain: {0}")]
    Domain(String),
    #[error("custom penalty table has no entry for n = {0}")]
    CustomTableMiss(u64),
    #[error("invalid penalty: {0}")]
    InvalidPenalty(String),
    #[error("residual sum of squares is zero (exact fit)")]
    DegenerateFit,
    #[error("exhaustive search supports at most {max} regressors, got {got}")]
    TooManyRegressors { got: usize, max: usize },
    #[error("subset index {index} outside 1..={m}")]
    InvalidSubset { index: usize, m: usize },
    #[error("lag {lag} must be smaller than the series length {n}")]
    LagTooLarge { lag: usize, n: usize },
    #[error("order {order} exceeds the allowed maximum {max}")]
    OrderTooLarge { order: usize, max: usize },
    #[error("singular linear system")]
    SingularSystem,
    #[error("innovation variance became nonpositive at order {order}")]
    NonpositiveVariance { order: usize },
    #[error("zero variance")]
    DegenerateVariance,
    #[error("AR coefficients do not define a stationary process")]
    NonStationary,
    #[error("empty dataset")]
    EmptyDataset,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures caused by numerics rather than by the input data.
    pub fn is_numeric_failure(&self) -> bool {
        matches!(
            self,
            Error::SingularSystem | Error::NonpositiveVariance { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
