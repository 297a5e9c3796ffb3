use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("gamma function has a pole at {0}")]
    Pole(f64),
    #[error("singular system: pivot {pivot:e} below threshold {threshold:e} at column {column}")]
    SingularSystem {
        column: usize,
        pivot: f64,
        threshold: f64,
    },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("duplicate points {0} and {1}")]
    DuplicatePoints(usize, usize),
    #[error("point set is empty")]
    EmptyPointSet,
    #[error("moment condition violated: residual {0:e}")]
    MomentViolation(f64),
    #[error("quadratic form is negative: {0:e}")]
    NegativeForm(f64),
    #[error("k = {k} is too small, need 2k >= {min}")]
    KTooSmall { k: u32, min: u32 },
    #[error("linear program is infeasible")]
    LpInfeasible,
    #[error("simplex iteration limit {0} reached")]
    IterationLimit(usize),
    #[error("degenerate trial: polynomial vanishes on the sample set")]
    DegenerateTrial,
    #[error("malformed input: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;
