use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: max asymmetry {asymmetry:e} exceeds {tolerance:e}")]
    NotHermitian { asymmetry: f64, tolerance: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("tuple does not commute: pair ({i}, {j}) has defect {defect:e} > {allowed:e}")]
    NotCommuting {
        i: usize,
        j: usize,
        defect: f64,
        allowed: f64,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("function evaluation failed at {point:?}: {reason}")]
    FunctionEvaluation { point: Vec<f64>, reason: String },

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("divergent integral: {0}")]
    Divergent(String),

    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
