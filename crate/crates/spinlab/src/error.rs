use thiserror::Error;

/// Errors produced by constructions and evaluators in this crate.
#[derive(Debug, Error)]
pub enum SpinLabError {
    #[error("dimension {0} outside supported range {1}..={2}")]
    DimensionOutOfRange(usize, usize, usize),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("operation requires odd dimension, got {0}")]
    EvenDimension(usize),

    #[error("point {0:?} outside chart domain")]
    OutsideDomain(Vec<f64>),

    #[error("metric not positive definite at sampled point (min eigenvalue {0})")]
    DegenerateMetric(f64),

    #[error("structure constants violate {0} (residual {1})")]
    BadStructureConstants(&'static str, f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("backend does not support this operation: {0}")]
    UnsupportedBackend(String),

    #[error("eigenspace selection failed: {0}")]
    EmptyEigenspace(String),

    #[error("unknown catalog entry: {0}")]
    UnknownCatalogEntry(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, SpinLabError>;
