use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid model parameter: {0}")]
    InvalidParams(String),

    #[error("label out of range: {0}")]
    LabelOutOfRange(String),

    #[error("labels belong to different bases: {0}")]
    LabelMismatch(String),

    #[error("nonzero cross-sector entry at ({row}, {col}): |value| = {magnitude:e}")]
    CrossSectorEntry {
        row: usize,
        col: usize,
        magnitude: f64,
    },

    #[error("matrix dimension {dim} exceeds the configured cap {cap}")]
    DimensionOverCap { dim: usize, cap: usize },

    #[error("eigensolver failed: {0}")]
    EigenSolver(String),

    #[error("insufficient samples: need at least {needed}, got {got}")]
    InsufficientSamples { needed: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("k_max = {k_max} is too small at s = {s}: last product factor deviates from 1 by {deficit:e}")]
    TruncationTooSmall { k_max: usize, s: f64, deficit: f64 },

    #[error("critical coupling out of domain: {0}")]
    OutOfDomain(String),

    #[error("step size underflow at t = {t}: h = {h:e}")]
    StepSizeUnderflow { t: f64, h: f64 },

    #[error("trajectory escaped the numeric range at t = {0}")]
    NumericEscape(f64),

    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
