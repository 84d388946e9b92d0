use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("shape mismatch: expected {expected} values per component, got {got}")]
    ShapeMismatch { expected: usize, got: usize },

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("field has a nonzero mean mode (|u(0)| = {0:e})")]
    NonzeroMean(f64),

    #[error("zero-norm field in {0}")]
    ZeroNorm(&'static str),

    #[error("non-finite value encountered at t = {time}")]
    NonFinite { time: f64 },

    #[error("Picard iteration is not contracting after {} iterations", residuals.len())]
    NotContracting { residuals: Vec<f64> },

    #[error("Picard iteration did not reach tolerance in {} iterations", residuals.len())]
    MaxIters { residuals: Vec<f64> },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("config error in {path}: {message}")]
    Config { path: PathBuf, message: String },

    #[error("snapshot format error: {0}")]
    Snapshot(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
