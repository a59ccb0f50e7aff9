//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid device parameters: {0}")]
    Device(String),
    #[error("invalid schedule: {0}")]
    Schedule(String),
    #[error("invalid noise specification: {0}")]
    Noise(String),
    #[error("propagation error: {0}")]
    Propagation(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("calibration failed: {0}")]
    Calibration(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, SimError>;
