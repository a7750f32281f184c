use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: unsupported MPS feature: {feature}")]
    Unsupported { line: usize, feature: String },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("point is not integral on integer variable {index} (value {value})")]
    NotIntegral { index: usize, value: f64 },

    #[error("problem proven infeasible during presolve: {0}")]
    ProvenInfeasible(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("solution file: {0}")]
    Solution(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
