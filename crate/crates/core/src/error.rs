use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the saliency library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid shape: {0}")]
    Shape(String),

    #[error("non-finite value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },

    #[error("value {value} at row {row}, column {col} is outside [0, 1]")]
    OutOfRange { row: usize, col: usize, value: f64 },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("missing image `{0}`")]
    MissingImage(String),

    #[error("fixation data, line {line}: {message}")]
    Record { line: u64, message: String },

    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Image(#[from] image::ImageError),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}
