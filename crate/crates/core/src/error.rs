use std::io;

use thiserror::Error;

/// Errors produced anywhere in the solver stack.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("unsupported matrix format: {0}")]
    UnsupportedFormat(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("pivot breakdown at row {row} (pivot = {pivot:e})")]
    PivotBreakdown { row: usize, pivot: f64 },

    #[error("matrix is singular: {0}")]
    SingularMatrix(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// `I - H` from the Arnoldi projection could not be inverted, which means
    /// the projected remainder has an eigenvalue at (or numerically near) one.
    #[error("low-rank correction is singular: {0}")]
    CorrectionSingular(String),

    #[error("no convergence: {0}")]
    NoConvergence(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn dim_err(msg: impl Into<String>) -> Error {
    Error::Dimension(msg.into())
}
