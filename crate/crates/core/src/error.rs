use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// No sample curve lies within the covariate bandwidth of the query curve.
    #[error("empty neighborhood: no sample within h = {h} (nearest sample at distance {nearest})")]
    EmptyNeighborhood { h: f64, nearest: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("{path}: row {row}, column {column}: {reason}")]
    Parse {
        path: PathBuf,
        row: usize,
        column: usize,
        reason: String,
    },

    #[error("{path}: row {row} has {found} columns, expected {expected}")]
    RowLength {
        path: PathBuf,
        row: usize,
        found: usize,
        expected: usize,
    },

    #[error("length mismatch: {curves} curves but {responses} responses")]
    LengthMismatch { curves: usize, responses: usize },

    #[error("curve has {found} points but the grid has {expected}")]
    GridMismatch { found: usize, expected: usize },

    #[error("row {row}: response {value} is outside the transform's domain ({reason})")]
    TransformDomain {
        row: usize,
        value: f64,
        reason: &'static str,
    },

    #[error("estimated quantile {value} at order {order} is not positive; log undefined")]
    NonPositiveQuantile { order: f64, value: f64 },

    #[error("{path}: {source}")]
    Open {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{0}")]
    Io(#[from] std::io::Error),

    #[error("{0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// Short machine-readable tag, used by the CLI error record.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::EmptyNeighborhood { .. } => "empty_neighborhood",
            Error::InvalidParameter { .. } => "precondition",
            Error::Parse { .. } | Error::RowLength { .. } | Error::Csv(_) => "parse",
            Error::LengthMismatch { .. } | Error::GridMismatch { .. } => "shape",
            Error::TransformDomain { .. } => "domain",
            Error::NonPositiveQuantile { .. } => "nonpositive_quantile",
            Error::Open { .. } | Error::Io(_) => "io",
        }
    }
}
