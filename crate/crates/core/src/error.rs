use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Segmentation produced a mask without a single true pixel.
    #[error("foreground mask is empty")]
    EmptyForeground,

    #[error("no period segment passed the reliability threshold")]
    NoReliableSegments,

    #[error("sample point ({x:.3}, {y:.3}) lies outside the raster")]
    OutOfBounds { x: f64, y: f64 },

    #[error("circle weights are degenerate (normalizer {0:e})")]
    DegenerateWeights(f64),

    #[error("anchor orientation has zero magnitude")]
    ZeroAnchor,

    #[error("orientation field is zero on {zero_fraction:.3} of the foreground")]
    DegenerateField { zero_fraction: f64 },

    #[error("iterative smoothing hit the cap of {0} iterations")]
    IterationCapExceeded(usize),

    #[error("evaluation mask selects no valid pixel")]
    EmptyMask,

    #[error("bad magic bytes")]
    BadMagic,

    #[error("file is truncated")]
    TruncatedFile,

    #[error("raster dimensions overflow")]
    DimensionOverflow,

    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}
