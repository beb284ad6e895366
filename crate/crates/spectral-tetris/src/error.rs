//! Error type shared by the whole crate.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum FrameError {
    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("spectrum trace {trace} is not a positive integer")]
    NonIntegerTrace { trace: String },

    #[error("eigenvalue {value} at index {index} is below 2; enable the small-eigenvalue override to run anyway")]
    EigenvalueBelowTwo { index: usize, value: String },

    #[error("eigenvalue residual at row {row} (1-based) became {value} while borrowing; the spectrum is not constructible this way")]
    NegativeResidual { row: usize, value: String },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("vector count out of range: {0}")]
    VectorCountOutOfRange(String),

    #[error("block size {size} is not admissible for n={n}, m={m} (expected {expected_low} or {expected_high})")]
    InvalidBlockSize {
        n: usize,
        m: usize,
        size: usize,
        expected_low: usize,
        expected_high: usize,
    },

    #[error("correction factor {value} is outside the admissible range [{lo}, {hi}]")]
    CorrectionOutOfRange {
        value: String,
        lo: String,
        hi: String,
    },

    #[error("invalid block: {0}")]
    InvalidBlock(String),

    #[error("invalid matrix entry: {0}")]
    InvalidEntry(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error(
        "majorization failed: reference dimensions {reference:?} do not majorize {requested:?} ({})",
        if *.certified_nonexistence {
            "no fusion frame with these dimensions exists for this spectrum"
        } else {
            "not constructible by this method; existence is not ruled out"
        }
    )]
    MajorizationFailed {
        reference: Vec<usize>,
        requested: Vec<usize>,
        certified_nonexistence: bool,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T, E = FrameError> = std::result::Result<T, E>;
