use thiserror::Error;

/// Errors surfaced by the verification toolkit.
#[derive(Debug, Error)]
pub enum HardyError {
    #[error("dimension mismatch: expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("integral diverges: {0}")]
    Divergent(String),

    /// The admissibility condition fails, so the theorem gives no constant.
    #[error("case not admissible: smallness {smallness:.6} >= 1 ({detail})")]
    NotAdmissible { smallness: f64, detail: String },

    #[error("theorem hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("operation not supported on this space: {0}")]
    UnsupportedSpace(String),

    #[error("test function has zero norm")]
    ZeroNorm,
}

pub type Result<T> = std::result::Result<T, HardyError>;
