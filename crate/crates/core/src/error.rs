use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("field has {got} samples but the grid has {expected} points")]
    SizeMismatch { expected: usize, got: usize },

    #[error("spectral fields are defined on different mode sets")]
    ModeSetMismatch,

    #[error("parameters outside the admissible domain: {0}")]
    Inadmissible(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("trajectory is empty")]
    EmptyTrajectory,

    #[error("fixed-point iteration did not contract after {iterations} iterations (last difference {last_diff:e})")]
    ContractionFailure { iterations: usize, last_diff: f64 },

    #[error("Kato lemma not applicable: {0}")]
    KatoInapplicable(String),

    #[error("initial data belong to the other Kato lemma branch: {0}")]
    WrongLemma(String),

    #[error("lemma hypothesis violated: {0}")]
    HypothesisViolation(String),

    #[error("degenerate sweep: {0}")]
    DegenerateSweep(String),

    #[error("solution left the floating-point range at t = {t}")]
    NonFinite { t: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
