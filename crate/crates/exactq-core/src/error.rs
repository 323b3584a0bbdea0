use thiserror::Error;

/// Errors raised by state construction, oracle access, and the runners.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("basis state {state} is not valid for level size {level_size}")]
    InvalidBasisState { state: String, level_size: usize },

    #[error("canonical position {position} is out of range for level size {level_size}")]
    InvalidCanonicalPosition { position: usize, level_size: usize },

    #[error("amplitude vector has length {got}, expected {expected}")]
    AmplitudeCount { got: usize, expected: usize },

    #[error("level size mismatch: got {got}, expected {expected}")]
    LevelSizeMismatch { got: usize, expected: usize },

    #[error("isometry columns fail the orthonormality checks (residual {residual:.3e})")]
    ColumnsNotOrthonormal { residual: f64 },

    #[error("state support lies outside the isometry's source span (residual {residual:.3e})")]
    SupportViolation { residual: f64 },

    #[error("local index {index} out of range 1..={active}")]
    LocalIndexOutOfRange { index: usize, active: usize },

    #[error("duplicate local index {index}")]
    DuplicateLocalIndex { index: usize },

    #[error("level size must be at least 1")]
    EmptyLevel,

    #[error("the base level m = 0 has no second transformation")]
    BaseLevel,

    #[error("k = {k} out of range for n = {n}")]
    KOutOfRange { k: usize, n: usize },

    #[error("unexpected amplitude {amplitude:.3e} on basis state {state}")]
    UnexpectedAmplitude { state: String, amplitude: f64 },

    #[error("n = {n} exceeds the {mode} verification cap {cap}")]
    CapExceeded { n: usize, cap: usize, mode: String },

    #[error("invalid bit character {found:?}; inputs must consist of '0' and '1'")]
    InvalidBitChar { found: char },

    #[error("input bit string must be nonempty")]
    EmptyBitString,

    #[error("verification failed: {0}")]
    VerificationFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
