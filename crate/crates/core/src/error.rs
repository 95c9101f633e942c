use thiserror::Error;

/// Every fallible operation in the crate reports one of these.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension must be at least 2, got {0}")]
    InvalidDimension(usize),

    #[error("arity mismatch at {path}: {left} vs {right}")]
    ArityMismatch {
        path: String,
        left: usize,
        right: usize,
    },

    #[error("index out of range at {path}: {what} = {value}, limit {limit}")]
    IndexOutOfRange {
        path: String,
        what: &'static str,
        value: usize,
        limit: usize,
    },

    #[error("rotation gate requires an angle")]
    MissingAngle,

    #[error("dimension {dim} exceeds cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("{modes} modes is not a power of {d}")]
    ModeCountNotPower { modes: usize, d: usize },

    #[error("invalid word: {0}")]
    InvalidWord(String),

    #[error("offset {t} with {len} modes exceeds {total} global modes")]
    OffsetOutOfRange { t: usize, len: usize, total: usize },

    #[error("side condition violated: {0}")]
    SideCondition(String),

    #[error("matrix is not unitary (residual {0:e})")]
    NotUnitary(f64),

    #[error("matrix is not a rotation (residual {0:e})")]
    NotRotation(f64),

    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),

    #[error("normalisation ran out of fuel after {0} steps")]
    FuelExhausted(u64),
}

pub type Result<T> = std::result::Result<T, Error>;
