use thiserror::Error;

/// Errors produced anywhere in the transformation / decoding pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix has rank {rank} but {rows} rows (full row rank required)")]
    RankDeficient { rank: usize, rows: usize },

    #[error("matrix is singular over GF(2)")]
    Singular,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("not a permutation: {0}")]
    NotABijection(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("length mismatch: expected {expected}, got {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("basis codeword {row} is nonzero at dropped position {position}")]
    ShortenViolation { row: usize, position: usize },

    #[error("matrix is not in reduced row echelon form: {0}")]
    NotEchelon(String),

    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),

    #[error("code dimension {k} exceeds the exhaustive limit {max}")]
    DimensionTooLarge { k: usize, max: usize },

    #[error("search space of {size} candidates exceeds the limit {limit}")]
    SpaceTooLarge { size: f64, limit: f64 },

    #[error("configuration mismatch: {0}")]
    ConfigMismatch(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("integrity check failed: {0}")]
    Integrity(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
