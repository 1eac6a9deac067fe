use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("size mismatch: expected {expected}, got {actual}")]
    SizeMismatch { expected: usize, actual: usize },

    #[error("{to} is not obtained from {from} by adding one box")]
    NotACover { from: String, to: String },

    #[error("invalid q parameter: {0}")]
    InvalidQ(String),

    #[error("operation requires an exact rational q")]
    ExactModeRequired,

    #[error("cannot combine classical and quantized sigma symbols (or different q)")]
    FlavorMismatch,

    #[error("not a permutation of 1..{0}")]
    NotAPermutation(usize),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
