use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("V dimension {v_dim} out of range for algebra of dimension {dim}")]
    SplitOutOfRange { v_dim: usize, dim: usize },

    #[error("model rejected: {0}")]
    InvalidModel(String),

    #[error("series signatures differ")]
    SignatureMismatch,

    #[error("arity mismatch: map takes {expected} arguments, got {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("series carries no formal parameter")]
    MissingParameter,

    #[error("vector has a nonzero component outside V at coordinate {0}")]
    NotInV(usize),

    #[error("series has a nonzero constant term")]
    ConstantTerm,
}

pub type Result<T> = std::result::Result<T, Error>;
