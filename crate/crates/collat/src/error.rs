use thiserror::Error;

/// Errors surfaced by the library's fallible operations.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("ambient dimension mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),

    #[error("matrix is not nilpotent")]
    NotNilpotent,

    #[error("spectrum incomplete or incorrect: {0}")]
    SpectrumInvalid(String),

    #[error("duplicate eigenvalue {0} in spectrum")]
    DuplicateEigenvalue(String),

    #[error("operators are not similar: Jordan types differ")]
    NotSimilar,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("matrix is not invertible")]
    NotInvertible,

    #[error("no commutant witness: the linear system for B·x = T·x over the commutant is inconsistent")]
    NoWitness,
}

pub type Result<T> = std::result::Result<T, Error>;
