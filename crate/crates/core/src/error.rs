use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported local dimension {0}: only qubits (2) are supported")]
    UnsupportedDimension(usize),

    #[error("invalid basis code {0}: must be < 4")]
    InvalidCode(u8),

    #[error("invalid Hamiltonian: {0}")]
    InvalidHamiltonian(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("resource budget exceeded: {0}")]
    Budget(String),

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("unsupported case: {0}")]
    Unsupported(String),

    #[error("evolution failed: {0}")]
    EvolutionFailure(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
