use thiserror::Error;

/// Errors produced by model construction, fitting, and optimization.
#[derive(Debug, Error)]
pub enum Error {
    /// A physical or structural precondition on an input was violated.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Occupancy/mesh construction failed.
    #[error("mesh error: {0}")]
    Mesh(String),

    /// Vector or matrix dimensions do not agree.
    #[error("dimension mismatch in {context}: expected {expected}, got {actual}")]
    Dimension {
        context: &'static str,
        expected: usize,
        actual: usize,
    },

    /// A numerical routine failed (singular solve, non-finite values, ...).
    #[error("numerical failure: {0}")]
    Numerics(String),

    /// The solver exhausted its iteration budget before reaching tolerance.
    #[error("solver budget exhausted: {0}")]
    Budget(String),

    /// Configuration file is missing, malformed, or inconsistent.
    #[error("config error: {0}")]
    Config(String),

    /// File ingestion or emission failed.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("image error: {0}")]
    Image(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn dim(context: &'static str, expected: usize, actual: usize) -> Self {
        Error::Dimension {
            context,
            expected,
            actual,
        }
    }
}
