use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch for {what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("dual function is not finite at the starting point")]
    NonFiniteStart,

    #[error("instance is infeasible: {0}")]
    Infeasible(String),

    #[error("problem too large for enumeration: {0}")]
    TooLarge(String),

    #[error("sinkhorn kernel underflow in {axis} {index} at epsilon {epsilon:e}; use a larger epsilon")]
    KernelUnderflow {
        axis: &'static str,
        index: usize,
        epsilon: f64,
    },

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("generator failed: {0}")]
    Generator(String),
}

impl Error {
    pub(crate) fn dims(what: &'static str, expected: usize, found: usize) -> Self {
        Error::DimensionMismatch {
            what,
            expected,
            found,
        }
    }
}
