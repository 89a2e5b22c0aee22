use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A constructor parameter violates its constraints.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The input makes the requested quantity undefined.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// The problem size exceeds a hard limit of the algorithm.
    #[error("size limit: {0}")]
    SizeLimit(String),

    /// A numerical routine exhausted its budget before reaching tolerance.
    #[error("numerical non-convergence: {0}")]
    NonConvergence(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("descriptor parse error: {0}")]
    Parse(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
