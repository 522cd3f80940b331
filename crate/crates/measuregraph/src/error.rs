//! Shared error type for the whole crate.

/// Errors raised by constructors, samplers and analytic routines.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("invalid kernel: {0}")]
    InvalidKernel(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("empty trace: restriction set has zero mass")]
    EmptyTrace,
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("enumeration budget exceeded: {0}")]
    Budget(String),
    #[error("proposal stall: {0}")]
    Stall(String),
    #[error("schema: {0}")]
    Schema(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code used by the CLI: 2 validation, 3 numerical, 4 budget.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidDistribution(_)
            | Error::InvalidKernel(_)
            | Error::InvalidModel(_)
            | Error::SizeMismatch(_)
            | Error::EmptyTrace
            | Error::Infeasible(_)
            | Error::Schema(_)
            | Error::Io(_)
            | Error::Json(_) => 2,
            Error::Numerical(_) | Error::Stall(_) => 3,
            Error::Budget(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
