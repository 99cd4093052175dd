use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("particle number mismatch: {left} vs {right} electrons")]
    ParticleNumberMismatch { left: usize, right: usize },

    #[error("symmetry sector is empty")]
    EmptySector,

    #[error("dimension {dimension} exceeds the dense cap of {cap}")]
    DimensionCap { dimension: usize, cap: usize },

    #[error("selection is empty ({discarded} outcomes discarded by post-selection)")]
    EmptySelection { discarded: u64 },

    #[error("eigensolver did not converge after {iterations} iterations (max residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("objective returned a non-finite value at iteration {iteration}")]
    NonFinite { iteration: usize },

    #[error("expectation value has imaginary residue {residue:e}; operator is not Hermitian")]
    NonHermitian { residue: f64 },

    #[error("energy {energy} lies below the exact value {bound}")]
    VariationalViolation { energy: f64, bound: f64 },

    #[error("config field `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit status for the command-line tool: 2 for bad configuration
    /// or input, 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NonConvergence { .. }
            | Error::NonFinite { .. }
            | Error::NonHermitian { .. }
            | Error::EmptySelection { .. }
            | Error::VariationalViolation { .. } => 3,
            _ => 2,
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn config(field: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: msg.into(),
        }
    }
}
