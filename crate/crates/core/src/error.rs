use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, BseError>;

#[derive(Debug, Error)]
pub enum BseError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),

    /// The sign-stripped matrix `[[R, C], [C̄, R̄]]` is not positive definite.
    #[error("problem is not definite: {0}")]
    IndefiniteProblem(String),

    #[error("{routine} did not converge after {iterations} iterations")]
    NonConvergence {
        routine: &'static str,
        iterations: usize,
    },

    #[error("{block} is not {expected}: entry ({row}, {col}) deviates by {deviation:e}")]
    SymmetryViolation {
        block: String,
        expected: &'static str,
        row: usize,
        col: usize,
        deviation: f64,
    },

    #[error("invalid generator input: {0}")]
    InvalidInput(String),

    #[error("dense size guard exceeded: n = {n} (limit {limit})")]
    SizeGuard { n: usize, limit: usize },

    #[error("{path}: line {line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}
