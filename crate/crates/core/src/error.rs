use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the solver library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{path}:{line}: {msg}")]
    Parse { path: PathBuf, line: usize, msg: String },

    #[error("unsupported Matrix Market format: {0}")]
    UnsupportedFormat(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("harmonic Ritz values undefined (H is singular); lower the degree")]
    HarmonicRitzUndefined,

    #[error("harmonic Ritz value at zero (index {index}); the generating cycle broke down")]
    ZeroHarmonicRitzValue { index: usize },

    #[error("QR eigenvalue iteration did not converge after {sweeps} sweeps ({found} of {dim} eigenvalues found)")]
    EigenNoConvergence { sweeps: usize, found: usize, dim: usize },

    #[error("ILU(0) zero pivot at row {row} (|u_ii| = {value:e}); try a larger diagonal shift")]
    ZeroPivot { row: usize, value: f64 },

    #[error("GMRES basis reached its cap of {cap} vectors without converging")]
    BasisCapExceeded { cap: usize },

    #[error("root list invariant violated: {0}")]
    InvariantViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
