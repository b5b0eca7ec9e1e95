use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the numerical routines and the node-file reader.
#[derive(Debug, Error)]
pub enum Error {
    #[error("space dimension must be a finite number >= 2, got {0}")]
    InvalidDimension(f64),

    #[error("argument {x} outside the interval [-1, 1]")]
    Domain { x: f64 },

    #[error("Newton iteration did not converge after {iterations} steps")]
    NoConvergence { iterations: usize },

    #[error("degenerate eigenproblem: {0}")]
    DegenerateProblem(String),

    #[error("flatness order L={l} must satisfy 0 <= L <= N-1 (N={order})")]
    InvalidFlatness { order: usize, l: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("pressure a_0 is zero, velocity vector undefined")]
    ZeroPressure,

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{path}:{line}: node norm {norm} is not close to unity")]
    Norm {
        path: PathBuf,
        line: usize,
        norm: f64,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
