use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid freeness spec: {0}")]
    InvalidSpec(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("moduli {a} and {b} are not coprime")]
    NonCoprimeModuli { a: u64, b: u64 },

    #[error("window needs {required} lattice cells but the cap is {cap}; raise the cap or shrink the window")]
    WindowCap { required: u128, cap: u64 },

    #[error("inclusion-exclusion over {free} free points exceeds the cap of {cap}; use the empirical estimator instead")]
    TermCap { free: usize, cap: usize },

    #[error("B too small for requested inradius: need {needed} moduli, have {available}")]
    BTooSmall { needed: usize, available: usize },

    #[error("not in A_1 at modulus {modulus}: {missing} cosets missing")]
    NotInA1 { modulus: u64, missing: u64 },

    #[error("integer overflow: {0}")]
    Overflow(String),

    #[error("resource limit: {0}")]
    Resource(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}
