use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("multi-index degree {degree} exceeds layout degree {max}")]
    DegreeOverflow { degree: usize, max: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("root finder failed: {0}")]
    RootFinding(String),

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("eigensolver failed: {0}")]
    Eigen(String),

    #[error("inadmissible state: rho = {rho:e}, theta = {theta:e}")]
    InadmissibleState { rho: f64, theta: f64 },

    #[error("conservation violated after sparsification: defect {defect:e} > {limit:e}")]
    ConservationViolated { defect: f64, limit: f64 },

    #[error("steady iteration did not converge within {iterations} sweeps (residual {residual:e})")]
    IterationCap { iterations: usize, residual: f64 },

    #[error("bad cache file: {0}")]
    BadCache(String),

    #[error("checksum mismatch: stored {stored:#010x}, computed {computed:#010x}")]
    Checksum { stored: u32, computed: u32 },

    #[error("kernel fingerprint mismatch: file has {found}, expected {expected}")]
    Fingerprint { found: String, expected: String },

    #[error("config error in `{key}`: {message}")]
    Config { key: String, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            message: message.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
