use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LightingError {
    /// A scene or scenario parameter violates its precondition.
    #[error("invalid configuration: `{field}` {reason}")]
    Config { field: String, reason: String },

    #[error("domain error: {0}")]
    Domain(String),

    /// Evaluation point closer to a luminaire than the singularity guard.
    #[error(
        "singular geometry: point ({x:.6}, {y:.6}, {z:.6}) is {distance:e} m from luminaire {luminaire}"
    )]
    Singularity {
        luminaire: u32,
        x: f64,
        y: f64,
        z: f64,
        distance: f64,
    },

    #[error("radiosity did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("data error: {0}")]
    Data(String),

    #[error("parse error in {source_name} at line {line}: {message}")]
    Parse {
        source_name: String,
        line: usize,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl LightingError {
    pub(crate) fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        LightingError::Config {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        LightingError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, LightingError>;
