use std::io;

use smallgon_core::bounds::BoundsError;
use smallgon_core::{CertifyError, ConstructionError, GeometryError, SolveError};
use thiserror::Error;

/// Process exit status for a successful run.
pub const EXIT_OK: i32 = 0;
/// A check failed, the input polygon is invalid, or I/O failed.
pub const EXIT_CHECK: i32 = 1;
/// Bad command line, bad parameters or malformed JSON.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("malformed JSON in {path}: {source}")]
    Json {
        path: String,
        source: serde_json::Error,
    },
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("invalid parameters: {0}")]
    Construction(#[from] ConstructionError),
    #[error("invalid parameters: {0}")]
    Bounds(#[from] BoundsError),
    #[error("invalid polygon: {0}")]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("certification failed: {0}")]
    Certify(#[from] CertifyError),
    #[error("{failed} of {total} checks failed")]
    ChecksFailed { failed: usize, total: usize },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_)
            | CliError::Json { .. }
            | CliError::Construction(_)
            | CliError::Bounds(_)
            | CliError::Solve(SolveError::InvalidConfig(_)) => EXIT_USAGE,
            CliError::Io { .. }
            | CliError::Geometry(_)
            | CliError::Solve(_)
            | CliError::Certify(_)
            | CliError::ChecksFailed { .. } => EXIT_CHECK,
        }
    }

    pub fn io(path: impl Into<String>, source: io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}
