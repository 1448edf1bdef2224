use thiserror::Error;
use tritile_core::{FluxError, GraphError, HeightError, RegionError, TilingError, TwistError};

#[derive(Debug, Error)]
pub enum CliError {
    /// A malformed command line; `position` counts arguments after the program name, from 1.
    #[error("usage error at argument {position} ({token:?}): {message}")]
    Usage { position: usize, token: String, message: String },
    #[error("usage error: {0}")]
    MissingArgument(String),
    #[error(transparent)]
    Region(#[from] RegionError),
    #[error(transparent)]
    Tiling(#[from] TilingError),
    #[error(transparent)]
    Flux(#[from] FluxError),
    #[error(transparent)]
    Twist(#[from] TwistError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Height(#[from] HeightError),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: malformed region file: {source}")]
    RegionFile { path: String, source: serde_json::Error },
    #[error("{0}")]
    WrongRegion(String),
    #[error("TRITILE_THREADS must be a positive integer, got {0:?}")]
    Threads(String),
    #[error("{0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage { .. } | CliError::MissingArgument(_) | CliError::Threads(_) => 2,
            _ => 1,
        }
    }
}
