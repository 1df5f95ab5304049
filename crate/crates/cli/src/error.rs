use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, RunError>;

#[derive(Debug, Error)]
pub enum RunError {
    #[error("config: {0}")]
    Config(String),

    #[error("config {path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: toml::de::Error,
    },

    #[error(transparent)]
    Model(#[from] kerrsim_core::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{0} scan point(s) lack the statistics for a g2 estimate")]
    FlaggedRows(usize),
}

pub mod exit_code {
    pub const IO: i32 = 1;
    pub const CONFIG: i32 = 2;
    pub const NUMERICAL: i32 = 3;
    pub const INSUFFICIENT_STATISTICS: i32 = 4;
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        use kerrsim_core::Error as E;
        match self {
            RunError::Config(_) | RunError::Parse { .. } => exit_code::CONFIG,
            RunError::Model(E::Domain { .. } | E::WavelengthOutOfRange { .. }) => exit_code::CONFIG,
            RunError::Model(E::Quadrature(_) | E::Shape(_)) => exit_code::NUMERICAL,
            RunError::Model(E::InsufficientStatistics(_)) | RunError::FlaggedRows(_) => {
                exit_code::INSUFFICIENT_STATISTICS
            }
            RunError::Io { .. } => exit_code::IO,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        RunError::Io {
            path: path.into(),
            source,
        }
    }
}
