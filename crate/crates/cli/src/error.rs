use std::path::PathBuf;

/// Failures of a subcommand, each tied to one process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("numerical divergence: {0}")]
    Divergence(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("numerical failure: {0}")]
    Numerical(capillary_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(_) | CliError::Numerical(_) => 1,
            CliError::Usage(_) | CliError::Io { .. } => 2,
            CliError::Divergence(_) => 3,
        }
    }

    pub fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> Self {
        let path = path.into();
        move |source| CliError::Io { path, source }
    }
}

impl From<capillary_core::Error> for CliError {
    fn from(e: capillary_core::Error) -> Self {
        use capillary_core::Error as E;
        match e {
            E::Usage(_) | E::InvalidParams(_) => CliError::Usage(e.to_string()),
            E::Divergence { .. } => CliError::Divergence(e.to_string()),
            other => CliError::Numerical(other),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
