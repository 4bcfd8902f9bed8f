use std::path::PathBuf;

use levyruin_core::Error as CoreError;

/// Failures of a run, each mapped to a process exit status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// The config file is malformed or describes an invalid model.
    #[error("{0}")]
    Config(String),

    #[error("{module}: {source}")]
    Model {
        module: &'static str,
        #[source]
        source: CoreError,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    /// `2` for config and validation errors, `3` for numerical failures,
    /// `1` for IO.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Model { source, .. } => match source {
                CoreError::Quadrature { .. } | CoreError::Root { .. } => 3,
                _ => 2,
            },
            CliError::Io { .. } => 1,
        }
    }

    pub fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> CliError {
        let path = path.into();
        move |source| CliError::Io { path, source }
    }
}

/// Attach the name of the module a core error came from.
pub fn in_module(module: &'static str) -> impl Fn(CoreError) -> CliError {
    move |source| CliError::Model { module, source }
}

pub type Result<T> = std::result::Result<T, CliError>;
