use arnorm_core::Error as CoreError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitCode {
    Success = 0,
    Usage = 2,
    Degenerate = 3,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad flags, unreadable or unparsable input, invalid config.
    #[error("{0}")]
    Usage(String),

    /// The data cannot be tested: zero residual variance or singular OLS.
    #[error("degenerate data: {0}")]
    Degenerate(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    Core(CoreError),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Degenerate(_) => ExitCode::Degenerate,
            CliError::Core(CoreError::DegenerateResiduals | CoreError::EstimationFailed(_)) => {
                ExitCode::Degenerate
            }
            _ => ExitCode::Usage,
        }
    }

    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(err: CoreError) -> Self {
        CliError::Core(err)
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
