use thiserror::Error;

/// Failures mapped onto process exit codes.
#[derive(Debug, Error)]
pub enum CliError {
    /// Unusable input: exit code 2.
    #[error("{0}")]
    Validation(String),

    /// A kernel denominator vanished: exit code 3.
    #[error("{0}")]
    Singular(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Singular(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl From<wavepath::Error> for CliError {
    fn from(e: wavepath::Error) -> Self {
        match e {
            wavepath::Error::SingularMarking { .. } | wavepath::Error::SingularAnalyzer { .. } => {
                CliError::Singular(e.to_string())
            }
            _ => CliError::Validation(e.to_string()),
        }
    }
}
