use opapprox_core::Error;

/// Failures that stop a run before a report can be produced.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 64,
            CliError::Dimension(_) => 65,
            CliError::Io(_) => 74,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidIndex(_) | Error::UnsupportedIndex(_) | Error::InvalidTolerance(_) => {
                CliError::Parse(e.to_string())
            }
            _ => CliError::Dimension(e.to_string()),
        }
    }
}
