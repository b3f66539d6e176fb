use thiserror::Error;

use crate::report::Status;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Math(#[from] padic_transfer::Error),
}

impl CliError {
    /// Unsupported or precision-limited computations are inconclusive, bad
    /// input is a usage error, anything else a failure.
    pub fn status(&self) -> Status {
        use padic_transfer::Error as E;
        match self {
            CliError::Usage(_) => Status::Usage,
            CliError::Math(E::Unsupported(_) | E::Precision(_) | E::TooLarge(_)) => Status::Unsupported,
            CliError::Math(E::Invalid(_) | E::NotRegular | E::Singular) => Status::Usage,
            CliError::Math(E::Internal(_)) => Status::Fail,
        }
    }
}
