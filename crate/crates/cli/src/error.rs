use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numeric failure: {0}")]
    Numeric(photon_adder::Error),
    #[error("verification failed")]
    VerifyFailed,
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Config(_) => ExitCode::from(1),
            CliError::Numeric(_) => ExitCode::from(2),
            CliError::VerifyFailed => ExitCode::from(3),
        }
    }
}

impl From<photon_adder::Error> for CliError {
    fn from(e: photon_adder::Error) -> Self {
        match e {
            // parameters come from the command line, so these are input mistakes
            photon_adder::Error::InvalidParameter(msg) => CliError::Config(msg),
            photon_adder::Error::Format(msg) => CliError::Config(msg),
            other => CliError::Numeric(other),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
