use std::io;

use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const OK: u8 = 0;
    pub const IO: u8 = 1;
    pub const PARSE: u8 = 2;
    pub const GUARD: u8 = 3;
    pub const VERIFICATION: u8 = 4;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("{0}")]
    Guard(sre_purity::Error),

    #[error("invalid input: {0}")]
    Invalid(sre_purity::Error),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },

    #[error("serialization error: {0}")]
    Serialize(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) | CliError::Invalid(_) => exit::PARSE,
            CliError::Guard(_) => exit::GUARD,
            CliError::Verification(_) => exit::VERIFICATION,
            CliError::Io { .. } | CliError::Serialize(_) => exit::IO,
        }
    }
}

impl From<sre_purity::Error> for CliError {
    fn from(e: sre_purity::Error) -> Self {
        match e {
            sre_purity::Error::SizeGuard { .. } => CliError::Guard(e),
            other => CliError::Invalid(other),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Serialize(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Serialize(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
