use std::fmt;

use extorb_core::Error;

#[derive(Debug)]
pub enum CliError {
    /// bad arguments or unparsable input
    Input(String),
    /// a computation would exceed its cap
    Cap(String),
    /// recomputed values disagree with the expected ones
    Mismatch(String),
    Internal(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Cap(_) => 3,
            CliError::Mismatch(_) | CliError::Internal(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(s) | CliError::Cap(s) | CliError::Mismatch(s) | CliError::Internal(s) => f.write_str(s),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::CapExceeded { .. } | Error::WitnessSearchCapExceeded(_) => CliError::Cap(e.to_string()),
            Error::WellDefinednessViolation(_) => CliError::Internal(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Input(format!("bad JSON: {e}"))
    }
}

pub type CliResult<T = ()> = Result<T, CliError>;
