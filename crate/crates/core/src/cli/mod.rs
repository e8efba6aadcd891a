//! Command-line surface: instance files, CSV schemas and the drivers behind
//! `srx run`, `srx simulate`, `srx compare` and `srx generate`.

pub mod commands;
pub mod csvio;
pub mod format;
pub mod grid;

use std::fmt;

/// Exit code for malformed input or failed validation.
pub const EXIT_VALIDATION: u8 = 1;
/// Exit code for I/O failures and exceeded size caps.
pub const EXIT_RUNTIME: u8 = 2;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn validation(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_VALIDATION,
            message: message.into(),
        }
    }

    pub fn runtime(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_RUNTIME,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        match e {
            crate::Error::SizeLimit { .. } => CliError::runtime(e.to_string()),
            _ => CliError::validation(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::runtime(e.to_string())
    }
}
