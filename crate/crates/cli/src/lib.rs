//! Library side of the `thiele` binary: file schemas and the subcommands,
//! each returning a JSON document or an error with a stable exit code.

pub mod commands;
pub mod schema;

use std::fmt;

pub const EXIT_INTERNAL: u8 = 1;
pub const EXIT_MALFORMED: u8 = 2;
pub const EXIT_DOMAIN: u8 = 3;
pub const EXIT_WEIGHTS: u8 = 4;
pub const EXIT_UNSUPPORTED: u8 = 5;
pub const EXIT_TOO_LARGE: u8 = 6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn new(code: u8, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
        }
    }

    pub fn malformed(message: impl Into<String>) -> Self {
        Self::new(EXIT_MALFORMED, message)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}
