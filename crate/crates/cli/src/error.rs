//! CLI-level errors and their process exit codes.
//!
//! Exit codes: 0 success, 2 parse or domain error, 3 I/O or store error.

use std::fmt;

use crate::parse::ParseError;

#[derive(Debug)]
pub enum CliError {
    /// Bad expression text.
    Parse(ParseError),
    /// A mathematically invalid request (singular curve, bad weights, ...).
    Domain(wmod_core::Error),
    /// Bad command-line usage that clap cannot catch (conflicting inputs).
    Usage(String),
    /// Filesystem trouble.
    Io(String),
    /// A store file that cannot be read back.
    Store { line: usize, message: String },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) | CliError::Domain(_) | CliError::Usage(_) => 2,
            CliError::Io(_) | CliError::Store { .. } => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(e) => write!(f, "{e}"),
            CliError::Domain(e) => write!(f, "{e}"),
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Io(msg) => write!(f, "{msg}"),
            CliError::Store { line, message } => {
                write!(f, "corrupt store record on line {line}: {message}")
            }
        }
    }
}

impl std::error::Error for CliError {}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Parse(e)
    }
}

impl From<wmod_core::Error> for CliError {
    fn from(e: wmod_core::Error) -> Self {
        CliError::Domain(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
