//! CLI error handling and exit-code policy: 1 usage/config, 2 data,
//! 3 internal.

use std::fmt;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
    Io { path: String, source: std::io::Error },
    Core(softskill::Error),
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) | CliError::Io { .. } => 2,
            CliError::Core(e) if e.is_config_error() => 1,
            CliError::Core(e) if e.is_internal_error() => 3,
            CliError::Core(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) | CliError::Data(msg) | CliError::Internal(msg) => {
                write!(f, "{msg}")
            }
            CliError::Io { path, source } => write!(f, "{path}: {source}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<softskill::Error> for CliError {
    fn from(e: softskill::Error) -> Self {
        CliError::Core(e)
    }
}
