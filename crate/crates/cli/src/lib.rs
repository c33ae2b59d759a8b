//! Library surface of the command-line tool: configuration parsing,
//! CSV/JSON serialization, and the deterministic batch runner.

pub mod batch;
pub mod config;
pub mod io;

use std::fmt;

#[derive(Debug)]
pub enum CliError {
    /// Bad invocation or configuration file.
    Config(String),
    /// Filesystem or serialization problem.
    Io(String),
    /// Numerical failure inside a computation.
    Core(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Io(m) => write!(f, "io error: {m}"),
            CliError::Core(m) => write!(f, "{m}"),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Core(_) => 3,
        }
    }
}

impl From<dyson_edge_core::Error> for CliError {
    fn from(e: dyson_edge_core::Error) -> Self {
        CliError::Core(e.to_string())
    }
}
