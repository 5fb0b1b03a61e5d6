// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use divrank_core::Error;

/// Failure classes, each with its own process exit code.
#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Numerical(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Numerical(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "invalid input: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::Capacity { .. }
            | Error::InvalidSize(_)
            | Error::LengthMismatch { .. }
            | Error::AlphaOutOfRange(_)
            | Error::NotNormalized(_)
            | Error::InvalidArgument(_)
            | Error::WrongVariant { .. } => CliError::Validation(msg),
            Error::NoConvergence { .. }
            | Error::RootFinding { .. }
            | Error::EigenSolver
            | Error::NotARoot(..)
            | Error::DegenerateFit(_) => CliError::Numerical(msg),
            Error::Format(_) | Error::Io(_) => CliError::Io(msg),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
