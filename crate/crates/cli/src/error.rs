// SPDX-License-Identifier: Apache-2.0

use std::path::Path;

use qbm_core::Error as CoreError;
use thiserror::Error;

/// Process exit codes.
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_INSTABILITY: i32 = 4;
/// Output could not be written. Not a modelling failure.
pub const EXIT_IO: i32 = 1;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("instability: {0}")]
    Instability(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Numerical(_) => EXIT_NUMERICAL,
            CliError::Instability(_) => EXIT_INSTABILITY,
            CliError::Io(_) => EXIT_IO,
        }
    }

    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    pub fn io(path: &Path, err: impl std::fmt::Display) -> Self {
        CliError::Io(format!("{}: {err}", path.display()))
    }
}

impl From<CoreError> for CliError {
    fn from(err: CoreError) -> Self {
        let msg = err.to_string();
        match err {
            CoreError::QuadratureFailure { .. } | CoreError::ZeroTrace(_) | CoreError::ShapeMismatch(_) => {
                CliError::Numerical(msg)
            }
            CoreError::UnstableConfig(_) | CoreError::UnstableDt { .. } => CliError::Instability(msg),
            CoreError::NaNDetected { step } => {
                CliError::Instability(format!("aborted at step {step}: {msg}"))
            }
            _ => CliError::Config(msg),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
