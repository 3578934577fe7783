//! Table reproduction, verification and parameter sweeps on top of `qclone-core`.

pub mod machines;
pub mod sweep;
pub mod tables;
pub mod verify;

use qclone_core::CloneError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Core(#[from] CloneError),
}

impl CliError {
    /// 2 for usage and configuration problems, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            _ => 1,
        }
    }
}

/// Half-away-from-zero rounding to two decimals.
pub fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}
