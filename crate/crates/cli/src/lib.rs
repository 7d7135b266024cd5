//! Scenario runner for the kplus toolkit: named experiments read from JSON
//! configs, deterministic seeds, CSV/JSON reports and the acceptance suite.
//!
//! Exit-status contract: `0` pass, `1` an acceptance band was violated, `2`
//! configuration or input error.

pub mod config;
pub mod output;
pub mod scenario;
pub mod verify;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] kplus::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

/// Outcome of a run that produced its reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Violation,
}

impl Outcome {
    pub fn from_pass(ok: bool) -> Self {
        if ok {
            Self::Pass
        } else {
            Self::Violation
        }
    }

    pub fn exit_code(self) -> u8 {
        match self {
            Self::Pass => 0,
            Self::Violation => 1,
        }
    }
}

/// Every error is reported as a configuration or input error.
pub const ERROR_EXIT: u8 = 2;
