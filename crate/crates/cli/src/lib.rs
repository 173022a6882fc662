//! Command implementations behind the `dobkit` binary.
//!
//! Every command returns its product (CSV or report text) together with an
//! exit code; the binary only handles files and process exit.

pub mod commands;
pub mod scenario;

use thiserror::Error;

pub use commands::{
    alpha_grid, cmd_bode_integral, cmd_constraints, cmd_freq, cmd_rootlocus, cmd_sim, theta_grid,
    Outcome, SimOutcome, BODE_TOLERANCE, DEFAULT_FREQ_POINTS,
};
pub use scenario::Scenario;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    /// Constraint violated or run not settled.
    pub const FAIL: i32 = 1;
    pub const CONFIG: i32 = 2;
    pub const ANALYSIS: i32 = 3;
    pub const DIVERGED: i32 = 4;
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("analysis error: {0}")]
    Analysis(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => exit::CONFIG,
            CliError::Analysis(_) => exit::ANALYSIS,
        }
    }
}

impl From<dob_core::analysis::AnalysisError> for CliError {
    fn from(e: dob_core::analysis::AnalysisError) -> Self {
        CliError::Analysis(e.to_string())
    }
}

impl From<dob_core::models::ModelError> for CliError {
    fn from(e: dob_core::models::ModelError) -> Self {
        CliError::Analysis(e.to_string())
    }
}

impl From<dob_core::dtf::DtfError> for CliError {
    fn from(e: dob_core::dtf::DtfError) -> Self {
        CliError::Analysis(e.to_string())
    }
}
