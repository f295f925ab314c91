//! Verification sweeps over the deletion codes and deterministic reports.

mod report;
mod sweep;

use std::fmt;

use qdel_core::q4code::Step3Variant;
use thiserror::Error;

pub use report::{emit_report, CheckResult, Format, PositionResult, Report};
pub use sweep::run_sweep;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    VerifyQ4,
    VerifyGeneral,
    Lemma1,
    CircuitCheck,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::VerifyQ4 => "verify-q4",
            Command::VerifyGeneral => "verify-general",
            Command::Lemma1 => "lemma1",
            Command::CircuitCheck => "circuit-check",
        }
    }

    pub fn default_trials(self) -> usize {
        match self {
            Command::VerifyGeneral => 100,
            _ => 1000,
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn step3_name(variant: Step3Variant) -> &'static str {
    match variant {
        Step3Variant::Literal => "literal",
        Step3Variant::Corrected => "corrected",
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub command: Command,
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
    /// Message level; only read by `verify-general`.
    pub l: usize,
    pub step3: Step3Variant,
    /// Record wall time in the report. Off by default so reports stay
    /// byte-identical across runs.
    pub timing: bool,
}

impl SweepConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            trials: command.default_trials(),
            seed: 0,
            tol: 1e-9,
            l: 3,
            step3: Step3Variant::Literal,
            timing: false,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.trials == 0 {
            return Err(CliError::InvalidConfig("trials must be at least 1".into()));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(CliError::InvalidConfig(format!(
                "tol must be positive, got {}",
                self.tol
            )));
        }
        if !(2..=qdel_core::gencode::MAX_LEVEL).contains(&self.l) {
            return Err(CliError::InvalidConfig(format!(
                "l must be between 2 and {}, got {}",
                qdel_core::gencode::MAX_LEVEL,
                self.l
            )));
        }
        Ok(())
    }
}
