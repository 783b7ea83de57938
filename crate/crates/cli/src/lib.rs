//! Command-line front end for `lipcert`: argument handling, run reports and
//! CSV export. Every report records the resolved inputs of its run, so
//! [`replay`] can recompute and compare its outputs.

pub mod args;
pub mod commands;
pub mod report;

use std::time::Instant;

use thiserror::Error;

pub use commands::{execute, CommandInputs, Execution};
pub use report::{RunReport, SCHEMA_VERSION, TOOL_VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_VIOLATION: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Runtime(String),
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => EXIT_VALIDATION,
            CliError::Runtime(_) => EXIT_RUNTIME,
        }
    }
}

impl From<lipcert::Error> for CliError {
    fn from(e: lipcert::Error) -> Self {
        if e.is_validation() {
            CliError::Validation(e.to_string())
        } else {
            CliError::Runtime(e.to_string())
        }
    }
}

/// Executes `inputs` and wraps the result in a report.
pub fn run(inputs: &CommandInputs) -> CliResult<(RunReport, Execution)> {
    let start = Instant::now();
    let execution = execute(inputs)?;
    let report = RunReport {
        schema_version: SCHEMA_VERSION,
        tool_version: TOOL_VERSION.to_string(),
        command: inputs.name().to_string(),
        inputs: inputs.to_value(),
        outputs: execution.outputs.clone(),
        timing_ms: start.elapsed().as_millis() as u64,
    };
    Ok((report, execution))
}

/// Re-executes a report from its recorded inputs.
/// Returns the fresh report and whether its outputs equal the recorded ones.
pub fn replay(report: &RunReport) -> CliResult<(RunReport, bool)> {
    let inputs = CommandInputs::from_parts(&report.command, &report.inputs)?;
    let (fresh, _) = run(&inputs)?;
    let identical = fresh.outputs == report.outputs && fresh.inputs == report.inputs;
    Ok((fresh, identical))
}
