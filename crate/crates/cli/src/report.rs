use std::fmt::Write as _;

use lipcert::estimator::{CertificateSequence, RadialProfile};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Top-level document written by every subcommand.
///
/// `inputs` holds everything needed to recompute `outputs` bit for bit;
/// `timing_ms` is the only field that differs between runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunReport {
    pub schema_version: u32,
    pub tool_version: String,
    pub command: String,
    pub inputs: Value,
    pub outputs: Value,
    pub timing_ms: u64,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> CliResult<RunReport> {
        let report: RunReport = serde_json::from_str(text)
            .map_err(|e| CliError::Validation(format!("not a run report: {e}")))?;
        if report.schema_version != SCHEMA_VERSION {
            return Err(CliError::Validation(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                report.schema_version
            )));
        }
        Ok(report)
    }
}

/// Formats a number exactly as it appears in the JSON report.
pub fn number(x: f64) -> String {
    serde_json::to_string(&x).expect("finite numbers serialize")
}

pub fn profile_csv(profile: &RadialProfile) -> String {
    let mut out = String::from("radius,ratio,signed_ratio\n");
    for ((r, a), s) in profile.radii.iter().zip(&profile.ratios).zip(&profile.signed_ratios) {
        let _ = writeln!(out, "{},{},{}", number(*r), number(*a), number(*s));
    }
    out
}

pub fn sequence_csv(seq: &CertificateSequence) -> String {
    let bound = seq.reference_bound.map(number).unwrap_or_default();
    let mut out = String::from("r,L,reference_bound\n");
    for e in &seq.entries {
        let _ = writeln!(out, "{},{},{bound}", number(e.r), number(e.constant));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_use_shortest_round_trip() {
        assert_eq!(number(0.1), "0.1");
        assert_eq!(number(8.0), "8.0");
        assert_eq!(number(1e-7), "1e-7");
        assert_eq!(number(6.650005494715728), "6.650005494715728");
        let x = 1.0 / 3.0;
        assert_eq!(number(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn rejects_unknown_fields_and_versions() {
        let ok = r#"{"schema_version":1,"tool_version":"0","command":"zoo","inputs":{},"outputs":{},"timing_ms":0}"#;
        assert!(RunReport::from_json(ok).is_ok());
        let extra = ok.replace("\"timing_ms\":0", "\"timing_ms\":0,\"x\":1");
        assert!(RunReport::from_json(&extra).is_err());
        let v2 = ok.replace("\"schema_version\":1", "\"schema_version\":2");
        assert!(RunReport::from_json(&v2).is_err());
    }
}
