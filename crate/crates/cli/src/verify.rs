//! Comparison of observed values with a scenario's `[expect]` block.

use serde::Serialize;

use crate::run::Outputs;
use crate::scenario::Scenario;
use crate::CliError;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub check: String,
    /// `None` when the run produced no value under this key.
    pub observed: Option<Vec<f64>>,
    pub expected: Vec<f64>,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub scenario: String,
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialises");
        s.push('\n');
        s
    }
}

/// Checks every expectation against the observed values of a run.
pub fn verify(sc: &Scenario, out: &Outputs) -> Result<VerifyReport, CliError> {
    let expect = sc.expect.as_ref().ok_or(CliError::NoExpectations)?;
    let checks = expect
        .iter()
        .map(|e| {
            let tolerance = if e.tolerance.is_nan() { sc.default_tolerance } else { e.tolerance };
            let observed = out.observed.get(&e.key).cloned();
            let passed = observed.as_ref().is_some_and(|o| {
                o.len() == e.values.len() && o.iter().zip(&e.values).all(|(a, b)| (a - b).abs() <= tolerance)
            });
            CheckOutcome { check: e.key.clone(), observed, expected: e.values.clone(), tolerance, passed }
        })
        .collect();
    Ok(VerifyReport { scenario: sc.name.clone(), checks })
}
