use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// One named invariant evaluated by a command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Measured quantity, when the check compares a number to a threshold.
    pub value: Option<f64>,
    pub threshold: Option<f64>,
}

impl Check {
    pub fn flag(name: &str, passed: bool) -> Self {
        Self {
            name: name.into(),
            passed,
            value: None,
            threshold: None,
        }
    }

    /// Passes when `value ≤ threshold`.
    pub fn at_most(name: &str, value: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            passed: value <= threshold,
            value: finite(value),
            threshold: finite(threshold),
        }
    }

    /// Passes when `value ≥ threshold`.
    pub fn at_least(name: &str, value: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            passed: value >= threshold,
            value: finite(value),
            threshold: finite(threshold),
        }
    }
}

/// JSON has no encoding for NaN or infinities.
pub fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

/// Envelope written by every command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub version: String,
    pub inputs: serde_json::Value,
    pub tolerances: BTreeMap<String, f64>,
    pub seed: Option<u64>,
    pub result: serde_json::Value,
    pub checks: Vec<Check>,
    pub passed: bool,
    pub failed_invariants: Vec<String>,
    /// Excluded from the determinism guarantee.
    pub wall_time_seconds: f64,
}

impl Report {
    pub fn failed(checks: &[Check]) -> Vec<String> {
        checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name.clone())
            .collect()
    }
}
