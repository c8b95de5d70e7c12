use std::collections::BTreeMap;

use inequality_lab::InequalityReport;
use serde::{Deserialize, Serialize};

/// Serialized inequality report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub name: String,
    pub engine: String,
    pub params: BTreeMap<String, f64>,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub tolerance: f64,
    pub verdict: String,
}

impl Report {
    /// Report for `lhs ≤ rhs` within `tolerance`.
    pub fn bound(name: &str, engine: &str, params: &[(&str, f64)], lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let slack = rhs - lhs;
        let verdict = if !(lhs.is_finite() && rhs.is_finite()) {
            "inconclusive"
        } else if slack >= -tolerance {
            "holds"
        } else {
            "violated"
        };
        Self {
            name: name.into(),
            engine: engine.into(),
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            lhs,
            rhs,
            slack,
            tolerance,
            verdict: verdict.into(),
        }
    }

    pub fn holds(&self) -> bool {
        self.verdict == "holds"
    }
}

impl From<&InequalityReport> for Report {
    fn from(r: &InequalityReport) -> Self {
        Self {
            name: r.name.clone(),
            engine: r.engine.clone(),
            params: r.params.iter().cloned().collect(),
            lhs: r.lhs,
            rhs: r.rhs,
            slack: r.slack,
            tolerance: r.tolerance,
            verdict: r.verdict.to_string(),
        }
    }
}

impl From<InequalityReport> for Report {
    fn from(r: InequalityReport) -> Self {
        Self::from(&r)
    }
}
