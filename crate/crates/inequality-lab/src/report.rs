//! Oriented inequality reports: `slack = rhs − lhs ≥ −tolerance` means the
//! inequality holds.

use std::fmt;

use crate::error::{LabError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Verdict {
    Holds,
    Violated,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Holds => "holds",
            Self::Violated => "violated",
            Self::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InequalityReport {
    pub name: String,
    pub engine: String,
    /// Named parameters in insertion order.
    pub params: Vec<(String, f64)>,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
}

impl InequalityReport {
    pub fn new(
        name: impl Into<String>,
        engine: impl Into<String>,
        params: Vec<(String, f64)>,
        lhs: f64,
        rhs: f64,
        tolerance: f64,
    ) -> Result<Self> {
        let name = name.into();
        let slack = rhs - lhs;
        if !(lhs.is_finite() && rhs.is_finite() && tolerance.is_finite()) || params.iter().any(|(_, v)| !v.is_finite())
        {
            return Err(LabError::NonFinite(name));
        }
        let verdict = if slack >= -tolerance {
            Verdict::Holds
        } else {
            Verdict::Violated
        };
        Ok(Self {
            name,
            engine: engine.into(),
            params,
            lhs,
            rhs,
            slack,
            tolerance,
            verdict,
        })
    }

    /// A report whose data could not be resolved numerically.
    pub fn inconclusive(
        name: impl Into<String>,
        engine: impl Into<String>,
        params: Vec<(String, f64)>,
        tolerance: f64,
    ) -> Self {
        Self {
            name: name.into(),
            engine: engine.into(),
            params,
            lhs: 0.0,
            rhs: 0.0,
            slack: 0.0,
            tolerance,
            verdict: Verdict::Inconclusive,
        }
    }

    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }

    pub fn param(&self, key: &str) -> Option<f64> {
        self.params.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
    }
}

pub(crate) fn params(items: &[(&str, f64)]) -> Vec<(String, f64)> {
    items.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

/// Bobkov functional along the flow.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowTrace {
    pub engine: String,
    pub times: Vec<f64>,
    pub psi: Vec<f64>,
    /// `−(Ψ(t_{j+1}) − Ψ(t_j))/(t_{j+1} − t_j)`, one per cell.
    pub decay_rate: Vec<f64>,
    /// Derivative lower bound at each cell midpoint.
    pub bound: Vec<f64>,
    /// `Ψ(t₀) − Ψ(t_m)`.
    pub deficit: f64,
    /// `I_γ(∫f dμ)`.
    pub limit: f64,
    /// Largest `Φ⁻¹` clamp used.
    pub eta: f64,
    /// Largest weight of nodes left out as unresolved.
    pub excluded_mass: f64,
}

impl FlowTrace {
    /// Largest increase `Ψ(t_{j+1}) − Ψ(t_j)` over the grid.
    pub fn max_increase(&self) -> f64 {
        self.psi
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Worst `decay_rate − bound + slope·Δt` over cells.
    pub fn worst_bound_gap(&self, slope: f64) -> f64 {
        self.decay_rate
            .iter()
            .zip(&self.bound)
            .zip(self.times.windows(2))
            .map(|((r, b), w)| r - b + slope * (w[1] - w[0]))
            .fold(f64::INFINITY, f64::min)
    }
}
