//! Bound tracker for the quantitative stability argument: localization,
//! cut, concentration, projection and triangle steps with
//! `t = |log δ|^{−2c}` and `ε = √δ`.

use std::f64::consts::FRAC_1_SQRT_2;

use profiles::{iso_gauss, quantile};

use crate::error::{DeficitError, Result};

/// Deficits at or above `1/2 − (2π)^{−1/2}` take the trivial branch.
pub fn trivial_threshold() -> f64 {
    0.5 - iso_gauss(0.5)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineConstants {
    /// Exponent `c ∈ (0.49, 1/2)`.
    pub c: f64,
    /// Constant of Hypothesis (H) and of the bracket.
    pub c_h: f64,
    /// Power of `t` in Hypothesis (H).
    pub eta_h: f64,
    /// Upper end of the time range where (H) is used.
    pub t0: f64,
    /// Largest admissible `ε`.
    pub eps0: f64,
}

impl Default for PipelineConstants {
    fn default() -> Self {
        Self {
            c: 0.49,
            c_h: 1.0,
            eta_h: 4.0,
            t0: 0.5,
            eps0: 1.0 / 7.0,
        }
    }
}

impl PipelineConstants {
    pub fn validate(&self) -> Result<()> {
        // 0.49 is the closed end used by default.
        if !(self.c >= 0.49 && self.c < 0.5) {
            return Err(DeficitError::Parameter(format!(
                "c must lie in [0.49, 0.5), got {}",
                self.c
            )));
        }
        if !(self.c_h > 0.0 && self.c_h.is_finite()) {
            return Err(DeficitError::Parameter(format!(
                "C_H must be positive, got {}",
                self.c_h
            )));
        }
        if !(self.eps0 > 0.0 && self.eps0 <= 1.0 / 7.0 + 1e-15) {
            return Err(DeficitError::Parameter(format!(
                "ε₀ must lie in (0, 1/7], got {}",
                self.eps0
            )));
        }
        if !(self.t0 > 0.0 && self.t0 < 1.0) {
            return Err(DeficitError::Parameter(format!(
                "t₀ must lie in (0,1), got {}",
                self.t0
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineTrace {
    pub delta: f64,
    /// Whether `δ` reached the trivial branch.
    pub trivial: bool,
    pub t: f64,
    pub eps: f64,
    /// `δ / (t^{5/2} I_γ(ε))`.
    pub term1: f64,
    /// `t^{−5} exp(−t Φ⁻¹(ε)²)`.
    pub term2: f64,
    /// `C(term₁ + term₂)`, bound on `‖h_t − Π₁h_t‖²₂`.
    pub l2_bound: f64,
    /// `(√2/2)√t + √(L² bound)`, bound on `‖f − Φ(Π₁h_t)‖₁`.
    pub l1_bound: f64,
    /// `|log δ|^{−c}`, or 1 on the trivial branch.
    pub final_bound: f64,
}

pub fn mn_bound_pipeline(delta: f64, k: &PipelineConstants) -> Result<PipelineTrace> {
    k.validate()?;
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(DeficitError::Parameter(format!(
            "deficit must be positive, got {delta}"
        )));
    }
    if delta >= trivial_threshold() {
        return Ok(PipelineTrace {
            delta,
            trivial: true,
            t: f64::NAN,
            eps: f64::NAN,
            term1: f64::NAN,
            term2: f64::NAN,
            l2_bound: f64::NAN,
            l1_bound: f64::NAN,
            final_bound: 1.0,
        });
    }
    let log = delta.ln().abs();
    let t = log.powf(-2.0 * k.c);
    let eps = delta.sqrt();
    let term1 = delta / (t.powf(2.5) * iso_gauss(eps));
    let q = quantile(eps)?;
    let term2 = t.powi(-5) * (-t * q * q).exp();
    let l2_bound = k.c_h * (term1 + term2);
    Ok(PipelineTrace {
        delta,
        trivial: false,
        t,
        eps,
        term1,
        term2,
        l2_bound,
        l1_bound: FRAC_1_SQRT_2 * t.sqrt() + l2_bound.sqrt(),
        final_bound: log.powf(-k.c),
    })
}
