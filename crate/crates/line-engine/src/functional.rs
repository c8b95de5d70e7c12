//! Variance, entropy, Dirichlet energy and second-order quantities of a grid
//! function under `μ ∝ e^{−V}`.

use crate::error::{LineError, Result};
use crate::operator::{DiscreteOperator, Spectrum};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FunctionalReport {
    pub mean: f64,
    pub variance: f64,
    /// `Ent(f²)`.
    pub entropy: f64,
    /// `∫Γf dμ` with `Γf = (f′)²`.
    pub dirichlet: f64,
    /// `∫Γf dμ − Var f`.
    pub delta_sg: f64,
    /// `∫ (f″)² + (V″−κ)(f′)² dμ`.
    pub gamma2_minus_gamma: f64,
    /// `‖g + Lg‖²` for the centred `g = f − Ef`.
    pub f_plus_lf_sq: f64,
    /// `∫(Γ₂−Γ) − ½‖g+Lg‖²`; non-negative when `κ = 1`.
    pub chain_slack: f64,
    /// `v₀ = ∫ x (f − Ef) dμ`.
    pub v0: f64,
    /// `‖f − Ef − v₀ V′‖²`.
    pub projection_residual: f64,
}

pub fn functional_report(op: &DiscreteOperator, f: &[f64]) -> Result<FunctionalReport> {
    if f.len() != op.len() {
        return Err(LineError::Domain(format!(
            "expected {} grid values, got {}",
            op.len(),
            f.len()
        )));
    }
    let pot = &op.measure.potential;
    let kappa = op.measure.kappa;
    let mean = op.mean(f);
    let g: Vec<f64> = f.iter().map(|v| v - mean).collect();
    let variance = op.inner(&g, &g);
    let sq_mass = op.inner(f, f);
    if !(sq_mass > 0.0) {
        return Err(LineError::Domain("Ent(f²) needs ∫f² > 0".into()));
    }
    let ent_core: f64 =
        op.w.iter()
            .zip(f)
            .map(|(w, v)| {
                let s = v * v;
                if s > 0.0 {
                    w * s * s.ln()
                } else {
                    0.0
                }
            })
            .sum();
    let entropy = ent_core - sq_mass * sq_mass.ln();
    let (d1, d2) = op.derivatives(f);
    let mut dirichlet = 0.0;
    let mut g2g = 0.0;
    let mut flf = 0.0;
    let mut x_moment = 0.0;
    for i in 0..op.len() {
        let x = op.x[i];
        let w = op.w[i];
        dirichlet += w * d1[i] * d1[i];
        g2g += w * (d2[i] * d2[i] + (pot.d2v(x) - kappa) * d1[i] * d1[i]);
        let lg = d2[i] - pot.dv(x) * d1[i];
        flf += w * (g[i] + lg).powi(2);
        x_moment += w * x * g[i];
    }
    let v0 = x_moment;
    let projection_residual =
        op.x.iter()
            .zip(&g)
            .zip(&op.w)
            .map(|((&x, gi), w)| w * (gi - v0 * pot.dv(x)).powi(2))
            .sum();
    Ok(FunctionalReport {
        mean,
        variance,
        entropy,
        dirichlet,
        delta_sg: dirichlet - variance,
        gamma2_minus_gamma: g2g,
        f_plus_lf_sq: flf,
        chain_slack: g2g - 0.5 * flf,
        v0,
        projection_residual,
    })
}

/// `min_{k≥1} (λ_k − κ)` and the minimizing `k`.
pub fn stein_gap(spec: &Spectrum, kappa: f64) -> Result<(f64, usize)> {
    spec.values
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, l)| (l - kappa, k))
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .ok_or_else(|| LineError::Parameter("stein gap needs at least two eigenvalues".into()))
}
