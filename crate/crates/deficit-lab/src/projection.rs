//! Distance of `h_t = Φ⁻¹(P_t 1_A)` to affine functions of `x₁`, and the
//! rounding of `Φ(Π₁h_t)` to a cap.

use std::f64::consts::PI;

use inequality_lab::checks::CLAMP_ERR_MARGIN;
use inequality_lab::subject::RESOLVE_TOL;
use profiles::quad::integrate_adaptive;
use profiles::{cdf, iso_gauss, quantile, sf, FlowState, SphereGeometry, PHI_INV_CLAMP};
use sphere_engine::{BandSet, SphereEngine, ThetaGrid};

use crate::error::{DeficitError, Result};
use crate::measure::sym_diff;
use crate::pipeline::PipelineConstants;

/// `Π₁h = c0 + c1·p₁(cos θ)` with `p₁(x) = √(n+1)·x` orthonormal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearPart {
    pub c0: f64,
    pub c1: f64,
    /// `‖h − Π₁h‖²₂`.
    pub residual: f64,
}

fn flowed_state(engine: &SphereEngine, set: &BandSet, t: f64) -> Result<(ThetaGrid, FlowState)> {
    if !(t > 0.0) {
        return Err(DeficitError::Parameter(format!("t must be positive, got {t}")));
    }
    let grid = ThetaGrid::standard(&engine.geom);
    let flowed = engine.flow_set(set, t)?;
    let st = grid.state(&engine.geom, &engine.basis, &flowed);
    Ok((grid, st))
}

/// Largest unresolved weight tolerated in the projection.
pub const MAX_UNRESOLVED: f64 = 1e-8;

/// Projection of `h_t` on constants and `x₁`; clamped nodes keep the
/// clamped value of `Φ⁻¹`, unresolved nodes are left out.
pub fn linear_part(engine: &SphereEngine, set: &BandSet, t: f64) -> Result<LinearPart> {
    let (grid, st) = flowed_state(engine, set, t)?;
    let a = (engine.geom.nf() + 1.0).sqrt();
    let mut w = Vec::with_capacity(st.len());
    let mut h = Vec::with_capacity(st.len());
    let mut p1 = Vec::with_capacity(st.len());
    let mut excluded = 0.0;
    for i in 0..st.len() {
        if st.err[i] > RESOLVE_TOL * st.u[i].abs().max(1.0) {
            excluded += st.weights[i];
            continue;
        }
        w.push(st.weights[i]);
        h.push(
            st.transformed(i, 1.0, st.clamp_at(i, PHI_INV_CLAMP, CLAMP_ERR_MARGIN))
                .h,
        );
        p1.push(a * grid.theta[i].cos());
    }
    if excluded > MAX_UNRESOLVED {
        return Err(DeficitError::Experiment(format!(
            "flow at t = {t} leaves weight {excluded:e} unresolved"
        )));
    }
    let integrate = |f: &dyn Fn(usize) -> f64| (0..w.len()).map(|i| w[i] * f(i)).sum::<f64>();
    let c0 = integrate(&|i| h[i]);
    let c1 = integrate(&|i| h[i] * p1[i]);
    let residual = integrate(&|i| (h[i] - c0 - c1 * p1[i]).powi(2));
    Ok(LinearPart { c0, c1, residual })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectionCheck {
    pub t: f64,
    pub eps: f64,
    pub delta: f64,
    /// `‖h_t − Π₁h_t‖²₂`.
    pub lhs: f64,
    /// `δ/(I_γ(ε)t^{5/2})`.
    pub term1: f64,
    /// `t^{−5}e^{−tΦ⁻¹(ε)²}`.
    pub term2: f64,
    /// `C_H·(term₁ + term₂)`.
    pub bound: f64,
}

impl ProjectionCheck {
    pub fn holds(&self) -> bool {
        self.lhs <= self.bound
    }
}

/// `ε = min(√δ, ε₀)`; `δ` is the Gaussian deficit of `set`.
pub fn projection_distance_check(
    engine: &SphereEngine,
    set: &BandSet,
    t: f64,
    constants: &PipelineConstants,
) -> Result<ProjectionCheck> {
    constants.validate()?;
    let delta = (set.boundary() - iso_gauss(set.volume().clamp(0.0, 1.0))).max(f64::MIN_POSITIVE);
    let eps = delta.sqrt().min(constants.eps0);
    let lp = linear_part(engine, set, t)?;
    let term1 = delta / (iso_gauss(eps) * t.powf(2.5));
    let q = quantile(eps)?;
    let term2 = t.powi(-5) * (-t * q * q).exp();
    Ok(ProjectionCheck {
        t,
        eps,
        delta,
        lhs: lp.residual,
        term1,
        term2,
        bound: constants.c_h * (term1 + term2),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rounding {
    pub linear: LinearPart,
    /// `H = {Π₁h_t ≥ 0}`.
    pub cap: BandSet,
    /// `μ(A Δ H)`.
    pub sym_diff: f64,
    /// `‖1_A − Φ(Π₁h_t)‖₁`.
    pub l1: f64,
}

impl Rounding {
    pub fn holds(&self) -> bool {
        self.sym_diff <= self.l1 * (1.0 + 1e-10) + 1e-14
    }
}

/// Relative size of `c1` below which `Π₁h_t` counts as constant.
pub const DEGENERATE_TOL: f64 = 1e-10;

fn half_space_cap(geom: SphereGeometry, lp: &LinearPart) -> Result<BandSet> {
    let a = (geom.nf() + 1.0).sqrt();
    // c0 + c1·a·cos θ ≥ 0.
    let x = -lp.c0 / (lp.c1 * a);
    let cap = if lp.c1 > 0.0 {
        if x <= -1.0 {
            BandSet::new(geom, vec![0.0, PI])?
        } else if x >= 1.0 {
            BandSet::empty(geom)
        } else {
            BandSet::new(geom, vec![0.0, x.acos()])?
        }
    } else if x >= 1.0 {
        BandSet::new(geom, vec![0.0, PI])?
    } else if x <= -1.0 {
        BandSet::empty(geom)
    } else {
        BandSet::new(geom, vec![x.acos(), PI])?
    };
    Ok(cap)
}

pub fn rounding(engine: &SphereEngine, set: &BandSet, t: f64) -> Result<Rounding> {
    let geom = engine.geom;
    let lp = linear_part(engine, set, t)?;
    if !(lp.c1.abs() > DEGENERATE_TOL * lp.c0.abs().max(1.0)) {
        return Err(DeficitError::Degenerate(format!(
            "Π₁h_t has no x₁ component (c1 = {:e})",
            lp.c1
        )));
    }
    let cap = half_space_cap(geom, &lp)?;
    let a = (geom.nf() + 1.0).sqrt();
    let mut cuts = vec![0.0, PI];
    cuts.extend(&set.breakpoints);
    cuts.extend(&cap.breakpoints);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let l1: f64 = cuts
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| {
            let inside = set.contains(0.5 * (w[0] + w[1]));
            integrate_adaptive(
                |th| {
                    let y = lp.c0 + lp.c1 * a * th.cos();
                    let gap = if inside { sf(y) } else { cdf(y) };
                    gap * geom.density(th)
                },
                w[0],
                w[1],
                1e-12,
            )
        })
        .sum();
    Ok(Rounding {
        linear: lp,
        sym_diff: sym_diff(set, &cap),
        cap,
        l1,
    })
}
