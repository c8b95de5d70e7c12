//! Bobkov functional along the heat flow, and the perimeter as the small-time
//! limit of `∫√Γ(P_t 1_A) dμ`.

use gauss_engine::MehlerData;
use profiles::gauss::iso_gauss_pair;
use profiles::{iso_gauss, pdf, FlowState, PHI_INV_CLAMP};

use crate::checks::CLAMP_ERR_MARGIN;
use crate::error::{LabError, Result};
use crate::report::FlowTrace;
use crate::subject::{Subject, RESOLVE_TOL};

/// Time after which `e^{−λ₁ t} ≤ 1e−8`.
pub fn ergodic_time(lambda1: f64) -> f64 {
    8.0 * std::f64::consts::LN_10 / lambda1
}

/// Geometric grid from `t0` with `per_octave` points per doubling, closed by
/// the ergodic time.
pub fn flow_times(t0: f64, lambda1: f64, per_octave: usize) -> Vec<f64> {
    let t_max = ergodic_time(lambda1);
    let ratio = 2f64.powf(1.0 / per_octave.max(1) as f64);
    let mut out = vec![t0];
    let mut t = t0;
    while t * ratio < t_max {
        t *= ratio;
        out.push(t);
    }
    out.push(t_max);
    out
}

fn resolved(st: &FlowState, i: usize) -> bool {
    st.err[i] <= RESOLVE_TOL * st.u[i].abs().max(1.0)
}

/// `Ψ = ∫√(I_γ(u)² + Γ(u)/κ²) dμ` over resolved nodes, and the weight left out.
fn bobkov_psi(st: &FlowState, kappa_eff: f64) -> (f64, f64) {
    let mut psi = 0.0;
    let mut excluded = 0.0;
    for i in 0..st.len() {
        if !resolved(st, i) {
            excluded += st.weights[i];
            continue;
        }
        let iu = iso_gauss_pair(st.u[i], st.uc[i]);
        psi += st.weights[i] * (iu * iu + st.gamma(i) / (kappa_eff * kappa_eff)).sqrt();
    }
    (psi, excluded)
}

/// `∫ I_γ(u)(Γ₂−κΓ)(Φ⁻¹u)/(1+Γ(Φ⁻¹u))^{3/2} dμ` and the largest clamp used.
fn derivative_bound(st: &FlowState, kappa: f64) -> (f64, f64) {
    let mut total = 0.0;
    let mut eta = PHI_INV_CLAMP;
    for i in 0..st.len() {
        if !resolved(st, i) {
            continue;
        }
        let e = st.clamp_at(i, PHI_INV_CLAMP, CLAMP_ERR_MARGIN);
        eta = eta.max(e);
        let tp = st.transformed(i, kappa, e);
        if tp.clamped {
            continue;
        }
        total += st.weights[i] * pdf(tp.h) * tp.gamma2_minus / (1.0 + tp.gamma).powf(1.5);
    }
    (total, eta)
}

pub fn bobkov_flow(s: &Subject<'_>, times: &[f64], kappa_eff: f64) -> Result<FlowTrace> {
    if times.len() < 2 || times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(LabError::Parameter(
            "time grid must be strictly increasing with ≥ 2 points".into(),
        ));
    }
    if !(times[0] >= 0.0) || (s.is_rough() && times[0] == 0.0) {
        return Err(LabError::Domain("time grid must start at t₀ > 0 for rough data".into()));
    }
    if !(kappa_eff > 0.0) {
        return Err(LabError::Parameter(format!("κ_eff must be positive, got {kappa_eff}")));
    }
    s.check_kappa(kappa_eff)?;
    let mut psi = Vec::with_capacity(times.len());
    let mut excluded_mass = 0.0f64;
    for &t in times {
        let (p, ex) = bobkov_psi(&s.state(t)?, kappa_eff);
        psi.push(p);
        excluded_mass = excluded_mass.max(ex);
    }
    let mut decay_rate = Vec::with_capacity(times.len() - 1);
    let mut bound = Vec::with_capacity(times.len() - 1);
    let mut eta = PHI_INV_CLAMP;
    for (j, w) in times.windows(2).enumerate() {
        decay_rate.push(-(psi[j + 1] - psi[j]) / (w[1] - w[0]));
        let (b, e) = derivative_bound(&s.state(0.5 * (w[0] + w[1]))?, kappa_eff);
        bound.push(b);
        eta = eta.max(e);
    }
    let mean = s.mean()?;
    Ok(FlowTrace {
        engine: s.engine_id(),
        times: times.to_vec(),
        deficit: psi[0] - psi[psi.len() - 1],
        psi,
        decay_rate,
        bound,
        limit: iso_gauss(mean.clamp(0.0, 1.0)),
        eta,
        excluded_mass,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PerimeterEstimate {
    pub times: Vec<f64>,
    /// `∫√Γ(P_t 1_A) dμ` at each time.
    pub values: Vec<f64>,
    /// Aitken-extrapolated `t → 0` limit.
    pub limit: f64,
    /// Closed-form Minkowski content.
    pub reference: f64,
    /// Observed order of convergence in `√t`.
    pub order: f64,
}

impl PerimeterEstimate {
    pub fn relative_error(&self) -> f64 {
        if self.reference == 0.0 {
            self.limit.abs()
        } else {
            (self.limit - self.reference).abs() / self.reference
        }
    }
}

/// Closed-form boundary measure of the set behind a rough subject.
pub fn minkowski_content(s: &Subject<'_>) -> Result<f64> {
    match s {
        Subject::GaussData {
            data: MehlerData::Intervals(iv),
            ..
        } => Ok(iv
            .iter()
            .flat_map(|&(a, b)| [a, b])
            .filter(|v| v.is_finite())
            .map(pdf)
            .sum()),
        Subject::SphereSet { set, .. } => Ok(set.boundary()),
        _ => Err(LabError::Parameter(
            "perimeter needs a half-line union or a band set".into(),
        )),
    }
}

/// Differences below this are treated as converged.
const PERIMETER_FLAT: f64 = 1e-13;

/// Evaluate at `t_j = t0/4^j`, `j < levels`, and extrapolate by Aitken's Δ²
/// on the last three values.
pub fn perimeter_via_flow(s: &Subject<'_>, t0: f64, levels: usize) -> Result<PerimeterEstimate> {
    if levels < 3 || !(t0 > 0.0) {
        return Err(LabError::Parameter("need t0 > 0 and at least 3 levels".into()));
    }
    let reference = minkowski_content(s)?;
    let times: Vec<f64> = (0..levels).map(|j| t0 / 4f64.powi(j as i32)).collect();
    let mut values = Vec::with_capacity(levels);
    for &t in &times {
        let st = s.state(t)?;
        values.push(st.integrate(st.du.iter().map(|d| d.abs())));
    }
    let m = levels - 1;
    let d1 = values[m - 2] - values[m - 1];
    let d2 = values[m - 1] - values[m];
    if d2.abs() <= PERIMETER_FLAT {
        return Ok(PerimeterEstimate {
            times,
            values: values.clone(),
            limit: values[m],
            reference,
            order: f64::INFINITY,
        });
    }
    let r = d2 / d1;
    if !(r > 0.0 && r < 1.0) {
        return Err(LabError::Resolution(format!(
            "perimeter sequence is not converging monotonically (ratio {r})"
        )));
    }
    Ok(PerimeterEstimate {
        limit: values[m] - d2 * r / (1.0 - r),
        order: -r.log2(),
        times,
        values,
        reference,
    })
}
