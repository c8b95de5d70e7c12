//! Sweeps of a perturbation family: deficit against distance to the nearest
//! cap, with a single fitted constant in front of `|log δ|^{−c}`.

use profiles::SphereGeometry;

use crate::error::{DeficitError, Result};
use crate::family::{make_perturbed_set, Family};
use crate::measure::{deficit_measure, DeficitRecord};
use crate::pipeline::{mn_bound_pipeline, PipelineConstants, PipelineTrace};

/// Which profile the deficit is measured against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltaKind {
    /// `μ⁺(A) − I_γ(μ(A))`.
    Gauss,
    /// `μ⁺(A) − I_S(μ(A))`.
    Sphere,
}

impl DeltaKind {
    pub fn of(self, r: &DeficitRecord) -> f64 {
        match self {
            DeltaKind::Gauss => r.delta_gauss,
            DeltaKind::Sphere => r.delta_sphere,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentPoint {
    pub s: f64,
    pub delta: f64,
    pub record: DeficitRecord,
    pub trace: PipelineTrace,
    /// `C_fit · final_bound(δ)`.
    pub fitted_bound: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Experiment {
    pub family: Family,
    pub n: usize,
    pub v: f64,
    pub kind: DeltaKind,
    pub points: Vec<ExperimentPoint>,
    /// `max sym_diff·|log δ|^c` over the calibration decade (largest `δ`).
    pub c_fit: f64,
    /// Least-squares decay exponent of `sym_diff` in `|log δ|`.
    pub exponent_fit: f64,
    /// Decades of `δ` spanned.
    pub decades: f64,
    /// Points with `sym_diff > C_fit·|log δ|^{−c}`.
    pub violations: usize,
}

impl Experiment {
    pub fn consistent(&self) -> bool {
        self.violations == 0
    }
}

/// Fewest points accepted for a fit.
pub const MIN_FIT_POINTS: usize = 5;
/// Fewest decades of `δ` the sweep must span.
pub const MIN_DECADES: f64 = 3.0;

pub fn deficit_experiment(
    geom: SphereGeometry,
    family: Family,
    v: f64,
    s_grid: &[f64],
    kind: DeltaKind,
    constants: &PipelineConstants,
) -> Result<Experiment> {
    constants.validate()?;
    let mut points = Vec::new();
    for &s in s_grid {
        // The unperturbed cap sits on the profile floor, not on the curve.
        if s == 0.0 {
            continue;
        }
        let set = make_perturbed_set(geom, family, v, s)?;
        let record = deficit_measure(&set)?;
        let delta = kind.of(&record);
        if !(delta > 0.0) {
            continue;
        }
        let trace = mn_bound_pipeline(delta, constants)?;
        points.push(ExperimentPoint {
            s,
            delta,
            record,
            trace,
            fitted_bound: f64::NAN,
        });
    }
    if points.len() < MIN_FIT_POINTS {
        return Err(DeficitError::Experiment(format!(
            "{} usable points, need at least {MIN_FIT_POINTS}",
            points.len()
        )));
    }
    points.sort_by(|a, b| a.delta.total_cmp(&b.delta));
    let dmin = points[0].delta;
    let dmax = points[points.len() - 1].delta;
    let decades = (dmax / dmin).log10();
    if decades < MIN_DECADES {
        return Err(DeficitError::Experiment(format!(
            "δ spans {decades:.2} decades, need {MIN_DECADES}"
        )));
    }
    let c_fit = points
        .iter()
        .filter(|p| p.delta >= dmax / 10.0)
        .map(|p| p.record.sym_diff / p.trace.final_bound)
        .fold(0.0, f64::max);
    let mut violations = 0;
    for p in &mut points {
        p.fitted_bound = c_fit * p.trace.final_bound;
        if p.record.sym_diff > p.fitted_bound * (1.0 + 1e-12) {
            violations += 1;
        }
    }
    // Least squares of log sym_diff against log|log δ|.
    let xy: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.record.sym_diff > 0.0 && p.delta < 1.0)
        .map(|p| (p.delta.ln().abs().ln(), p.record.sym_diff.ln()))
        .collect();
    let m = xy.len() as f64;
    let (mx, my) = (
        xy.iter().map(|p| p.0).sum::<f64>() / m,
        xy.iter().map(|p| p.1).sum::<f64>() / m,
    );
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let exponent_fit = if sxx > 0.0 { -sxy / sxx } else { f64::NAN };
    Ok(Experiment {
        family,
        n: geom.n,
        v,
        kind,
        points,
        c_fit,
        exponent_fit,
        decades,
        violations,
    })
}

/// Perturbation sizes `s_j = s_max·10^{−j/per_decade}`.
pub fn log_grid(s_max: f64, decades: f64, per_decade: usize) -> Vec<f64> {
    let count = (decades * per_decade as f64).round() as usize;
    (0..=count)
        .map(|j| s_max * 10f64.powf(-(j as f64) / per_decade as f64))
        .collect()
}
