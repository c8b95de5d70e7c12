//! Point-wise scans: Hypothesis (H) on smoothed caps, heat-kernel
//! log-derivative bounds, and the slab-measure Gaussian gap.

use std::f64::consts::{FRAC_PI_2, PI};

use inequality_lab::checks::CLAMP_ERR_MARGIN;
use inequality_lab::subject::RESOLVE_TOL;
use profiles::{cdf, FlowState, SphereGeometry, PHI_INV_CLAMP};
use sphere_engine::kernel::kernel_degree;
use sphere_engine::{heat_kernel_zonal, BandSet, GegenbauerBasis, SphereEngine, ThetaGrid};

use crate::error::{DeficitError, Result};

/// One `(t, ε)` cell of the Hypothesis-(H) scan.
#[derive(Debug, Clone, PartialEq)]
pub struct HCell {
    pub t: f64,
    pub eps: f64,
    /// `sup t^η (Γ₂−Γ)(h)/h²` over `{P_tf ≤ ε}`; `None` when that set has
    /// no resolved node.
    pub low: Option<f64>,
    /// The same over `{P_tf ≥ 1−ε}`.
    pub high: Option<f64>,
    pub nodes_low: usize,
    pub nodes_high: usize,
    /// Largest `Φ⁻¹` clamp applied.
    pub eta: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HScan {
    pub n: usize,
    /// Volume of the cap and the smoothing time `s` in `f = P_s 1_cap`.
    pub v: f64,
    pub s: f64,
    pub eta_h: f64,
    pub cells: Vec<HCell>,
    /// Supremum over all cells: the empirical `C_H`.
    pub c_h: f64,
    /// Cells with an empty sub-level set on both sides.
    pub skipped: usize,
}

impl HScan {
    /// Largest ratio per time, over `ε` and both sides.
    pub fn per_time(&self) -> Vec<(f64, f64)> {
        let mut out: Vec<(f64, f64)> = Vec::new();
        for c in &self.cells {
            let r = c.low.into_iter().chain(c.high).fold(f64::NEG_INFINITY, f64::max);
            if !r.is_finite() {
                continue;
            }
            match out.iter_mut().find(|(t, _)| *t == c.t) {
                Some(e) => e.1 = e.1.max(r),
                None => out.push((c.t, r)),
            }
        }
        out
    }

    /// Ratio of the largest to the smallest per-time supremum.
    pub fn time_spread(&self) -> f64 {
        let pt = self.per_time();
        let hi = pt.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
        let lo = pt.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
        if pt.is_empty() {
            f64::NAN
        } else {
            hi / lo
        }
    }

    /// Least-squares slope of `log sup` against `log t`.
    pub fn time_exponent(&self) -> f64 {
        let pts: Vec<(f64, f64)> = self
            .per_time()
            .into_iter()
            .filter(|p| p.1 > 0.0)
            .map(|(t, r)| (t.ln(), r.ln()))
            .collect();
        let k = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        sxy / sxx
    }
}

fn resolved(st: &FlowState, i: usize) -> bool {
    st.err[i] <= RESOLVE_TOL * st.u[i].abs().max(1.0)
}

pub fn hypothesis_h_scan(
    engine: &SphereEngine,
    v: f64,
    s: f64,
    t_grid: &[f64],
    eps_grid: &[f64],
    eta_h: f64,
) -> Result<HScan> {
    if !(s > 0.0) {
        return Err(DeficitError::Parameter(format!(
            "smoothing time must be positive, got {s}"
        )));
    }
    if let Some(e) = eps_grid.iter().find(|e| !(**e > 0.0 && **e <= 1.0 / 7.0 + 1e-15)) {
        return Err(DeficitError::Parameter(format!("ε must lie in (0, 1/7], got {e}")));
    }
    if let Some(t) = t_grid.iter().find(|t| !(**t > 0.0 && **t < 1.0)) {
        return Err(DeficitError::Parameter(format!("t must lie in (0, 1), got {t}")));
    }
    let geom = engine.geom;
    let cap = BandSet::cap_of_volume(geom, v)?;
    let grid = ThetaGrid::standard(&geom);
    let mut cells = Vec::new();
    let mut skipped = 0;
    for &t in t_grid {
        let flowed = engine.flow_set(&cap, s + t)?;
        let st = grid.state(&geom, &engine.basis, &flowed);
        let tp: Vec<_> = (0..st.len())
            .map(|i| {
                let e = st.clamp_at(i, PHI_INV_CLAMP, CLAMP_ERR_MARGIN);
                (e, st.transformed(i, 1.0, e))
            })
            .collect();
        for &eps in eps_grid {
            let mut cell = HCell {
                t,
                eps,
                low: None,
                high: None,
                nodes_low: 0,
                nodes_high: 0,
                eta: PHI_INV_CLAMP,
            };
            for (i, &(e, p)) in tp.iter().enumerate() {
                if p.clamped || !resolved(&st, i) || p.h == 0.0 {
                    continue;
                }
                let ratio = t.powf(eta_h) * p.gamma2_minus / (p.h * p.h);
                if st.u[i] <= eps {
                    cell.low = Some(cell.low.map_or(ratio, |r: f64| r.max(ratio)));
                    cell.nodes_low += 1;
                    cell.eta = cell.eta.max(e);
                } else if st.uc[i] <= eps {
                    cell.high = Some(cell.high.map_or(ratio, |r: f64| r.max(ratio)));
                    cell.nodes_high += 1;
                    cell.eta = cell.eta.max(e);
                }
            }
            if cell.low.is_none() && cell.high.is_none() {
                skipped += 1;
            }
            cells.push(cell);
        }
    }
    let c_h = cells
        .iter()
        .flat_map(|c| c.low.into_iter().chain(c.high))
        .fold(0.0, f64::max);
    Ok(HScan {
        n: geom.n,
        v,
        s,
        eta_h,
        cells,
        c_h,
        skipped,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelRow {
    pub t: f64,
    /// `sup t²|∇log p_t|²/(1+d²)`.
    pub grad: f64,
    /// `sup t⁴‖∇²log p_t‖²/(1+d²+d⁴)`.
    pub hess_log: f64,
    /// `sup t⁴‖∇²p_t/p_t‖²/(1+d²+d⁴)`.
    pub hess_ratio: f64,
    pub resolved: usize,
    pub excluded: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelScan {
    pub n: usize,
    pub rows: Vec<KernelRow>,
}

impl KernelScan {
    pub fn const_grad(&self) -> f64 {
        self.rows.iter().map(|r| r.grad).fold(0.0, f64::max)
    }

    pub fn const_hess_log(&self) -> f64 {
        self.rows.iter().map(|r| r.hess_log).fold(0.0, f64::max)
    }

    pub fn const_hess_ratio(&self) -> f64 {
        self.rows.iter().map(|r| r.hess_ratio).fold(0.0, f64::max)
    }
}

/// Colatitudes sampled by the kernel scan.
pub const KERNEL_SAMPLES: usize = 2000;

pub fn kernel_bound_scan(geom: &SphereGeometry, t_grid: &[f64]) -> Result<KernelScan> {
    let thetas: Vec<f64> = (0..KERNEL_SAMPLES)
        .map(|j| PI * (j as f64 + 0.5) / KERNEL_SAMPLES as f64)
        .collect();
    let k_max = t_grid.iter().map(|&t| kernel_degree(geom.n, t)).max().unwrap_or(2);
    let basis = GegenbauerBasis::new(geom.n, k_max + 2);
    let mut rows = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let samples = heat_kernel_zonal(geom, &basis, t, &thetas, k_max + 2)?;
        let mut row = KernelRow {
            t,
            grad: 0.0,
            hess_log: 0.0,
            hess_ratio: 0.0,
            resolved: 0,
            excluded: 0,
        };
        for s in samples {
            if !s.resolved {
                row.excluded += 1;
                continue;
            }
            row.resolved += 1;
            let d2 = s.d * s.d;
            row.grad = row.grad.max(t * t * s.grad_log_sq / (1.0 + d2));
            let w = 1.0 + d2 + d2 * d2;
            row.hess_log = row.hess_log.max(t.powi(4) * s.hess_log_sq / w);
            row.hess_ratio = row.hess_ratio.max(t.powi(4) * s.hess_ratio_sq / w);
        }
        rows.push(row);
    }
    Ok(KernelScan { n: geom.n, rows })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapGapRow {
    pub n: usize,
    pub t: f64,
    /// `μ{0 ≤ x₁ ≤ √t}`.
    pub sphere: f64,
    /// `γ₁([0, √t])`.
    pub gauss: f64,
    /// `|sphere − gauss|·n/√t`.
    pub scaled: f64,
}

/// Slab `{0 ≤ x₁ ≤ √t}` of the sphere of radius `√(n−1)` against the
/// Gaussian interval of the same width.
pub fn cap_measure_gap(geom: &SphereGeometry, t_grid: &[f64]) -> Result<Vec<CapGapRow>> {
    t_grid
        .iter()
        .map(|&t| {
            let w = t.sqrt();
            if !(t > 0.0) || w >= geom.r {
                return Err(DeficitError::Parameter(format!(
                    "√t must lie in (0, {}), got t = {t}",
                    geom.r
                )));
            }
            let sphere = geom.band_volume((w / geom.r).acos(), FRAC_PI_2);
            let gauss = cdf(w) - 0.5;
            Ok(CapGapRow {
                n: geom.n,
                t,
                sphere,
                gauss,
                scaled: (sphere - gauss).abs() * geom.nf() / w,
            })
        })
        .collect()
}
