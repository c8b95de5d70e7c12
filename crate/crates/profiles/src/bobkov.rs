//! The constant `c_n = √2 Γ((n+1)/2) / Γ(n/2)` and the sphere–Gauss profile gap.

use crate::error::{ProfileError, Result};
use crate::gauss::iso_gauss;
use crate::sphere::SphereGeometry;

/// `c_n`, evaluated through log-gamma so huge `n` does not overflow.
pub fn bobkov_constant(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(ProfileError::Domain(format!("c_n needs n ≥ 2, got {n}")));
    }
    let nf = n as f64;
    let ln_c = 0.5 * std::f64::consts::LN_2 + libm::lgamma(0.5 * (nf + 1.0)) - libm::lgamma(0.5 * nf);
    Ok(ln_c.exp())
}

/// `|(n−1)/c_n² − (1 − 1/(2n))|`.
pub fn asymptotic_residual(n: usize) -> Result<f64> {
    let c = bobkov_constant(n)?;
    let nf = n as f64;
    Ok(((nf - 1.0) / (c * c) - (1.0 - 0.5 / nf)).abs())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileGap {
    pub n: usize,
    /// `max_v I_S(v) − I_γ(v)` over the grid.
    pub sup_gap: f64,
    /// Grid volume attaining the maximum.
    pub argmax: f64,
    /// Smallest point-wise gap seen on the grid.
    pub min_gap: f64,
    /// Grid volume minimizing the ratio `I_S / I_γ`.
    pub ratio_argmin: f64,
    pub asym_residual: f64,
}

/// Scan `I_S − I_γ` on the given volume grid.
pub fn profile_gap_on(n: usize, grid: &[f64]) -> Result<ProfileGap> {
    let geom = SphereGeometry::new(n)?;
    let mut sup_gap = f64::NEG_INFINITY;
    let mut argmax = f64::NAN;
    let mut min_gap = f64::INFINITY;
    let mut min_ratio = f64::INFINITY;
    let mut ratio_argmin = f64::NAN;
    for &v in grid {
        let is = geom.iso_sphere(v)?;
        let ig = iso_gauss(v);
        let gap = is - ig;
        if is / ig < min_ratio {
            min_ratio = is / ig;
            ratio_argmin = v;
        }
        if gap > sup_gap {
            sup_gap = gap;
            argmax = v;
        }
        min_gap = min_gap.min(gap);
    }
    Ok(ProfileGap {
        n,
        sup_gap,
        argmax,
        min_gap,
        ratio_argmin,
        asym_residual: asymptotic_residual(n)?,
    })
}

/// Profile gap on the standard 2001-point grid.
pub fn profile_gap(n: usize) -> Result<ProfileGap> {
    profile_gap_on(n, &crate::profile_grid())
}

/// `I_S(v)^{n/(n−1)} ≤ I_γ(v)` consistency scan; returns the worst violation
/// `max(I_S^{n/(n−1)} − I_γ)` on the grid (non-positive when consistent).
pub fn power_profile_scan(n: usize, grid: &[f64]) -> Result<f64> {
    let geom = SphereGeometry::new(n)?;
    let p = n as f64 / (n as f64 - 1.0);
    let mut worst = f64::NEG_INFINITY;
    for &v in grid {
        worst = worst.max(geom.iso_sphere(v)?.powf(p) - iso_gauss(v));
    }
    Ok(worst)
}
