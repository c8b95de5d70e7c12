//! Zonal heat kernel `p_t(θ) = Σ_k e^{−λ_k t} p_k(1) p_k(cos θ)` (density of
//! `e^{tΔ}δ_pole` with respect to `μ`) and the size of its log-derivatives.

use profiles::SphereGeometry;

use crate::basis::GegenbauerBasis;
use crate::error::{Result, SphereError};
use crate::grid::arc_jet;
use crate::zonal::{eigenvalue, ZonalFunction};

/// Relative tail tolerance at the pole, where every term is positive.
pub const KERNEL_TAIL_TOL: f64 = 1e-16;
/// A node is resolved when `p_t` exceeds this multiple of its error estimate.
pub const KERNEL_RESOLVE_MARGIN: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSample {
    pub theta: f64,
    /// Geodesic distance `Rθ` to the pole.
    pub d: f64,
    pub p: f64,
    /// `|∇ log p|²`.
    pub grad_log_sq: f64,
    /// `‖∇² log p‖²_HS`.
    pub hess_log_sq: f64,
    /// `‖∇² p / p‖²_HS`.
    pub hess_ratio_sq: f64,
    /// Whether `p` clears the round-off floor of the series.
    pub resolved: bool,
}

/// Log of `p_k(1)²` (the zonal reproducing value `dim H_k`).
fn ln_pole_value_sq(n: usize, k: usize) -> f64 {
    let (nf, kf) = (n as f64, k as f64);
    if k == 0 {
        return 0.0;
    }
    ((2.0 * kf + nf - 1.0) / (nf - 1.0)).ln() + libm::lgamma(kf + nf - 1.0)
        - libm::lgamma(kf + 1.0)
        - libm::lgamma(nf - 1.0)
}

/// Truncation that makes the pole tail `Σ_{k>K} e^{−λ_k t} p_k(1)² (1+λ_k)²`
/// negligible.
pub fn kernel_degree(n: usize, t: f64) -> usize {
    let ln_tol = KERNEL_TAIL_TOL.ln();
    let mut k = 1usize;
    let mut below = 0;
    loop {
        let l = eigenvalue(n, k);
        let ln_term = -l * t + ln_pole_value_sq(n, k) + 2.0 * (1.0 + l).ln();
        if ln_term < ln_tol {
            below += 1;
            if below >= 8 {
                return k;
            }
        } else {
            below = 0;
        }
        k += 1;
        if k > 200_000 {
            return k;
        }
    }
}

/// Kernel coefficients in the orthonormal basis.
pub fn kernel_function(
    geom: &SphereGeometry,
    basis: &GegenbauerBasis,
    t: f64,
    k_limit: usize,
) -> Result<ZonalFunction> {
    if !(t > 0.0) {
        return Err(SphereError::Domain(format!("kernel needs t > 0, got {t}")));
    }
    let k = kernel_degree(geom.n, t);
    if k > k_limit || k > basis.k_max() {
        return Err(SphereError::Truncation {
            t,
            k: k_limit.min(basis.k_max()),
            required: k,
        });
    }
    let pole = basis.values(1.0, k);
    let coeffs = pole
        .iter()
        .enumerate()
        .map(|(j, p)| (-eigenvalue(geom.n, j) * t).exp() * p)
        .collect();
    Ok(ZonalFunction::new(geom.n, coeffs))
}

pub fn heat_kernel_zonal(
    geom: &SphereGeometry,
    basis: &GegenbauerBasis,
    t: f64,
    thetas: &[f64],
    k_limit: usize,
) -> Result<Vec<KernelSample>> {
    let f = kernel_function(geom, basis, t, k_limit)?;
    let nm1 = geom.nf() - 1.0;
    thetas
        .iter()
        .map(|&theta| {
            let j = arc_jet(geom, basis, &f, theta);
            let p = j.u;
            let g = j.us / p;
            let radial = j.uss / p;
            let tang = j.tangential / p;
            let sample = KernelSample {
                theta,
                d: geom.r * theta,
                p,
                grad_log_sq: g * g,
                hess_log_sq: (radial - g * g).powi(2) + nm1 * tang * tang,
                hess_ratio_sq: radial * radial + nm1 * tang * tang,
                resolved: p > KERNEL_RESOLVE_MARGIN * j.err,
            };
            if sample.resolved && !(sample.grad_log_sq.is_finite() && sample.hess_log_sq.is_finite()) {
                return Err(SphereError::Numerical(format!("non-finite kernel data at θ = {theta}")));
            }
            Ok(sample)
        })
        .collect()
}
