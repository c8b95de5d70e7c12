//! Zonal sets: unions of bands `θ_{2j−1} ≤ θ ≤ θ_{2j}` around the pole.

use std::f64::consts::PI;

use profiles::SphereGeometry;

use crate::basis::GegenbauerBasis;
use crate::error::{Result, SphereError};
use crate::zonal::{eigenvalue, ZonalFunction};

/// Largest truncation the adaptive flow will use.
pub const DEFAULT_K_LIMIT: usize = 4000;
/// A term is negligible once `|b_k| e^{−λ_k t} (1+λ_k)²` drops below this.
pub const TAIL_TOL: f64 = 1e-17;

#[derive(Debug, Clone, PartialEq)]
pub struct BandSet {
    pub geom: SphereGeometry,
    pub breakpoints: Vec<f64>,
}

impl BandSet {
    pub fn new(geom: SphereGeometry, breakpoints: Vec<f64>) -> Result<Self> {
        if breakpoints.len() % 2 == 1 {
            return Err(SphereError::Validation(
                "breakpoints must come in (start, end) pairs".into(),
            ));
        }
        if breakpoints.iter().any(|t| !(0.0..=PI).contains(t)) {
            return Err(SphereError::Validation("breakpoints must lie in [0, π]".into()));
        }
        if breakpoints.windows(2).any(|w| w[1] <= w[0]) {
            return Err(SphereError::Validation(
                "breakpoints must be strictly increasing (no empty or overlapping bands)".into(),
            ));
        }
        Ok(Self { geom, breakpoints })
    }

    pub fn cap(geom: SphereGeometry, theta0: f64) -> Result<Self> {
        if theta0 <= 0.0 {
            return Ok(Self::empty(geom));
        }
        Self::new(geom, vec![0.0, theta0])
    }

    /// Cap of volume `v` around the north pole.
    pub fn cap_of_volume(geom: SphereGeometry, v: f64) -> Result<Self> {
        Self::cap(geom, geom.cap_colatitude(v)?)
    }

    pub fn empty(geom: SphereGeometry) -> Self {
        Self {
            geom,
            breakpoints: Vec::new(),
        }
    }

    pub fn bands(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.breakpoints.chunks(2).map(|c| (c[0], c[1]))
    }

    pub fn volume(&self) -> f64 {
        self.bands().map(|(a, b)| self.geom.band_volume(a, b)).sum()
    }

    /// Minkowski content: interface densities at interior breakpoints.
    pub fn boundary(&self) -> f64 {
        self.breakpoints
            .iter()
            .filter(|&&t| t > 0.0 && t < PI)
            .map(|&t| self.geom.cap_boundary(t))
            .sum()
    }

    pub fn contains(&self, theta: f64) -> bool {
        self.bands().any(|(a, b)| a <= theta && theta <= b)
    }

    pub fn complement(&self) -> Self {
        let mut pts = vec![0.0];
        pts.extend(&self.breakpoints);
        pts.push(PI);
        // Drop zero-length pieces created at the poles.
        let mut out = Vec::new();
        for pair in pts.chunks(2) {
            if pair[1] > pair[0] {
                out.extend_from_slice(pair);
            }
        }
        Self {
            geom: self.geom,
            breakpoints: out,
        }
    }

    /// Mirror image through the equator.
    pub fn reflected(&self) -> Self {
        let mut pts: Vec<f64> = self.breakpoints.iter().rev().map(|t| PI - t).collect();
        pts.iter_mut().for_each(|t| *t = t.clamp(0.0, PI));
        Self {
            geom: self.geom,
            breakpoints: pts,
        }
    }

    /// Gegenbauer coefficients `b_0..b_K` of the indicator.
    pub fn coefficients(&self, basis: &GegenbauerBasis, k: usize) -> Vec<f64> {
        let mut b = vec![0.0; k + 1];
        b[0] = self.volume();
        for (lo, hi) in self.bands() {
            let upper = cap_moments(&self.geom, basis, hi, k);
            let lower = cap_moments(&self.geom, basis, lo, k);
            for j in 1..=k {
                b[j] += upper[j] - lower[j];
            }
        }
        b
    }

    /// `e^{tΔ} 1_A` with the truncation chosen from the coefficient decay.
    pub fn flowed(&self, basis: &GegenbauerBasis, t: f64, k_limit: usize) -> Result<ZonalFunction> {
        if !(t > 0.0) {
            return Err(SphereError::Domain(format!(
                "indicators are flowed only for t > 0, got {t}"
            )));
        }
        let n = self.geom.n;
        let k = required_degree(n, t, k_limit);
        if k > k_limit {
            return Err(SphereError::Truncation {
                t,
                k: k_limit,
                required: k,
            });
        }
        let basis = if basis.k_max() < k {
            basis.clone().with_degree(k)
        } else {
            basis.clone()
        };
        let b = self.coefficients(&basis, k);
        let mut out = ZonalFunction::new(n, b).heat_flow(t)?;
        // Trim negligible tail terms.
        while out.coeffs.len() > 2 {
            let j = out.coeffs.len() - 1;
            let l = eigenvalue(n, j);
            if out.coeffs[j].abs() * (1.0 + l) * (1.0 + l) < TAIL_TOL {
                out.coeffs.pop();
            } else {
                break;
            }
        }
        Ok(out)
    }
}

/// `∫_{colatitude ≤ θ} p_j dμ = sinⁿθ p_j′(cos θ) / (Z j(j+n−1))` for `j ≥ 1`.
fn cap_moments(geom: &SphereGeometry, basis: &GegenbauerBasis, theta: f64, k: usize) -> Vec<f64> {
    let s = theta.sin();
    if theta <= 0.0 || theta >= PI || s <= 0.0 {
        return vec![0.0; k + 1];
    }
    let scale = (geom.nf() * s.ln() - geom.ln_z).exp();
    let dp = basis.derivatives(theta.cos(), k);
    let nf = geom.nf();
    (0..=k)
        .map(|j| {
            if j == 0 {
                0.0
            } else {
                let jf = j as f64;
                scale * dp[j] / (jf * (jf + nf - 1.0))
            }
        })
        .collect()
}

/// Smallest `K` past which `e^{−λ_k t}(1+λ_k)²` times the worst coefficient
/// size stays below [`TAIL_TOL`]; capped a little above `limit`.
pub fn required_degree(n: usize, t: f64, limit: usize) -> usize {
    // Cap coefficients are bounded by 1 in absolute value (Bessel).
    let mut k = 1;
    loop {
        let l = eigenvalue(n, k);
        if (-l * t).exp() * (1.0 + l) * (1.0 + l) < TAIL_TOL || k > 4 * limit + 16 {
            return k;
        }
        k += 1;
    }
}
