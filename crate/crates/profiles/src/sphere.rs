//! The model sphere of dimension `n` and radius `√(n−1)` (Ricci curvature 1),
//! with the uniform probability measure. Caps are measured from a pole by
//! the colatitude `θ`; the geodesic distance is `s = Rθ`.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{ProfileError, Result};
use crate::quad::integrate_adaptive;

const CAP_REL_TOL: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereGeometry {
    pub n: usize,
    /// Radius `√(n−1)`.
    pub r: f64,
    /// `Z = ∫₀^π sin^{n−1}θ dθ`.
    pub z: f64,
    pub ln_z: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SphereInput {
    Colatitude(f64),
    Volume(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereProfilePoint {
    pub theta: f64,
    pub volume: f64,
    pub boundary: f64,
}

impl SphereGeometry {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(ProfileError::Domain(format!("sphere dimension must be ≥ 2, got {n}")));
        }
        let nf = n as f64;
        // Z = √π Γ(n/2) / Γ((n+1)/2).
        let ln_z = 0.5 * PI.ln() + libm::lgamma(0.5 * nf) - libm::lgamma(0.5 * (nf + 1.0));
        Ok(Self {
            n,
            r: (nf - 1.0).sqrt(),
            z: ln_z.exp(),
            ln_z,
        })
    }

    pub fn nf(&self) -> f64 {
        self.n as f64
    }

    /// Colatitude density `sin^{n−1}θ / Z` of the uniform measure.
    pub fn density(&self, theta: f64) -> f64 {
        let s = theta.sin();
        if s <= 0.0 {
            return 0.0;
        }
        ((self.nf() - 1.0) * s.ln() - self.ln_z).exp()
    }

    /// `Δ` eigenvalue `λ_k = k(n+k−1)/(n−1)` on zonal degree-`k` functions.
    pub fn eigenvalue(&self, k: usize) -> f64 {
        let k = k as f64;
        k * (self.nf() + k - 1.0) / (self.nf() - 1.0)
    }

    fn cap_volume_lower(&self, theta: f64) -> f64 {
        integrate_adaptive(|x| self.density(x), 0.0, theta, CAP_REL_TOL)
    }

    /// Normalized volume of the cap `{colatitude ≤ θ}`.
    pub fn cap_volume(&self, theta: f64) -> f64 {
        let theta = theta.clamp(0.0, PI);
        if theta <= FRAC_PI_2 {
            self.cap_volume_lower(theta)
        } else {
            1.0 - self.cap_volume_lower(PI - theta)
        }
    }

    /// Mass of the band `{θ_a ≤ colatitude ≤ θ_b}`, accurate for thin bands.
    pub fn band_volume(&self, theta_a: f64, theta_b: f64) -> f64 {
        if theta_b <= theta_a {
            return 0.0;
        }
        let a = theta_a.clamp(0.0, PI);
        let b = theta_b.clamp(0.0, PI);
        if b - a < 0.5 {
            integrate_adaptive(|x| self.density(x), a, b, CAP_REL_TOL)
        } else {
            self.cap_volume(b) - self.cap_volume(a)
        }
    }

    /// Boundary measure `sin^{n−1}θ / (Z R)` of the cap of colatitude `θ`.
    pub fn cap_boundary(&self, theta: f64) -> f64 {
        self.density(theta) / self.r
    }

    /// Colatitude of the cap with volume `v`.
    pub fn cap_colatitude(&self, v: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&v) {
            return Err(ProfileError::Domain(format!("cap volume must be in [0,1], got {v}")));
        }
        if v == 0.0 {
            return Ok(0.0);
        }
        if v == 1.0 {
            return Ok(PI);
        }
        if v > 0.5 {
            return Ok(PI - self.lower_colatitude(1.0 - v)?);
        }
        self.lower_colatitude(v)
    }

    // Solve V(θ) = v on (0, π/2] by safeguarded Newton on log V.
    fn lower_colatitude(&self, v: f64) -> Result<f64> {
        if v == 0.5 {
            return Ok(FRAC_PI_2);
        }
        let target = v.ln();
        let mut lo = 0.0_f64;
        let mut hi = FRAC_PI_2;
        let guess = FRAC_PI_2 + crate::gauss::quantile(v)? / self.r;
        let mut theta = if guess > 1e-3 && guess < FRAC_PI_2 {
            guess
        } else {
            0.5 * FRAC_PI_2
        };
        let mut vol = self.cap_volume_lower(theta);
        for _ in 0..200 {
            if vol < v {
                lo = lo.max(theta);
            } else {
                hi = hi.min(theta);
            }
            let g = vol.ln() - target;
            if g.abs() <= 1e-15 {
                return Ok(theta);
            }
            let slope = self.density(theta) / vol;
            let mut next = theta - g / slope;
            if !(next > lo && next < hi) || !next.is_finite() {
                next = 0.5 * (lo + hi);
            }
            if (next - theta).abs() <= 1e-16 * theta {
                return Ok(next);
            }
            vol = if (next - theta).abs() < 0.25 * theta {
                if next > theta {
                    vol + integrate_adaptive(|x| self.density(x), theta, next, CAP_REL_TOL)
                } else {
                    vol - integrate_adaptive(|x| self.density(x), next, theta, CAP_REL_TOL)
                }
            } else {
                self.cap_volume_lower(next)
            };
            theta = next;
        }
        Err(ProfileError::Numerical(format!(
            "cap inversion did not converge for v = {v}, n = {}",
            self.n
        )))
    }

    /// Cap data from either a colatitude or a volume.
    pub fn sphere_profile(&self, input: SphereInput) -> Result<SphereProfilePoint> {
        let theta = match input {
            SphereInput::Colatitude(t) => {
                if !(0.0..=PI).contains(&t) {
                    return Err(ProfileError::Domain(format!("colatitude must be in [0,π], got {t}")));
                }
                t
            }
            SphereInput::Volume(v) => self.cap_colatitude(v)?,
        };
        let volume = match input {
            SphereInput::Volume(v) => v,
            SphereInput::Colatitude(t) => self.cap_volume(t),
        };
        Ok(SphereProfilePoint {
            theta,
            volume,
            boundary: self.cap_boundary(theta),
        })
    }

    /// Spherical isoperimetric profile `I_S(v)`.
    pub fn iso_sphere(&self, v: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&v) {
            return Err(ProfileError::Domain(format!("volume must be in [0,1], got {v}")));
        }
        let w = v.min(1.0 - v);
        if w <= 0.0 {
            return Ok(0.0);
        }
        Ok(self.cap_boundary(self.lower_colatitude(w)?))
    }
}
