//! Special functions and isoperimetric profiles.
//!
//! Gaussian side: `φ`, `Φ`, `Φ⁻¹` and `I_γ = φ∘Φ⁻¹`. Sphere side: the model
//! sphere of dimension `n` and radius `√(n−1)`, its cap volumes, cap
//! boundaries and profile, and the constant `c_n`. The quadrature and
//! tridiagonal eigen-solver helpers are shared by the engines.

pub mod bobkov;
pub mod error;
pub mod gauss;
pub mod quad;
pub mod sphere;
pub mod state;
pub mod tridiag;

pub use bobkov::{bobkov_constant, profile_gap, ProfileGap};
pub use error::ProfileError;
pub use gauss::{cdf, gauss_cdf_quantile, iso_gauss, pdf, quantile, sf, GaussMode};
pub use sphere::{SphereGeometry, SphereInput, SphereProfilePoint};
pub use state::{FlowState, TransformedPoint, PHI_INV_CLAMP};

/// Uniform grid of `count` points on `[lo, hi]`.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / (count - 1) as f64;
            (0..count).map(|i| lo + step * i as f64).collect()
        }
    }
}

/// The 2001-point volume grid used by profile scans.
pub fn profile_grid() -> Vec<f64> {
    linspace(1e-4, 1.0 - 1e-4, 2001)
}
