//! Standard normal density, distribution function, quantile and profile.

use crate::error::{ProfileError, Result};

pub const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;
const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GaussMode {
    Cdf,
    Quantile,
    Pdf,
}

/// Density `φ(x)`.
pub fn pdf(x: f64) -> f64 {
    INV_SQRT_2PI * (-0.5 * x * x).exp()
}

/// Distribution function `Φ(x)`, accurate in the lower tail.
pub fn cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

/// Upper tail `1 − Φ(x)`, accurate for large positive `x`.
pub fn sf(x: f64) -> f64 {
    0.5 * libm::erfc(x * FRAC_1_SQRT_2)
}

// Rational initial guess (Acklam), refined by Halley steps below.
fn initial_guess(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_69e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996,
        3.754_408_661_907_416,
    ];
    if p < 0.02425 {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    }
}

// Quantile for p ≤ 1/2, where Φ is evaluated on its accurate side.
fn lower_quantile(p: f64) -> f64 {
    let mut x = initial_guess(p);
    for _ in 0..8 {
        let dens = pdf(x);
        if dens == 0.0 {
            break;
        }
        let r = (cdf(x) - p) / dens;
        let step = r / (1.0 + 0.5 * x * r);
        x -= step;
        if step.abs() <= 1e-16 * x.abs().max(1.0) {
            break;
        }
    }
    x
}

/// Quantile `Φ⁻¹(v)` for `v ∈ (0,1)`.
pub fn quantile(v: f64) -> Result<f64> {
    if !(v > 0.0 && v < 1.0) {
        return Err(ProfileError::Domain(format!("quantile requires v in (0,1), got {v}")));
    }
    Ok(if v <= 0.5 {
        lower_quantile(v)
    } else {
        -lower_quantile(1.0 - v)
    })
}

/// Gaussian isoperimetric profile `I_γ(v) = φ(Φ⁻¹(v))`, zero at the endpoints.
pub fn iso_gauss(v: f64) -> f64 {
    if v <= 0.0 || v >= 1.0 || v.is_nan() {
        return 0.0;
    }
    let w = v.min(1.0 - v);
    pdf(lower_quantile(w))
}

/// `I_γ` evaluated from a value and its complement, both accurate.
pub fn iso_gauss_pair(u: f64, uc: f64) -> f64 {
    let w = u.min(uc);
    if w <= 0.0 {
        return 0.0;
    }
    pdf(lower_quantile(w))
}

/// `Φ⁻¹` evaluated from a value and its complement `1 − u` (both accurate).
pub fn quantile_pair(u: f64, uc: f64) -> f64 {
    if u <= uc {
        lower_quantile(u)
    } else {
        -lower_quantile(uc)
    }
}

/// Dispatch over the three evaluation modes.
pub fn gauss_cdf_quantile(x_or_v: f64, mode: GaussMode) -> Result<f64> {
    match mode {
        GaussMode::Cdf => Ok(cdf(x_or_v)),
        GaussMode::Pdf => Ok(pdf(x_or_v)),
        GaussMode::Quantile => quantile(x_or_v),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_and_center() {
        assert_eq!(cdf(0.0), 0.5);
        assert!((pdf(0.0) - 0.398_942_280_401_432_7).abs() < 1e-16);
        assert_eq!(iso_gauss(0.0), 0.0);
        assert_eq!(iso_gauss(1.0), 0.0);
        assert!(quantile(0.0).is_err());
        assert!(quantile(1.0).is_err());
    }

    #[test]
    fn round_trip_deep_tail() {
        for &v in &[1e-15, 1e-10, 3e-7, 0.01, 0.3, 0.5, 0.77, 0.999] {
            let x = quantile(v).unwrap();
            assert!((cdf(x) - v).abs() <= 1e-13 * v.max(1e-2), "v={v}");
        }
    }
}
