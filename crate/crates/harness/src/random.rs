//! Seeded random test functions of bounded chaos degree.

use gauss_engine::HermiteFunction;
use line_engine::Spectrum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sphere_engine::ZonalFunction;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn coeffs(rng: &mut impl Rng, count: usize) -> Vec<f64> {
    (0..count).map(|_| rng.random_range(-1.0..=1.0)).collect()
}

/// Hermite chaos up to `degree` with coefficients uniform in `[−1, 1]`.
pub fn random_hermite(rng: &mut impl Rng, degree: usize) -> HermiteFunction {
    HermiteFunction::new(coeffs(rng, degree + 1))
}

pub fn random_zonal(rng: &mut impl Rng, n: usize, degree: usize) -> ZonalFunction {
    ZonalFunction::new(n, coeffs(rng, degree + 1))
}

/// Combination of the first `degree + 1` discrete eigenfunctions.
pub fn random_line(rng: &mut impl Rng, spec: &Spectrum, degree: usize) -> Vec<f64> {
    let k = (degree + 1).min(spec.functions.len());
    let c = coeffs(rng, k);
    let m = spec.functions[0].len();
    (0..m)
        .map(|i| c.iter().zip(&spec.functions).map(|(a, phi)| a * phi[i]).sum())
        .collect()
}
