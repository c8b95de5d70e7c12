use std::io::Write;

use line_engine::{
    discretize_generator, functional_report, stein_gap, DiscreteOperator, LineError, Potential, PotentialTable,
    WeightedLineMeasure,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn gaussian_op(m: usize) -> DiscreteOperator {
    let meas = WeightedLineMeasure::new(Potential::Gaussian, -8.0, 8.0, 1.0).unwrap();
    discretize_generator(meas, m).unwrap()
}

fn quartic_op(m: usize) -> DiscreteOperator {
    let meas = WeightedLineMeasure::with_default_domain(Potential::Quartic { c: 0.1 }, 1.0).unwrap();
    discretize_generator(meas, m).unwrap()
}

fn random_poly(rng: &mut ChaCha8Rng, deg: usize) -> Vec<f64> {
    (0..=deg)
        .map(|j| rng.random_range(-1.0..1.0) / (1.0 + j as f64))
        .collect()
}

fn eval_poly(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, a| acc * x + a)
}

#[test]
fn gaussian_spectrum_matches_hermite_levels() {
    let op = gaussian_op(2000);
    let spec = op.spectrum(6).unwrap();
    assert_eq!(spec.values[0], 0.0);
    assert!((spec.values[1] - 1.0).abs() < 1e-4, "λ₁ = {}", spec.values[1]);
    for (k, l) in spec.values.iter().enumerate() {
        assert!((l - k as f64).abs() < 1e-3, "λ_{k} = {l}");
    }
    // Orthonormality in the discrete L²(μ).
    for i in 0..6 {
        for j in 0..=i {
            let g = op.inner(&spec.functions[i], &spec.functions[j]);
            let target = if i == j { 1.0 } else { 0.0 };
            assert!((g - target).abs() < 1e-9, "Gram[{i},{j}] = {g}");
        }
    }
    // First eigenfunction is x (unit norm under the standard Gaussian).
    let diff: Vec<f64> = spec.functions[1].iter().zip(&op.x).map(|(p, x)| p - x).collect();
    assert!(op.inner(&diff, &diff).sqrt() < 1e-3);
}

#[test]
fn quartic_spectrum_obeys_milman_bound_and_converges() {
    let coarse = quartic_op(2000).spectrum(6).unwrap();
    let fine = quartic_op(4000).spectrum(6).unwrap();
    for k in 0..6 {
        assert!(coarse.values[k] >= k as f64 - 1e-3, "λ_{k} = {}", coarse.values[k]);
        // Second-order scheme: halving h cuts the error by ~4.
        assert!((coarse.values[k] - fine.values[k]).abs() < 1e-3);
    }
    let (gap, k) = stein_gap(&coarse, 1.0).unwrap();
    assert_eq!(k, 1);
    assert!(gap > 0.1, "quartic has no linear extremizer, gap {gap}");
}

#[test]
fn double_well_capped_spectrum_obeys_milman_bound() {
    let meas = WeightedLineMeasure::with_default_domain(Potential::DoubleWellCapped { floor: 1.0 }, 1.0).unwrap();
    let spec = discretize_generator(meas, 2000).unwrap().spectrum(6).unwrap();
    for (k, l) in spec.values.iter().enumerate() {
        assert!(*l >= k as f64 - 1e-3, "λ_{k} = {l}");
    }
}

#[test]
fn operator_is_reversible_and_kills_constants() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for op in [gaussian_op(500), quartic_op(700)] {
        let ones = vec![1.0; op.len()];
        assert!(op.apply(&ones).iter().all(|v| v.abs() < 1e-9));
        for _ in 0..5 {
            let f: Vec<f64> = (0..op.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
            let g: Vec<f64> = (0..op.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
            let lf = op.apply(&f);
            let lg = op.apply(&g);
            let a = op.inner(&lf, &g);
            let b = op.inner(&f, &lg);
            let scale = op.inner(&lf, &lf).sqrt() * op.inner(&g, &g).sqrt();
            assert!((a - b).abs() <= 1e-10 * scale, "asymmetry {}", (a - b).abs() / scale);
        }
        let spec = op.spectrum(5).unwrap();
        assert!(spec.values[1..].iter().all(|l| *l > 0.0));
    }
}

#[test]
fn discrete_generator_is_second_order_on_smooth_functions() {
    // L x³ = 6x − 3x³ for V = x²/2.
    let mut errs = Vec::new();
    for m in [801, 1601] {
        let op = gaussian_op(m);
        let f = op.sample(|x| x.powi(3));
        let lf = op.apply(&f);
        let e =
            op.x.iter()
                .zip(&lf)
                .filter(|(x, _)| x.abs() < 4.0)
                .map(|(x, l)| (l - (6.0 * x - 3.0 * x.powi(3))).abs())
                .fold(0.0, f64::max);
        errs.push(e);
    }
    let ratio = errs[0] / errs[1];
    assert!(ratio > 3.5 && ratio < 4.5, "order ratio {ratio}");
}

#[test]
fn semigroup_matches_ornstein_uhlenbeck_and_preserves_mass() {
    let op = gaussian_op(2000);
    let spec = op.spectrum(60).unwrap();
    let x = op.x.clone();
    assert_eq!(op.semigroup_apply(&spec, &x, 0.0, 1e-8).unwrap(), x);
    let ones = vec![1.0; op.len()];
    let p1 = op.semigroup_apply(&spec, &ones, 0.5, 1e-8).unwrap();
    assert!(p1.iter().zip(&op.w).all(|(v, w)| w * (v - 1.0).abs() < 1e-12));
    // P_t x = e^{−t} x; P_t h₂ = e^{−2t} h₂.
    for &t in &[0.1, 0.5, 2.0] {
        let px = op.semigroup_apply(&spec, &x, t, 1e-8).unwrap();
        let d: Vec<f64> = px.iter().zip(&x).map(|(p, x)| p - (-t).exp() * x).collect();
        assert!(op.inner(&d, &d).sqrt() < 1e-4);
        let h2 = op.sample(|x| (x * x - 1.0) / 2f64.sqrt());
        let ph2 = op.semigroup_apply(&spec, &h2, t, 1e-8).unwrap();
        let d: Vec<f64> = ph2.iter().zip(&h2).map(|(p, h)| p - (-2.0 * t).exp() * h).collect();
        assert!(op.inner(&d, &d).sqrt() < 1e-3);
    }
    // Mass and spectral-gap contraction for a rough function.
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let f: Vec<f64> =
        op.x.iter()
            .map(|x| (x * 1.3).sin() + rng.random_range(-0.1..0.1))
            .collect();
    let m0 = op.mean(&f);
    for &t in &[0.2, 1.0] {
        let pf = op.semigroup_apply(&spec, &f, t, 1e-6).unwrap();
        assert!((op.mean(&pf) - m0).abs() < 1e-8);
        let c: Vec<f64> = f.iter().map(|v| v - m0).collect();
        let pc: Vec<f64> = pf.iter().map(|v| v - m0).collect();
        assert!(op.inner(&pc, &pc).sqrt() <= (-t).exp() * op.inner(&c, &c).sqrt() + 1e-12);
    }
}

#[test]
fn semigroup_reports_insufficient_modes() {
    let op = gaussian_op(1000);
    let spec = op.spectrum(5).unwrap();
    let f = op.sample(|x| if x > 0.0 { 1.0 } else { 0.0 });
    match op.semigroup_apply(&spec, &f, 0.01, 1e-8) {
        Err(LineError::IncreaseModes { .. }) => {}
        other => panic!("expected increase-modes error, got {other:?}"),
    }
    assert!(op.semigroup_apply(&spec, &f, -1.0, 1e-8).is_err());
}

#[test]
fn variance_decays_at_curvature_rate_on_quartic() {
    let op = quartic_op(1500);
    let spec = op.spectrum(80).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..4 {
        let c = random_poly(&mut rng, 5);
        let f = op.sample(|x| eval_poly(&c, x / 3.0));
        let var = |g: &[f64]| {
            let m = op.mean(g);
            op.w.iter().zip(g).map(|(w, v)| w * (v - m).powi(2)).sum::<f64>()
        };
        for &t in &[0.1, 0.7] {
            let pf = op.semigroup_apply(&spec, &f, t, 1e-8).unwrap();
            assert!(var(&pf) <= (-2.0 * t).exp() * var(&f) + 1e-12);
        }
    }
}

#[test]
fn functional_report_equality_and_spectral_cases() {
    let op = gaussian_op(2000);
    let r = functional_report(&op, &op.x).unwrap();
    assert!((r.variance - 1.0).abs() < 1e-9);
    assert!((r.dirichlet - 1.0).abs() < 1e-9);
    assert!(r.delta_sg.abs() < 1e-9);
    assert!(r.gamma2_minus_gamma.abs() < 1e-12);
    assert!(r.projection_residual < 1e-12);
    assert!((r.v0 - 1.0).abs() < 1e-9);

    let h2 = op.sample(|x| (x * x - 1.0) / 2f64.sqrt());
    let r = functional_report(&op, &h2).unwrap();
    let norm2 = op.inner(&h2, &h2);
    assert!((r.gamma2_minus_gamma - 2.0 * norm2).abs() < 1e-8);
    assert!((r.f_plus_lf_sq - norm2).abs() < 1e-8);
    assert!((r.chain_slack - 1.5 * norm2).abs() < 1e-8);
    // Ent((1+εx)²) ≈ 2ε² for small ε (log-Sobolev equality to leading order).
    let eps = 1e-3;
    let f = op.sample(|x| 1.0 + eps * x);
    let r = functional_report(&op, &f).unwrap();
    assert!((r.entropy - 2.0 * eps * eps).abs() < 1e-8);
    assert!(functional_report(&op, &vec![0.0; op.len()]).is_err());
}

#[test]
fn second_order_chain_and_projection_bound_on_quartic() {
    let op = quartic_op(2000);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut ratios = Vec::new();
    for _ in 0..40 {
        let c = random_poly(&mut rng, 6);
        let f = op.sample(|x| eval_poly(&c, x / 2.0) + 0.3 * (x + c[0]).sin());
        let r = functional_report(&op, &f).unwrap();
        assert!(r.chain_slack >= -1e-8, "chain slack {}", r.chain_slack);
        assert!(r.delta_sg >= -1e-8);
        assert!(r.gamma2_minus_gamma >= -1e-12);
        ratios.push(r.delta_sg / r.projection_residual);
    }
    let c_fit = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    assert!(c_fit > 0.0 && c_fit.is_finite(), "fitted constant {c_fit}");
}

#[test]
fn truncation_and_curvature_errors() {
    match WeightedLineMeasure::new(Potential::Gaussian, -3.0, 3.0, 1.0) {
        Err(LineError::DomainTooSmall {
            suggest_a, suggest_b, ..
        }) => {
            assert!(suggest_a < -3.0 && suggest_b > 3.0);
        }
        other => panic!("expected domain-too-small, got {other:?}"),
    }
    let meas = WeightedLineMeasure::new(Potential::Gaussian, -8.0, 8.0, 1.0).unwrap();
    assert!(meas.mass_loss < 1e-10);
    assert!(discretize_generator(meas.clone(), 50).is_err());
    let strict = WeightedLineMeasure::new(Potential::Gaussian, -8.0, 8.0, 1.5).unwrap();
    assert!(matches!(
        discretize_generator(strict, 500),
        Err(LineError::Curvature { .. })
    ));
    assert!(gaussian_op(1000).spectrum(101).is_err());
}

#[test]
fn tabulated_potential_reproduces_gaussian() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(file, "x,V,dV,d2V").unwrap();
    for i in 0..=400 {
        let x = -9.0 + 18.0 * i as f64 / 400.0;
        writeln!(file, "{x},{},{x},1", 0.5 * x * x).unwrap();
    }
    file.flush().unwrap();
    let table = PotentialTable::from_csv(file.path()).unwrap();
    let pot = Potential::Table(table);
    for &x in &[-2.3, 0.0, 0.77, 4.1] {
        assert!((pot.v(x) - 0.5 * x * x).abs() < 1e-12);
        assert!((pot.dv(x) - x).abs() < 1e-12);
        assert!((pot.d2v(x) - 1.0).abs() < 1e-12);
    }
    let meas = WeightedLineMeasure::new(pot, -8.0, 8.0, 1.0).unwrap();
    let spec = discretize_generator(meas, 2000).unwrap().spectrum(4).unwrap();
    for (k, l) in spec.values.iter().enumerate() {
        assert!((l - k as f64).abs() < 1e-3);
    }
    let mut bad = tempfile::NamedTempFile::new().unwrap();
    writeln!(bad, "x,V,dV,d2V\n0,0,0,1\n0,1,1,1").unwrap();
    bad.flush().unwrap();
    assert!(PotentialTable::from_csv(bad.path()).is_err());
}
