use std::f64::consts::{FRAC_PI_2, PI};

use profiles::quad::integrate_adaptive;
use profiles::{iso_gauss, SphereGeometry};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sphere_engine::{
    arc_jet, eigenvalue, heat_kernel_zonal, BandSet, SphereEngine, SphereError, ThetaGrid, ZonalFunction, ZonalInput,
    ZonalOutput,
};

fn random_zonal(rng: &mut ChaCha8Rng, n: usize, degree: usize) -> ZonalFunction {
    ZonalFunction::new(n, (0..=degree).map(|_| rng.random_range(-1.0..1.0)).collect())
}

#[test]
fn transform_examples() {
    let eng = SphereEngine::new(5, 12, 30).unwrap();
    let one = eng.analyze_fn(|_| 1.0);
    assert!((one.coeffs[0] - 1.0).abs() < 1e-14);
    assert!(one.coeffs[1..].iter().all(|c| c.abs() < 1e-14));
    let lin = eng.analyze_fn(|t| t.cos());
    assert!(lin.coeffs[1].abs() > 0.1);
    assert!(lin.coeffs.iter().enumerate().all(|(k, c)| k == 1 || c.abs() < 1e-14));
    // Oracle: E cos²θ = 1/(n+1) on the n-sphere in ℝ^{n+1}, so b₁ = 1/√(n+1).
    assert!((lin.coeffs[1] - 1.0 / 6f64.sqrt()).abs() < 1e-14);
}

#[test]
fn gram_and_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for n in [2usize, 3, 10, 50] {
        let eng = SphereEngine::new(n, 40, 64).unwrap();
        assert!(eng.gram_error() < 1e-10, "n={n}: {}", eng.gram_error());
        let small = SphereEngine::new(n, 12, 20).unwrap();
        let f = random_zonal(&mut rng, n, 12);
        let ZonalOutput::Values(v) = small.zonal_transform(ZonalInput::Coeffs(f.clone())).unwrap() else {
            panic!()
        };
        let back = small.analyze(&v).unwrap();
        let err = f.sub(&back).coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        assert!(err <= 1e-11, "n={n}: {err}");
    }
    assert!(matches!(
        SphereEngine::new(3, 20, 10),
        Err(SphereError::Aliasing { .. })
    ));
}

#[test]
fn heat_flow_examples() {
    let f = ZonalFunction::basis(3, 1).heat_flow(1.0).unwrap();
    assert!((f.coeffs[1] - (-1.5f64).exp()).abs() < 1e-16);
    assert!(ZonalFunction::basis(3, 1).heat_flow(-1.0).is_err());
    let g = ZonalFunction::new(4, vec![0.2, 0.4, -0.1]);
    assert_eq!(g.heat_flow(0.0).unwrap(), g);

    let eng = SphereEngine::with_dimension(6).unwrap();
    let cap = BandSet::cap_of_volume(eng.geom, 0.3).unwrap();
    let flowed = eng.flow_set(&cap, 0.3).unwrap();
    let late = flowed.heat_flow(200.0).unwrap();
    let x = 0.37;
    assert!((late.eval(&eng.basis, x) - 0.3).abs() < 1e-12);
}

#[test]
fn cap_coefficients_match_quadrature() {
    // Oracle: adaptive quadrature of p_k(cos θ) against the colatitude density.
    for n in [2usize, 5, 20] {
        let eng = SphereEngine::with_dimension(n).unwrap();
        let theta0 = 1.1;
        let set = BandSet::cap(eng.geom, theta0).unwrap();
        let b = set.coefficients(&eng.basis, 12);
        for k in [0usize, 1, 2, 7, 12] {
            let q = integrate_adaptive(
                |t| eng.basis.values(t.cos(), k)[k] * eng.geom.density(t),
                0.0,
                theta0,
                1e-14,
            );
            assert!((b[k] - q).abs() < 1e-12, "n={n} k={k}: {} vs {q}", b[k]);
        }
    }
}

#[test]
fn flowed_cap_solves_heat_equation() {
    // ∂_t u = Δu checked by a fourth-order centred difference in time.
    let eng = SphereEngine::with_dimension(7).unwrap();
    let set = BandSet::new(eng.geom, vec![0.3, 1.4, 2.0, 2.5]).unwrap();
    let (t, h) = (0.1, 1e-3);
    let at = |dt: f64| eng.flow_set(&set, t + dt).unwrap();
    let (p2, p1, m1, m2) = (at(2.0 * h), at(h), at(-h), at(-2.0 * h));
    let u = eng.flow_set(&set, t).unwrap();
    let nm1 = 6.0;
    for &theta in &[0.2f64, 0.9, 1.6, 2.2, 3.0] {
        let x = theta.cos();
        let ev = |f: &ZonalFunction| f.eval(&eng.basis, x);
        let dt = (-ev(&p2) + 8.0 * ev(&p1) - 8.0 * ev(&m1) + ev(&m2)) / (12.0 * h);
        let j = arc_jet(&eng.geom, &eng.basis, &u, theta);
        let lap = j.uss + nm1 * j.tangential;
        assert!((dt - lap).abs() < 1e-6, "θ={theta}: {dt} vs {lap}");
    }
}

#[test]
fn flowed_cap_stays_in_unit_interval_and_keeps_mass() {
    for n in [3usize, 10, 50] {
        let eng = SphereEngine::with_dimension(n).unwrap();
        let grid = ThetaGrid::standard(&eng.geom);
        let cap = BandSet::cap_of_volume(eng.geom, 0.2).unwrap();
        for &t in &[0.02, 0.2, 1.0] {
            let f = eng.flow_set(&cap, t).unwrap();
            let st = grid.state(&eng.geom, &eng.basis, &f);
            assert!((st.mean() - 0.2).abs() < 1e-10, "n={n} t={t}: {}", st.mean());
            for (u, e) in st.u.iter().zip(&st.err) {
                assert!(*u >= -e - 1e-14 && *u <= 1.0 + e + 1e-14);
            }
        }
    }
}

#[test]
fn zonal_gamma_examples() {
    let eng = SphereEngine::new(3, 16, 40).unwrap();
    let f = ZonalFunction::basis(3, 1).sub(&ZonalFunction::constant(3, 0.0));
    let g = eng.gamma_calculus_zonal(&f).unwrap();
    assert!((g.integral_gamma2_minus_gamma() - 0.75).abs() < 1e-12);
    assert!((f.gamma2_minus_gamma() - 0.75).abs() < 1e-15);
    let c = eng.gamma_calculus_zonal(&ZonalFunction::constant(3, 2.0)).unwrap();
    assert!(c
        .gamma
        .iter()
        .chain(&c.gamma2)
        .chain(&c.laplacian)
        .all(|v| v.abs() < 1e-15));

    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for n in [2usize, 3, 8, 30] {
        let eng = SphereEngine::new(n, 16, 40).unwrap();
        let f = random_zonal(&mut rng, n, 8);
        let g = eng.gamma_calculus_zonal(&f).unwrap();
        assert!((g.integral_gamma2_minus_gamma() - f.gamma2_minus_gamma()).abs() < 1e-8);
        assert!((g.integral_gamma2() - g.integral_laplacian_sq()).abs() < 1e-8);
        assert!((g.integral_gamma() - f.dirichlet()).abs() < 1e-10);
        assert!((g.integral_laplacian_sq() - f.laplacian_norm2()).abs() < 1e-8);
    }
}

#[test]
fn band_set_examples() {
    let g2 = SphereGeometry::new(2).unwrap();
    let cap = BandSet::cap(g2, FRAC_PI_2).unwrap();
    assert!((cap.volume() - 0.5).abs() < 1e-14 && (cap.boundary() - 0.5).abs() < 1e-14);
    let e = BandSet::empty(g2);
    assert_eq!((e.volume(), e.boundary()), (0.0, 0.0));
    let g10 = SphereGeometry::new(10).unwrap();
    let c3 = BandSet::cap_of_volume(g10, 0.3).unwrap();
    assert!(c3.boundary() >= iso_gauss(0.3));
    assert!(BandSet::new(g10, vec![1.0, 0.5]).is_err());
    assert!(BandSet::new(g10, vec![0.1, 0.5, 0.4, 0.9]).is_err());
    assert!(BandSet::new(g10, vec![0.1]).is_err());
    let two = BandSet::new(g10, vec![0.0, 0.5, 2.0, PI]).unwrap();
    assert!((two.volume() + two.complement().volume() - 1.0).abs() < 1e-14);
    assert!((two.boundary() - two.complement().boundary()).abs() < 1e-15);
}

// Closed-form kernel on the 3-sphere of radius √2:
// p_t(θ) = Σ (k+1) e^{−k(k+2)t/2} sin((k+1)θ)/sin θ.
fn s3_kernel(t: f64, theta: f64) -> f64 {
    (0..2000)
        .map(|k| {
            let kf = k as f64;
            let z = if theta.abs() < 1e-12 {
                (kf + 1.0) * (kf + 1.0)
            } else {
                (kf + 1.0) * ((kf + 1.0) * theta).sin() / theta.sin()
            };
            (-kf * (kf + 2.0) * t / 2.0).exp() * z
        })
        .sum()
}

#[test]
fn heat_kernel_oracles() {
    let eng = SphereEngine::with_dimension(3).unwrap();
    let grid = ThetaGrid::standard(&eng.geom);
    let s = heat_kernel_zonal(&eng.geom, &eng.basis, 0.2, &grid.theta, 4000).unwrap();
    let mass: f64 = s.iter().zip(&grid.weights).map(|(k, w)| k.p * w).sum();
    assert!((mass - 1.0).abs() < 1e-8);
    assert!(s.iter().all(|k| k.p > 0.0));
    for k in s.iter().step_by(97) {
        let want = s3_kernel(0.2, k.theta);
        assert!(
            (k.p - want).abs() < 1e-10 * want.max(1.0),
            "θ={}: {} vs {want}",
            k.theta,
            k.p
        );
    }
    let late = heat_kernel_zonal(&eng.geom, &eng.basis, 30.0, &[0.0, 1.0, PI], 4000).unwrap();
    assert!(late.iter().all(|k| (k.p - 1.0).abs() < 1e-12));
    let too_small = heat_kernel_zonal(&eng.geom, &eng.basis, 1e-5, &[0.5], 100);
    assert!(matches!(too_small, Err(SphereError::Truncation { .. })));
}

#[test]
fn lambda_gap_integer_check() {
    for n in (2usize..=10_000).step_by(37).chain([10_000]) {
        assert!(eigenvalue(n, 1) > 1.0);
        for k in 2..=64 {
            let l = eigenvalue(n, k);
            assert!((l - 1.0) * (l - 1.0) >= 1.0, "n={n} k={k}");
        }
    }
    assert!((eigenvalue(1_000_000, 1) - 1.0).abs() < 2e-6);
}

#[test]
fn projection_decreases_with_t() {
    use profiles::gauss::quantile_pair;
    let eng = SphereEngine::with_dimension(10).unwrap();
    let grid = ThetaGrid::standard(&eng.geom);
    let cap = BandSet::cap_of_volume(eng.geom, 0.3).unwrap();
    let mut prev = f64::INFINITY;
    for &t in &[0.05, 0.1, 0.2] {
        let f = eng.flow_set(&cap, t).unwrap();
        let st = grid.state(&eng.geom, &eng.basis, &f);
        let h: Vec<f64> =
            st.u.iter()
                .map(|&u| quantile_pair(u.clamp(1e-300, 1.0), (1.0 - u).clamp(1e-300, 1.0)))
                .collect();
        let p1: Vec<f64> = grid.theta.iter().map(|t| eng.basis.values(t.cos(), 1)[1]).collect();
        let b1 = grid.integrate_values(h.iter().zip(&p1).map(|(a, b)| a * b));
        let resid = grid.integrate_values(h.iter().zip(&p1).map(|(a, p)| (a - b1 * p).powi(2)));
        assert!(resid < prev, "t={t}: {resid} ≥ {prev}");
        prev = resid;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn nonnegative_data_stays_nonnegative(seed in 0u64..500, t in 0.01f64..1.0) {
        let eng = SphereEngine::new(4, 6, 12).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // Squares of random polynomials are nonnegative.
        let g = random_zonal(&mut rng, 4, 3);
        let vals: Vec<f64> = eng.rule.nodes.iter().map(|&x| g.eval(&eng.basis, x).powi(2)).collect();
        let f = eng.analyze(&vals).unwrap();
        let flowed = f.heat_flow(t).unwrap();
        let min_f = vals.iter().cloned().fold(f64::INFINITY, f64::min);
        for k in 0..=40 {
            let x = -1.0 + 2.0 * k as f64 / 40.0;
            prop_assert!(flowed.eval(&eng.basis, x) >= min_f.min(0.0) - 1e-12);
        }
        prop_assert!((flowed.mean() - f.mean()).abs() < 1e-15);
    }
}
