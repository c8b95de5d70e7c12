use std::sync::Arc;

use gauss_engine::{FlowGrid, GaussEngine, HermiteFunction, MehlerData};
use inequality_lab::*;
use line_engine::{discretize_generator, Potential, WeightedLineMeasure};
use profiles::{cdf, iso_gauss, pdf};
use sphere_engine::{BandSet, SphereEngine, ZonalFunction};

fn factorial(k: usize) -> f64 {
    (1..=k).map(|j| j as f64).product()
}

/// Normalized Hermite coefficients of `e^{ax}`: `e^{a²/2} a^k/√k!`.
fn exp_hermite(a: f64, degree: usize) -> HermiteFunction {
    HermiteFunction::new(
        (0..=degree)
            .map(|k| (0.5 * a * a).exp() * a.powi(k as i32) / factorial(k).sqrt())
            .collect(),
    )
}

/// Lighter grid for Mehler quadrature of general data.
fn coarse_grid() -> FlowGrid {
    FlowGrid::new(-8.0, 8.0, 64, 8).unwrap()
}

#[test]
fn commutation_constants_closed_form() {
    let e = std::f64::consts::E;
    assert!((c_kappa(1.0, 0.5) - (e - 1.0)).abs() < 1e-14);
    assert!((d_kappa(1.0, 0.5) - (1.0 - 1.0 / e)).abs() < 1e-14);
    assert!((c_kappa(0.0, 0.3) - 0.6).abs() < 1e-15);
    assert!((d_kappa(0.0, 0.3) - 0.6).abs() < 1e-15);
    // C·D relation: C(κ,t) = e^{2κt} D(κ,t).
    assert!((c_kappa(0.7, 1.3) - (1.4f64 * 1.3).exp() * d_kappa(0.7, 1.3)).abs() < 1e-12);
}

#[test]
fn commutation_is_equality_for_linear_and_strict_for_cubic() {
    let eng = GaussEngine::default();
    let lin = Subject::gauss_poly(&eng, HermiteFunction::basis(1));
    let c = check_commutation(&lin, 0.4, 1.0).unwrap();
    assert!(c.gamma_form.holds() && c.sqrt_form.holds());
    assert!(c.gamma_form.lhs.abs() < 1e-10, "{}", c.gamma_form.lhs);
    assert!(c.sqrt_form.lhs.abs() < 1e-10);

    let cub = Subject::gauss_poly(&eng, HermiteFunction::basis(3));
    let c = check_commutation(&cub, 0.4, 1.0).unwrap();
    assert!(c.gamma_form.holds() && c.sqrt_form.holds());
    assert!(c.gamma_form.lhs < -1e-3, "{}", c.gamma_form.lhs);
    assert!(c.sqrt_is_tighter);
}

#[test]
fn commutation_on_sphere_for_smoothed_cap() {
    let eng = SphereEngine::with_dimension(3).unwrap();
    let cap = BandSet::cap_of_volume(eng.geom, 0.3).unwrap();
    let f = eng.flow_set(&cap, 0.05).unwrap();
    let s = Subject::sphere_poly(&eng, f);
    let c = check_commutation(&s, 0.2, 1.0).unwrap();
    assert!(c.gamma_form.holds(), "{:?}", c.gamma_form);
    assert!(c.sqrt_form.holds(), "{:?}", c.sqrt_form);
}

#[test]
fn kappa_above_curvature_is_rejected() {
    let eng = GaussEngine::default();
    let s = Subject::gauss_poly(&eng, HermiteFunction::basis(2));
    assert!(matches!(check_commutation(&s, 0.3, 1.5), Err(LabError::Parameter(_))));
}

#[test]
fn local_bounds_hold_for_positive_quadratic() {
    let eng = GaussEngine::default();
    let f = HermiteFunction::new(vec![1.0, 0.0, 0.3]);
    let s = Subject::gauss_poly(&eng, f);
    for kind in [LocalKind::Poincare, LocalKind::LogSobolev] {
        let b = check_local_bounds(&s, 0.4, 1.0, kind).unwrap();
        assert!(b.lower.holds(), "{:?}", b.lower);
        assert!(b.upper.holds(), "{:?}", b.upper);
    }
}

#[test]
fn local_poincare_on_linear_is_two_sided_equality() {
    // For f = x: P_t f² − (P_t f)² = 1 − e^{−2t} = D(1,t) = C(1,t)e^{−2t}.
    let eng = GaussEngine::default();
    let s = Subject::gauss_poly(&eng, HermiteFunction::basis(1));
    let b = check_local_bounds(&s, 0.7, 1.0, LocalKind::Poincare).unwrap();
    assert!(b.lower.lhs.abs() < 1e-9 && b.upper.lhs.abs() < 1e-9);
}

#[test]
fn reverse_log_sobolev_constant_is_sharp_on_exponentials() {
    // f = e^{ax}: Ent_{P_t}(f) = P_tf·a²(1−e^{−2t})/2 and Γ(P_tf)/P_tf = a²e^{−2t}P_tf,
    // so Ent = ½C(1,t)·Γ(P_tf)/P_tf exactly; the factor C without ½ overshoots by 2.
    let (a, t) = (0.5, 0.4);
    let eng = GaussEngine::default();
    let s = Subject::gauss_poly(&eng, exp_hermite(a, 48));
    let b = check_local_bounds(&s, t, 1.0, LocalKind::LogSobolev).unwrap();
    assert!(b.lower.holds(), "{:?}", b.lower);
    assert!(b.lower.lhs.abs() < 1e-8, "{}", b.lower.lhs);
    assert_eq!(b.lower.param("c_lower"), Some(0.5 * c_kappa(1.0, t)));
    let x = 0.0;
    let pt = (a * (-t).exp() * x + 0.5 * a * a * (-(-2.0 * t).exp_m1())).exp();
    let ent = pt * a * a * (-(-2.0 * t).exp_m1()) / 2.0;
    let rev = a * a * (-2.0 * t).exp() * pt;
    assert!((c_kappa(1.0, t) * rev / ent - 2.0).abs() < 1e-12);
}

#[test]
fn log_sobolev_chain_rejects_sign_changes() {
    let eng = GaussEngine::default();
    let s = Subject::gauss_poly(&eng, HermiteFunction::basis(1));
    assert!(matches!(
        check_local_bounds(&s, 0.3, 1.0, LocalKind::LogSobolev),
        Err(LabError::Domain(_))
    ));
}

#[test]
fn reverse_iso_half_line_is_sharp() {
    let s = Subject::gauss_data(MehlerData::half_line(0.4));
    let r = check_reverse_iso(&s, 0.3, 1.0).unwrap();
    assert!(r.chain.holds(), "{:?}", r.chain);
    assert!(r.lipschitz.holds(), "{:?}", r.lipschitz);
    assert!((r.lipschitz.lhs - 1.0).abs() < 1e-6, "{}", r.lipschitz.lhs);
}

#[test]
fn reverse_iso_sphere_cap() {
    let eng = SphereEngine::with_dimension(10).unwrap();
    let cap = BandSet::cap_of_volume(eng.geom, 0.3).unwrap();
    let s = Subject::sphere_set(&eng, cap);
    let r = check_reverse_iso(&s, 0.2, 1.0).unwrap();
    assert!(r.chain.holds(), "{:?}", r.chain);
    assert!(r.lipschitz.holds(), "{:?}", r.lipschitz);
    assert!(r.lipschitz.lhs < 1.0);
}

#[test]
fn l1_contraction_linear_closed_form() {
    let eng = GaussEngine::default();
    let s = Subject::gauss_poly(&eng, HermiteFunction::basis(1));
    let r = check_l1_contraction(&s, 0.1).unwrap();
    let lhs = -(-0.1f64).exp_m1() * (2.0 / std::f64::consts::PI).sqrt();
    assert!((r.lhs - lhs).abs() < 1e-9, "{} vs {lhs}", r.lhs);
    assert!((r.rhs - 0.2f64.sqrt()).abs() < 1e-9);
    assert!(r.holds());
}

#[test]
fn reverse_bobkov_equality_for_gaussian_cdf() {
    let r = check_reverse_bobkov(&cdf, &profiles::gauss::sf, &pdf).unwrap();
    assert!((r.rhs - 1.0 / (2.0 * std::f64::consts::PI).sqrt()).abs() < 1e-12);
    assert!(r.slack.abs() < 1e-9, "{:?}", r);
}

#[test]
fn reverse_bobkov_is_strict_for_a_mixture() {
    // Every Φ(ax+b) is an equality case; an average of two is not.
    let f = |x: f64| 0.5 * (cdf(2.0 * x - 1.0) + cdf(2.0 * x + 1.0));
    let fc = |x: f64| 0.5 * (profiles::gauss::sf(2.0 * x - 1.0) + profiles::gauss::sf(2.0 * x + 1.0));
    let df = |x: f64| pdf(2.0 * x - 1.0) + pdf(2.0 * x + 1.0);
    let r = check_reverse_bobkov(&f, &fc, &df).unwrap();
    assert!(r.holds() && r.slack > 1e-4, "{:?}", r);
}

#[test]
fn bobkov_flow_constant_on_half_line() {
    let a = 0.3;
    let s = Subject::gauss_data(MehlerData::half_line(a));
    let times = flow_times(0.01, 1.0, 2);
    let tr = bobkov_flow(&s, &times, 1.0).unwrap();
    let expect = pdf(a);
    for p in &tr.psi {
        assert!((p - expect).abs() < 1e-9, "{p} vs {expect}");
    }
    assert!((tr.limit - expect).abs() < 1e-12);
    assert!(tr.deficit.abs() < 1e-9);
}

#[test]
fn bobkov_flow_constant_on_flowed_half_line() {
    let data = MehlerData::smooth(
        Arc::new(|x: f64| cdf(2.0 * x)),
        Some(Arc::new(|x: f64| profiles::gauss::sf(2.0 * x))),
    );
    let s = Subject::gauss_data_on(data, coarse_grid());
    let tr = bobkov_flow(&s, &flow_times(0.02, 1.0, 2), 1.0).unwrap();
    for p in &tr.psi {
        assert!((p - iso_gauss(0.5)).abs() < 1e-9, "{p}");
    }
}

#[test]
fn bobkov_flow_decreases_for_a_mixture() {
    let data = MehlerData::smooth(
        Arc::new(|x: f64| 0.5 * (cdf(3.0 * x - 2.0) + cdf(3.0 * x + 2.0))),
        Some(Arc::new(|x: f64| {
            0.5 * (profiles::gauss::sf(3.0 * x - 2.0) + profiles::gauss::sf(3.0 * x + 2.0))
        })),
    );
    let s = Subject::gauss_data_on(data, coarse_grid());
    let times = flow_times(0.02, 1.0, 3);
    let tr = bobkov_flow(&s, &times, 1.0).unwrap();
    assert!(tr.max_increase() <= 1e-10, "{}", tr.max_increase());
    assert!(tr.deficit > 1e-3, "{}", tr.deficit);
    assert!((tr.psi.last().unwrap() - iso_gauss(0.5)).abs() < 1e-6);
    for b in &tr.bound {
        assert!(*b >= -1e-10);
    }
    // −dΨ/dt dominates the curvature integrand on every cell.
    assert!(tr.worst_bound_gap(0.0) >= -1e-12, "{}", tr.worst_bound_gap(0.0));
}

#[test]
fn bobkov_flow_sphere_cap_is_monotone() {
    let eng = SphereEngine::with_dimension(10).unwrap();
    let cap = BandSet::cap_of_volume(eng.geom, 0.3).unwrap();
    let s = Subject::sphere_set(&eng, cap);
    let times = flow_times(0.02, s.spectral_gap(), 2);
    let tr = bobkov_flow(&s, &times, 1.0).unwrap();
    assert!(tr.max_increase() <= 1e-8, "{}", tr.max_increase());
    assert!((tr.psi.last().unwrap() - iso_gauss(0.3)).abs() < 1e-6);
}

#[test]
fn bobkov_flow_rejects_rough_start() {
    let s = Subject::gauss_data(MehlerData::half_line(0.0));
    assert!(matches!(bobkov_flow(&s, &[0.0, 1.0], 1.0), Err(LabError::Domain(_))));
}

#[test]
fn perimeter_of_half_line_and_intervals() {
    let s = Subject::gauss_data(MehlerData::half_line(0.5));
    let p = perimeter_via_flow(&s, 0.04, 5).unwrap();
    assert!((p.reference - pdf(0.5)).abs() < 1e-15);
    assert!(p.relative_error() < 1e-2, "{p:?}");

    let iv = MehlerData::intervals(vec![(-1.0, -0.2), (0.5, 2.0)]).unwrap();
    let s = Subject::gauss_data(iv);
    let p = perimeter_via_flow(&s, 0.04, 5).unwrap();
    let reference = pdf(1.0) + pdf(0.2) + pdf(0.5) + pdf(2.0);
    assert!((p.reference - reference).abs() < 1e-15);
    assert!(p.relative_error() < 1e-2, "{p:?}");
}

#[test]
fn perimeter_of_sphere_cap() {
    let eng = SphereEngine::with_dimension(3).unwrap();
    let cap = BandSet::cap_of_volume(eng.geom, 0.3).unwrap();
    let s = Subject::sphere_set(&eng, cap);
    let p = perimeter_via_flow(&s, 0.01, 4).unwrap();
    assert!(p.relative_error() < 1e-2, "{p:?}");
}

#[test]
fn perimeter_needs_a_set() {
    let eng = GaussEngine::default();
    let s = Subject::gauss_poly(&eng, HermiteFunction::basis(1));
    assert!(matches!(perimeter_via_flow(&s, 0.1, 4), Err(LabError::Parameter(_))));
}

#[test]
fn second_order_gauss_h2() {
    let eng = GaussEngine::default();
    let r = second_order_poincare_gauss(&eng, &HermiteFunction::basis(2)).unwrap();
    assert!((r.report.rhs - 2.0).abs() < 1e-12);
    assert!((r.report.lhs - 0.5).abs() < 1e-12);
    assert!(r.report.holds());
    assert!(r.identity_gap() < 1e-9, "{}", r.identity_gap());
}

#[test]
fn second_order_equality_for_linear() {
    let eng = GaussEngine::default();
    let r = second_order_poincare_gauss(&eng, &HermiteFunction::new(vec![0.7, 1.0])).unwrap();
    assert!(r.report.lhs.abs() < 1e-15 && r.report.rhs.abs() < 1e-15);
    assert!(r.centered);
}

#[test]
fn second_order_sphere_degree_two() {
    // λ₂ = 2(n+1)/(n−1) = 4 for n = 3: Σ(λ²−λ) = 12, ½(λ−1)² = 4.5.
    let eng = SphereEngine::with_dimension(3).unwrap();
    let r = second_order_poincare_sphere(&eng, &ZonalFunction::basis(3, 2)).unwrap();
    assert!((r.report.rhs - 12.0).abs() < 1e-10, "{}", r.report.rhs);
    assert!((r.report.lhs - 4.5).abs() < 1e-10);
    assert!(r.identity_gap() < 1e-8);
    let cor = r.corollary.unwrap();
    assert!((cor.lhs - 0.5).abs() < 1e-12);
    assert!(cor.holds());
}

#[test]
fn second_order_line_quartic() {
    let m = WeightedLineMeasure::with_default_domain(Potential::Quartic { c: 0.1 }, 1.0).unwrap();
    let op = discretize_generator(m, 1500).unwrap();
    let f = op.sample(|x| (1.3 * x).sin() + 0.2 * x * x);
    let r = second_order_poincare_line(&op, &f).unwrap();
    assert!(r.report.holds(), "{:?}", r.report);
    assert!(r.report.slack > 0.0);
}

#[test]
fn stein_gaps() {
    assert_eq!(stein_gap(&SpectrumSource::Gauss, 1.0).unwrap(), (0.0, 1));
    assert_eq!(stein_gap(&SpectrumSource::Gauss, 0.5).unwrap(), (0.5, 1));
    let (g, k) = stein_gap(&SpectrumSource::Sphere(3), 1.0).unwrap();
    assert!((g - 0.5).abs() < 1e-14 && k == 1);
    assert!(stein_gap(&SpectrumSource::Sphere(1), 1.0).is_err());
    let m = WeightedLineMeasure::with_default_domain(Potential::Quartic { c: 0.1 }, 1.0).unwrap();
    let op = discretize_generator(m, 1500).unwrap();
    let spec = op.spectrum(8).unwrap();
    let (g, k) = stein_gap(&SpectrumSource::Line(&spec), 1.0).unwrap();
    assert!(g > 0.1 && k == 1);
}

#[test]
fn halfspace_flow_is_affine_with_predicted_slope() {
    let t = 0.3;
    let fit = halfspace_flow_check(&MehlerData::half_line(0.4), t).unwrap();
    assert!(fit.report().unwrap().holds(), "{fit:?}");
    assert!((fit.normalized_slope - fit.k_t).abs() < 1e-6 * fit.k_t, "{fit:?}");
    let two = MehlerData::intervals(vec![(-1.0, 0.0), (1.0, f64::INFINITY)]).unwrap();
    let fit = halfspace_flow_check(&two, t).unwrap();
    assert!(fit.residual > 1e-3, "{fit:?}");
    assert!(!fit.report().unwrap().holds());
}

#[test]
fn report_fields_and_verdicts() {
    let r = InequalityReport::new("x", "gauss", vec![("t".into(), 0.5)], 1.0, 1.0 - 1e-12, 1e-9).unwrap();
    assert_eq!(r.verdict, Verdict::Holds);
    assert_eq!(r.param("t"), Some(0.5));
    let r = InequalityReport::new("x", "gauss", vec![], 2.0, 1.0, 1e-9).unwrap();
    assert_eq!(r.verdict.to_string(), "violated");
    assert!(InequalityReport::new("x", "gauss", vec![], f64::NAN, 1.0, 1e-9).is_err());
}
