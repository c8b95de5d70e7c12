use std::f64::consts::PI;

use deficit_lab::*;
use profiles::{cdf, iso_gauss, quantile, SphereGeometry};
use sphere_engine::{BandSet, SphereEngine};

fn geom(n: usize) -> SphereGeometry {
    SphereGeometry::new(n).unwrap()
}

#[test]
fn perturbed_sets_keep_their_volume() {
    for n in [3, 20, 50] {
        for family in Family::ALL {
            for v in [0.3, 0.5] {
                for s in [1e-6, 1e-3, 0.05] {
                    let set = make_perturbed_set(geom(n), family, v, s).unwrap();
                    assert!((set.volume() - v).abs() < 1e-10, "{family} n={n} v={v} s={s}");
                }
            }
        }
    }
}

#[test]
fn zero_perturbation_is_the_exact_cap() {
    let g = geom(20);
    for v in [0.2, 0.5, 0.8] {
        let set = make_perturbed_set(g, Family::CapBand, v, 0.0).unwrap();
        let rec = deficit_measure(&set).unwrap();
        assert_eq!(set.breakpoints.len(), 2);
        assert!(rec.sym_diff < 1e-12);
        let floor = g.iso_sphere(v).unwrap() - iso_gauss(v);
        assert!(
            (rec.delta_gauss - floor).abs() < 1e-10,
            "{} vs {floor}",
            rec.delta_gauss
        );
        assert!(rec.delta_sphere.abs() < 1e-10);
    }
}

#[test]
fn antipodal_perturbation_has_positive_deficit_and_closed_form_distance() {
    let g = geom(20);
    let set = make_perturbed_set(g, Family::CapAntipodal, 0.5, 0.01).unwrap();
    let rec = deficit_measure(&set).unwrap();
    assert!(rec.delta_sphere > 0.0);
    // Antipodal cap of mass s plus the band of mass s shaved off the main cap.
    assert!((rec.sym_diff - 0.02).abs() < 1e-10, "{}", rec.sym_diff);
    assert_eq!(rec.nearest_pole, Pole::North);
}

#[test]
fn deficits_respect_the_profile_order() {
    let g = geom(10);
    let mut grid = log_grid(0.05, 4.0, 3);
    grid.sort_by(f64::total_cmp);
    for family in Family::ALL {
        for &s in &grid {
            let rec = deficit_measure(&make_perturbed_set(g, family, 0.4, s).unwrap()).unwrap();
            assert!(rec.delta_gauss >= rec.delta_sphere);
            assert!(rec.sym_diff >= 0.0 && rec.sym_diff <= 2.0 * 0.4 + 1e-12);
        }
    }
}

#[test]
fn antipodal_deficit_increases_from_zero() {
    let g = geom(10);
    let mut grid = log_grid(0.05, 4.0, 3);
    grid.sort_by(f64::total_cmp);
    let mut last = 0.0;
    for &s in &grid {
        let rec = deficit_measure(&make_perturbed_set(g, Family::CapAntipodal, 0.4, s).unwrap()).unwrap();
        assert!(rec.delta_sphere > last, "s={s}");
        last = rec.delta_sphere;
    }
}

#[test]
fn thin_bands_carry_two_boundaries() {
    // A band of vanishing mass still adds two spheres of area close to I_S at
    // its volume level, so the deficit stays away from zero as s → 0.
    let g = geom(10);
    for family in [Family::CapBand, Family::BoundaryWobble] {
        let rec = deficit_measure(&make_perturbed_set(g, family, 0.4, 1e-8).unwrap()).unwrap();
        let level = if family == Family::CapBand { 0.7 } else { 0.4 };
        let two = 2.0 * g.iso_sphere(level).unwrap();
        assert!(
            (rec.delta_sphere - two).abs() < 1e-5,
            "{family} {} vs {two}",
            rec.delta_sphere
        );
    }
}

#[test]
fn gaussian_floor_shrinks_like_inverse_dimension() {
    let floor = |n| {
        deficit_measure(&make_perturbed_set(geom(n), Family::CapAntipodal, 0.5, 0.0).unwrap())
            .unwrap()
            .delta_gauss
    };
    let ratio = floor(10) / floor(100);
    assert!(ratio > 7.0 && ratio < 13.0, "{ratio}");
}

#[test]
fn infeasible_perturbations_and_family_names() {
    assert!(matches!(
        make_perturbed_set(geom(10), Family::CapAntipodal, 0.3, 0.4),
        Err(DeficitError::Construction(_))
    ));
    assert!(matches!(
        make_perturbed_set(geom(10), Family::BoundaryWobble, 0.9, 0.2),
        Err(DeficitError::Construction(_))
    ));
    for f in Family::ALL {
        assert_eq!(f.name().parse::<Family>().unwrap(), f);
    }
    assert_eq!("cap+antipodal-cap".parse::<Family>().unwrap(), Family::CapAntipodal);
    assert!("moon".parse::<Family>().is_err());
}

#[test]
fn pipeline_closed_forms() {
    let k = PipelineConstants::default();
    let tr = mn_bound_pipeline(1e-6, &k).unwrap();
    let log = (1e6f64).ln();
    assert!((tr.t - log.powf(-0.98)).abs() < 1e-14);
    assert!((tr.t - 0.0762).abs() < 5e-4, "{}", tr.t);
    assert!((tr.eps - 1e-3).abs() < 1e-15);
    let q = quantile(1e-3).unwrap();
    assert!((tr.term2 - tr.t.powi(-5) * (-tr.t * q * q).exp()).abs() <= 1e-12 * tr.term2);
    assert!((tr.final_bound - log.powf(-0.49)).abs() < 1e-14);
    assert!(!tr.trivial);
}

#[test]
fn pipeline_trivial_branch() {
    let tr = mn_bound_pipeline(0.4, &PipelineConstants::default()).unwrap();
    assert!(tr.trivial);
    assert_eq!(tr.final_bound, 1.0);
    assert!((trivial_threshold() - (0.5 - 1.0 / (2.0 * PI).sqrt())).abs() < 1e-15);
}

#[test]
fn pipeline_is_monotone_and_vanishes() {
    let k = PipelineConstants::default();
    let deltas = [1e-30, 1e-12, 1e-8, 1e-4, 1e-2, 0.09];
    let b: Vec<f64> = deltas
        .iter()
        .map(|&d| mn_bound_pipeline(d, &k).unwrap().final_bound)
        .collect();
    assert!(b.windows(2).all(|w| w[0] < w[1]));
    assert!(mn_bound_pipeline(1e-300, &k).unwrap().final_bound < 0.05);
}

#[test]
fn pipeline_second_term_outgrows_the_first() {
    // With t = |log δ|^{−2c} and ε = √δ, t^{−5}e^{−tΦ⁻¹(ε)²} decays only
    // like a power of |log δ| while the first term decays like √δ.
    let k = PipelineConstants::default();
    let r: Vec<f64> = [1e-4, 1e-8, 1e-16, 1e-64]
        .iter()
        .map(|&d| {
            let tr = mn_bound_pipeline(d, &k).unwrap();
            tr.term2 / tr.term1
        })
        .collect();
    assert!(r.windows(2).all(|w| w[1] > w[0]), "{r:?}");
}

#[test]
fn pipeline_constants_are_validated() {
    for c in [0.3, 0.5, 0.7] {
        let k = PipelineConstants {
            c,
            ..PipelineConstants::default()
        };
        assert!(matches!(mn_bound_pipeline(1e-3, &k), Err(DeficitError::Parameter(_))));
    }
    assert!(mn_bound_pipeline(0.0, &PipelineConstants::default()).is_err());
}

#[test]
fn antipodal_experiment_in_dimension_fifty() {
    let g = geom(50);
    let e = deficit_experiment(
        g,
        Family::CapAntipodal,
        0.5,
        &log_grid(0.05, 5.0, 2),
        DeltaKind::Sphere,
        &PipelineConstants::default(),
    )
    .unwrap();
    assert!(e.decades >= 3.0);
    assert_eq!(e.violations, 0);
    assert!(e.consistent());
    assert!(e.c_fit.is_finite() && e.c_fit > 0.0);
    assert!(e.points.windows(2).all(|w| w[0].delta < w[1].delta));
}

#[test]
fn gaussian_deficit_cannot_span_three_decades_at_dimension_fifty() {
    let r = deficit_experiment(
        geom(50),
        Family::CapAntipodal,
        0.5,
        &log_grid(0.05, 5.0, 2),
        DeltaKind::Gauss,
        &PipelineConstants::default(),
    );
    assert!(matches!(r, Err(DeficitError::Experiment(_))));
}

#[test]
fn too_few_points_is_an_experiment_error() {
    let r = deficit_experiment(
        geom(10),
        Family::CapAntipodal,
        0.5,
        &[1e-6, 1e-4, 1e-2],
        DeltaKind::Sphere,
        &PipelineConstants::default(),
    );
    assert!(matches!(r, Err(DeficitError::Experiment(_))));
}

#[test]
fn hypothesis_scan_is_finite() {
    let eng = SphereEngine::with_dimension(3).unwrap();
    let h = hypothesis_h_scan(&eng, 0.5, 0.01, &[0.1], &[0.1], 4.0).unwrap();
    assert_eq!(h.skipped, 0);
    let c = &h.cells[0];
    assert!(c.low.unwrap().is_finite() && c.low.unwrap() >= 0.0);
    assert!(h.c_h.is_finite());
    // The half-volume cap is symmetric under reflection.
    let (lo, hi) = (c.low.unwrap(), c.high.unwrap());
    assert!(lo / hi < 2.0 && hi / lo < 2.0, "{lo} {hi}");
}

#[test]
fn hypothesis_scan_ratio_grows_with_time() {
    // (Γ₂−Γ)(h_t) scales like 1/t on smoothed caps, so t⁴(Γ₂−Γ)/h² grows.
    let eng = SphereEngine::with_dimension(5).unwrap();
    let h = hypothesis_h_scan(
        &eng,
        0.3,
        0.01,
        &[0.02, 0.05, 0.1, 0.2, 0.5],
        &[0.05, 0.1, 1.0 / 7.0],
        4.0,
    )
    .unwrap();
    let p = h.time_exponent();
    assert!(p > 2.0 && p < 4.5, "{p}");
    assert!(h.time_spread() > 3.0);
}

#[test]
fn hypothesis_scan_rejects_bad_inputs() {
    let eng = SphereEngine::with_dimension(3).unwrap();
    assert!(hypothesis_h_scan(&eng, 0.5, 0.01, &[0.1], &[0.2], 4.0).is_err());
    assert!(hypothesis_h_scan(&eng, 0.5, 0.0, &[0.1], &[0.1], 4.0).is_err());
    assert!(hypothesis_h_scan(&eng, 0.5, 0.01, &[1.5], &[0.1], 4.0).is_err());
}

#[test]
fn kernel_scan_in_low_dimension() {
    let grid = [0.05, 0.1, 0.2, 0.5, 1.0];
    let scans: Vec<_> = [3, 5, 10]
        .iter()
        .map(|&n| kernel_bound_scan(&geom(n), &grid).unwrap())
        .collect();
    for ks in &scans {
        for r in &ks.rows {
            assert!(r.grad.is_finite() && r.hess_log.is_finite() && r.resolved > 0);
        }
        let first = ks.rows.first().unwrap();
        let last = ks.rows.last().unwrap();
        assert!(last.grad < 0.6 * first.grad);
    }
    let spread = |f: &dyn Fn(&KernelScan) -> f64| {
        let v: Vec<f64> = scans.iter().map(f).collect();
        v.iter().cloned().fold(0.0, f64::max) / v.iter().cloned().fold(f64::INFINITY, f64::min)
    };
    assert!(spread(&|k| k.const_grad()) <= 4.0);
    assert!(spread(&|k| k.const_hess_log()) <= 4.0);
}

#[test]
fn slab_gap_scales_like_root_t_over_n() {
    let ts = [0.04, 0.25, 1.0];
    let g100 = cap_measure_gap(&geom(100), &ts).unwrap();
    let g200 = cap_measure_gap(&geom(200), &ts).unwrap();
    for (a, b) in g100.iter().zip(&g200) {
        let r = (b.sphere - b.gauss).abs() / (a.sphere - a.gauss).abs();
        assert!((r - 0.5).abs() <= 0.1, "t={} ratio {r}", a.t);
        assert!(a.scaled < 1.0);
    }
    let tiny = cap_measure_gap(&geom(100), &[1e-8]).unwrap();
    assert!((tiny[0].sphere - tiny[0].gauss).abs() < 1e-3 * (g100[2].sphere - g100[2].gauss).abs());
}

#[test]
fn projection_of_caps_and_perturbations() {
    let eng = SphereEngine::with_dimension(50).unwrap();
    let k = PipelineConstants::default();
    let cap = make_perturbed_set(eng.geom, Family::CapAntipodal, 0.5, 0.0).unwrap();
    let bumped = make_perturbed_set(eng.geom, Family::CapAntipodal, 0.5, 0.01).unwrap();
    let a = projection_distance_check(&eng, &cap, 0.1, &k).unwrap();
    let b = projection_distance_check(&eng, &bumped, 0.1, &k).unwrap();
    // The cap floor comes from clamping Φ⁻¹ in the far tails.
    assert!(a.lhs < 1e-2, "{}", a.lhs);
    assert!(b.lhs > 10.0 * a.lhs);
    assert!(b.holds());
}

#[test]
fn rounding_a_half_cap_recovers_it() {
    let eng = SphereEngine::with_dimension(50).unwrap();
    let cap = BandSet::cap_of_volume(eng.geom, 0.5).unwrap();
    let r = rounding(&eng, &cap, 0.1).unwrap();
    assert!(r.sym_diff <= 1e-6, "{}", r.sym_diff);
    assert!(r.holds());
}

#[test]
fn rounding_a_small_cap_moves_its_level_like_the_gaussian_flow() {
    // Under the Ornstein–Uhlenbeck flow the zero level of h_t for {x ≤ a} is
    // a·e^t, so the rounded cap misses Φ(a e^t) − Φ(a).
    let eng = SphereEngine::with_dimension(200).unwrap();
    let v = 0.3;
    let t = 0.1;
    let cap = BandSet::cap_of_volume(eng.geom, v).unwrap();
    let r = rounding(&eng, &cap, t).unwrap();
    let a = quantile(v).unwrap();
    let gauss = (cdf(a * t.exp()) - cdf(a)).abs();
    assert!((r.sym_diff - gauss).abs() < 0.05 * gauss, "{} vs {gauss}", r.sym_diff);
    assert!(r.holds());
}

#[test]
fn rounding_an_antipodal_perturbation_has_a_strict_gap() {
    for n in [10, 50] {
        let eng = SphereEngine::with_dimension(n).unwrap();
        let set = make_perturbed_set(eng.geom, Family::CapAntipodal, 0.5, 0.01).unwrap();
        let r = rounding(&eng, &set, 0.1).unwrap();
        assert!(r.sym_diff < r.l1 - 1e-3, "{} {}", r.sym_diff, r.l1);
    }
}

#[test]
fn rounding_an_equatorial_band_is_degenerate() {
    let eng = SphereEngine::with_dimension(10).unwrap();
    let band = BandSet::new(eng.geom, vec![PI / 3.0, 2.0 * PI / 3.0]).unwrap();
    assert!(matches!(rounding(&eng, &band, 0.1), Err(DeficitError::Degenerate(_))));
}
