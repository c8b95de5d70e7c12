//! The standard battery: one function per acceptance criterion, each
//! returning its reports and a verdict at the pinned tolerance.

use std::f64::consts::PI;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};
use std::time::Instant;

use deficit_lab::{
    cap_measure_gap, deficit_experiment, hypothesis_h_scan, kernel_bound_scan, log_grid, make_perturbed_set,
    mn_bound_pipeline, rounding, DeltaKind, Family, PipelineConstants,
};
use gauss_engine::{FlowGrid, GaussEngine, HermiteFunction, MehlerData};
use inequality_lab::{
    bobkov_flow, check_l1_contraction, check_reverse_bobkov, check_reverse_iso, flow_times, halfspace_flow_check,
    perimeter_via_flow, second_order_poincare_gauss, second_order_poincare_line, second_order_poincare_sphere,
    stein_gap, FlowTrace, SpectrumSource, Subject,
};
use line_engine::{discretize_generator, Potential, WeightedLineMeasure};
use profiles::bobkov::asymptotic_residual;
use profiles::{bobkov_constant, cdf, iso_gauss, pdf, profile_gap, profile_grid, sf, SphereGeometry};
use serde::{Deserialize, Serialize};
use sphere_engine::{BandSet, SphereEngine, ZonalFunction};

use crate::error::{HarnessError, Result};
use crate::pool::parallel_map;
use crate::random::{random_hermite, random_line, random_zonal, seeded};
use crate::report::Report;

pub const CRITERIA: [u8; 19] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19];
/// Closed-form and spectral-identity criteria.
pub const QUICK: [u8; 9] = [1, 2, 3, 4, 5, 10, 12, 14, 15];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BatteryProfile {
    Quick,
    Full,
}

impl BatteryProfile {
    pub fn criteria(self) -> &'static [u8] {
        match self {
            Self::Quick => &QUICK,
            Self::Full => &CRITERIA,
        }
    }
}

impl FromStr for BatteryProfile {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quick" => Ok(Self::Quick),
            "full" => Ok(Self::Full),
            other => Err(HarnessError::Usage(format!(
                "battery profile must be quick or full, got {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BatteryOptions {
    pub seed: u64,
    /// Multiplier applied to `c_n` before the bound check; 1 in normal runs.
    pub c_n_scale: f64,
    pub threads: usize,
}

impl Default for BatteryOptions {
    fn default() -> Self {
        Self {
            seed: 20_240_601,
            c_n_scale: 1.0,
            threads: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionOutcome {
    pub id: u8,
    pub title: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
    pub reports: Vec<Report>,
}

struct Check {
    detail: String,
    reports: Vec<Report>,
    /// Extra conditions that are not inequality reports.
    extra: bool,
}

impl Check {
    fn new(detail: String, reports: Vec<Report>) -> Self {
        Self {
            detail,
            reports,
            extra: true,
        }
    }

    fn with(mut self, ok: bool) -> Self {
        self.extra &= ok;
        self
    }
}

pub fn title(id: u8) -> &'static str {
    match id {
        1 => "OU spectral flow",
        2 => "gradient commutation",
        3 => "Gaussian profile",
        4 => "c_n bounds",
        5 => "c_n asymptotics",
        6 => "sphere-Gauss profile gap",
        7 => "Bobkov flow monotone",
        8 => "Bobkov derivative bound",
        9 => "reverse isoperimetric Lipschitz bound",
        10 => "reverse Bobkov equality",
        11 => "second-order Poincaré",
        12 => "Stein gaps",
        13 => "perimeter via flow",
        14 => "L1 contraction",
        15 => "half-space flow linearity",
        16 => "Hypothesis (H) scan",
        17 => "heat-kernel derivative bounds",
        18 => "cap-measure Gaussian gap",
        19 => "deficit experiment",
        _ => "unknown",
    }
}

pub fn run_criterion(id: u8, opts: &BatteryOptions) -> CriterionOutcome {
    let start = Instant::now();
    let result = match id {
        1 => ou_spectral_flow(),
        2 => gradient_commutation(opts),
        3 => gaussian_profile(),
        4 => c_n_bounds(opts),
        5 => c_n_asymptotics(),
        6 => sphere_profile_gap(),
        7 => bobkov_monotone(),
        8 => bobkov_derivative_bound(),
        9 => reverse_iso_lipschitz(),
        10 => reverse_bobkov_equality(),
        11 => second_order(opts),
        12 => stein_gaps(),
        13 => perimeter(),
        14 => l1_contraction(opts),
        15 => halfspace_linearity(),
        16 => hypothesis_scan(),
        17 => kernel_bounds(),
        18 => cap_gap(),
        19 => deficit_consistency(),
        other => Err(HarnessError::Usage(format!("no criterion {other}"))),
    };
    let seconds = start.elapsed().as_secs_f64();
    match result {
        Ok(c) => CriterionOutcome {
            id,
            title: title(id).into(),
            passed: c.extra && !c.reports.is_empty() && c.reports.iter().all(Report::holds),
            detail: c.detail,
            seconds,
            reports: c.reports,
        },
        Err(e) => CriterionOutcome {
            id,
            title: title(id).into(),
            passed: false,
            detail: format!("error: {e}"),
            seconds,
            reports: Vec::new(),
        },
    }
}

pub fn run_battery(profile: BatteryProfile, opts: &BatteryOptions) -> Vec<CriterionOutcome> {
    parallel_map(profile.criteria(), opts.threads, |&id| run_criterion(id, opts))
}

fn runtime(name: &str, start: Instant, limit: f64) -> Report {
    Report::bound(
        name,
        "-",
        &[("limit_s", limit)],
        start.elapsed().as_secs_f64(),
        limit,
        0.0,
    )
}

fn max_of(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().fold(f64::NEG_INFINITY, f64::max)
}

fn min_of(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().fold(f64::INFINITY, f64::min)
}

fn ou_spectral_flow() -> Result<Check> {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for k in 0..=20 {
        for t in [0.1, 1.0, 5.0] {
            let flowed = HermiteFunction::basis(k).ou_flow(t)?;
            let expect = HermiteFunction::basis(k).scale((-(k as f64) * t).exp());
            worst = worst.max(flowed.sub(&expect).norm2().sqrt());
        }
    }
    Ok(Check::new(
        format!("max ‖Q_t h_k − e^(−kt) h_k‖ = {worst:e}"),
        vec![
            Report::bound("ou-eigenflow", "gauss", &[("k_max", 20.0)], worst, 0.0, 1e-12),
            runtime("ou-eigenflow-runtime", start, 1.0),
        ],
    ))
}

fn gradient_commutation(opts: &BatteryOptions) -> Result<Check> {
    let mut rng = seeded(opts.seed);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let f = random_hermite(&mut rng, 20);
        for t in [0.1, 1.0, 5.0] {
            let lhs = f.ou_flow(t)?.derivative();
            let rhs = f.derivative().ou_flow(t)?.scale((-t).exp());
            worst = worst.max(lhs.sub(&rhs).norm2().sqrt());
        }
    }
    Ok(Check::new(
        format!("max ‖∇Q_t f − e^(−t)Q_t∇f‖ = {worst:e} over 50 degree-20 functions"),
        vec![Report::bound(
            "gradient-commutation",
            "gauss",
            &[("degree", 20.0)],
            worst,
            0.0,
            1e-12,
        )],
    ))
}

fn gaussian_profile() -> Result<Check> {
    let half = iso_gauss(0.5);
    let exact = 1.0 / (2.0 * PI).sqrt();
    let sym = max_of(
        profile_grid()
            .into_iter()
            .map(|v| (iso_gauss(v) - iso_gauss(1.0 - v)).abs()),
    );
    Ok(Check::new(
        format!("I(1/2) = {half:.15}, symmetry error {sym:e}"),
        vec![
            Report::bound("iso-gauss-half", "gauss", &[], (half - exact).abs(), 0.0, 1e-12),
            Report::bound(
                "iso-gauss-half-digits",
                "gauss",
                &[],
                (half - 0.39894228).abs(),
                0.0,
                1e-8,
            ),
            Report::bound("iso-gauss-symmetry", "gauss", &[("points", 2001.0)], sym, 0.0, 1e-13),
        ],
    ))
}

fn c_n_bounds(opts: &BatteryOptions) -> Result<Check> {
    let mut lower = f64::INFINITY;
    let mut upper = f64::INFINITY;
    for n in 2..=10_000usize {
        let c = bobkov_constant(n)? * opts.c_n_scale;
        let nf = n as f64;
        lower = lower.min(c - (nf - 1.0).sqrt());
        upper = upper.min(nf.sqrt() - c);
    }
    Ok(Check::new(
        format!("min(c_n − √(n−1)) = {lower:e}, min(√n − c_n) = {upper:e}"),
        vec![
            Report::bound("c_n-lower", "-", &[("n_max", 1e4)], 0.0, lower, 0.0),
            Report::bound("c_n-upper", "-", &[("n_max", 1e4)], 0.0, upper, 0.0),
        ],
    ))
}

/// Pinned constant for `n²·|(n−1)/c_n² − (1 − 1/(2n))|`; the limit is 3/8.
pub const STIRLING_CONSTANT: f64 = 1.0;

fn c_n_asymptotics() -> Result<Check> {
    let mut sup = 0.0f64;
    for n in 100..=10_000usize {
        let nf = n as f64;
        sup = sup.max(asymptotic_residual(n)? * nf * nf);
    }
    Ok(Check::new(
        format!("sup n²·residual = {sup:.6} over n ∈ [100, 10000]"),
        vec![Report::bound("c_n-stirling", "-", &[], sup, STIRLING_CONSTANT, 0.0)],
    ))
}

/// Pinned constant for `n·sup_v(I_S − I_γ)`.
pub const PROFILE_GAP_CONSTANT: f64 = 1.0;

fn sphere_profile_gap() -> Result<Check> {
    let start = Instant::now();
    let mut sup = 0.0f64;
    let mut min_gap = f64::INFINITY;
    for n in 10..=200usize {
        let g = profile_gap(n)?;
        sup = sup.max(g.sup_gap * n as f64);
        min_gap = min_gap.min(g.min_gap);
    }
    Ok(Check::new(
        format!("sup n·gap = {sup:.6}, min point-wise gap = {min_gap:e}"),
        vec![
            Report::bound("profile-gap-scaled", "sphere", &[], sup, PROFILE_GAP_CONSTANT, 0.0),
            Report::bound("profile-gap-sign", "sphere", &[], 0.0, min_gap, 1e-12),
            runtime("profile-gap-runtime", start, 30.0),
        ],
    ))
}

/// Flow battery shared by the Bobkov criteria.
struct FlowCase {
    label: String,
    trace: FlowTrace,
    /// Equality case: Ψ constant along the flow.
    equality: bool,
}

fn coarse_grid() -> Result<FlowGrid> {
    Ok(FlowGrid::new(-8.0, 8.0, 64, 8)?)
}

fn phi_two_x() -> MehlerData {
    MehlerData::smooth(Arc::new(|x: f64| cdf(2.0 * x)), Some(Arc::new(|x: f64| sf(2.0 * x))))
}

const SPHERE_DIMS: [usize; 3] = [5, 10, 50];
const SPHERE_VOLUMES: [f64; 2] = [0.2, 0.5];

fn with_flow_subjects<R>(f: impl Fn(&str, &Subject<'_>, bool) -> Result<R>) -> Result<Vec<R>> {
    let mut out = Vec::new();
    out.push(f(
        "gauss half-line a=0.3",
        &Subject::gauss_data(MehlerData::half_line(0.3)),
        true,
    )?);
    out.push(f(
        "gauss Φ(2x)",
        &Subject::gauss_data_on(phi_two_x(), coarse_grid()?),
        false,
    )?);
    for n in SPHERE_DIMS {
        let eng = SphereEngine::with_dimension(n)?;
        for v in SPHERE_VOLUMES {
            let cap = BandSet::cap_of_volume(eng.geom, v)?;
            out.push(f(
                &format!("sphere n={n} cap v={v}"),
                &Subject::sphere_set(&eng, cap),
                false,
            )?);
        }
    }
    Ok(out)
}

fn flow_battery() -> std::result::Result<&'static [FlowCase], String> {
    static CACHE: OnceLock<std::result::Result<Vec<FlowCase>, String>> = OnceLock::new();
    CACHE
        .get_or_init(|| {
            with_flow_subjects(|label, s, equality| {
                let times = flow_times(0.02, s.spectral_gap(), 2);
                Ok(FlowCase {
                    label: label.into(),
                    trace: bobkov_flow(s, &times, 1.0)?,
                    equality,
                })
            })
            .map_err(|e| e.to_string())
        })
        .as_ref()
        .map(Vec::as_slice)
        .map_err(Clone::clone)
}

fn bobkov_monotone() -> Result<Check> {
    let cases = flow_battery().map_err(HarnessError::Usage)?;
    let mut reports = Vec::new();
    let mut lines = Vec::new();
    for c in cases {
        let inc = c.trace.max_increase();
        reports.push(Report::bound("bobkov-monotone", &c.trace.engine, &[], inc, 0.0, 1e-7));
        if c.equality {
            reports.push(Report::bound(
                "bobkov-equality-deficit",
                &c.trace.engine,
                &[],
                c.trace.deficit.abs(),
                0.0,
                1e-8,
            ));
        }
        lines.push(format!(
            "{}: max step {inc:.2e}, deficit {:.3e}",
            c.label, c.trace.deficit
        ));
    }
    Ok(Check::new(lines.join("; "), reports))
}

fn bobkov_derivative_bound() -> Result<Check> {
    let cases = flow_battery().map_err(HarnessError::Usage)?;
    let mut reports = Vec::new();
    let mut worst = f64::INFINITY;
    for c in cases {
        let gap = c.trace.worst_bound_gap(10.0);
        worst = worst.min(gap);
        reports.push(Report::bound(
            "bobkov-derivative-bound",
            &c.trace.engine,
            &[("slope", 10.0)],
            0.0,
            gap,
            0.0,
        ));
    }
    Ok(Check::new(
        format!("min(rate − bound + 10Δt) = {worst:e} over {} flows", cases.len()),
        reports,
    ))
}

fn reverse_iso_lipschitz() -> Result<Check> {
    let rows = with_flow_subjects(|label, s, _| {
        let mut out = Vec::new();
        for t in [0.05, 0.2, 1.0] {
            let r = check_reverse_iso(s, t, 1.0)?;
            out.push((
                label.to_string(),
                Report::bound(
                    "reverse-iso-lipschitz",
                    &s.engine_id(),
                    &[("t", t)],
                    r.lipschitz.lhs,
                    1.0,
                    1e-6,
                ),
            ));
        }
        Ok(out)
    })?;
    let reports: Vec<Report> = rows.into_iter().flatten().map(|(_, r)| r).collect();
    let worst = max_of(reports.iter().map(|r| r.lhs));
    Ok(Check::new(format!("max C(1,t)Γ(Φ⁻¹P_t f) = {worst:.9}"), reports))
}

fn reverse_bobkov_equality() -> Result<Check> {
    let r = check_reverse_bobkov(&cdf, &sf, &pdf)?;
    let exact = 1.0 / (2.0 * PI).sqrt();
    Ok(Check::new(
        format!("lhs = {:.12}, rhs = {:.12}", r.lhs, r.rhs),
        vec![
            Report::bound("reverse-bobkov-lhs", "gauss", &[], (r.lhs - exact).abs(), 0.0, 1e-9),
            Report::bound("reverse-bobkov-rhs", "gauss", &[], (r.rhs - exact).abs(), 0.0, 1e-9),
        ],
    ))
}

fn second_order(opts: &BatteryOptions) -> Result<Check> {
    const TOL: f64 = 1e-9;
    let mut reports = Vec::new();
    let gauss = GaussEngine::default();
    let mut id_gauss = 0.0f64;
    for k in 0..=10 {
        id_gauss = id_gauss.max(second_order_poincare_gauss(&gauss, &HermiteFunction::basis(k))?.identity_gap());
    }
    let mut id_sphere = 0.0f64;
    let spheres = [SphereEngine::with_dimension(3)?, SphereEngine::with_dimension(10)?];
    for eng in &spheres {
        for k in 0..=10 {
            id_sphere =
                id_sphere.max(second_order_poincare_sphere(eng, &ZonalFunction::basis(eng.n(), k))?.identity_gap());
        }
    }
    reports.push(Report::bound("second-order-identity", "gauss", &[], id_gauss, 0.0, TOL));
    reports.push(Report::bound(
        "second-order-identity",
        "sphere",
        &[],
        id_sphere,
        0.0,
        TOL,
    ));

    let mut rng = seeded(opts.seed ^ 0x11);
    let mut min_slack = [f64::INFINITY; 3];
    let mut min_cor = f64::INFINITY;
    for _ in 0..100 {
        let r = second_order_poincare_gauss(&gauss, &random_hermite(&mut rng, 10))?;
        min_slack[0] = min_slack[0].min(r.report.slack);
    }
    let sphere = &spheres[1];
    for _ in 0..100 {
        let r = second_order_poincare_sphere(sphere, &random_zonal(&mut rng, sphere.n(), 10))?;
        min_slack[1] = min_slack[1].min(r.report.slack);
        if let Some(c) = r.corollary {
            min_cor = min_cor.min(c.slack);
        }
    }
    let m = WeightedLineMeasure::with_default_domain(Potential::Quartic { c: 0.1 }, 1.0)?;
    let op = discretize_generator(m, 1500)?;
    let spec = op.spectrum(8)?;
    for _ in 0..100 {
        let r = second_order_poincare_line(&op, &random_line(&mut rng, &spec, 6))?;
        min_slack[2] = min_slack[2].min(r.report.slack);
    }
    for (engine, s) in ["gauss", "sphere:10", "line:quartic"].iter().zip(min_slack) {
        reports.push(Report::bound(
            "second-order-inequality",
            engine,
            &[("samples", 100.0)],
            0.0,
            s,
            TOL,
        ));
    }
    reports.push(Report::bound(
        "second-order-corollary",
        "sphere:10",
        &[("samples", 100.0)],
        0.0,
        min_cor,
        TOL,
    ));
    Ok(Check::new(
        format!(
            "identity gaps {id_gauss:.1e}/{id_sphere:.1e}; min slack gauss {:.3e} sphere {:.3e} line {:.3e}; corollary {min_cor:.3e}",
            min_slack[0], min_slack[1], min_slack[2]
        ),
        reports,
    ))
}

fn stein_gaps() -> Result<Check> {
    let mut reports = Vec::new();
    let (g, k) = stein_gap(&SpectrumSource::Gauss, 1.0)?;
    reports.push(Report::bound(
        "stein-gap",
        "gauss",
        &[("k", k as f64)],
        g.abs(),
        0.0,
        1e-12,
    ));
    let mut worst_sphere = 0.0f64;
    for n in 3..=50usize {
        let (g, _) = stein_gap(&SpectrumSource::Sphere(n), 1.0)?;
        worst_sphere = worst_sphere.max((g - 1.0 / (n as f64 - 1.0)).abs());
    }
    reports.push(Report::bound("stein-gap", "sphere", &[], worst_sphere, 0.0, 1e-12));
    let spectrum_of = |p: Potential| -> Result<Vec<f64>> {
        let m = WeightedLineMeasure::with_default_domain(p, 1.0)?;
        Ok(discretize_generator(m, 2000)?.spectrum(6)?.values)
    };
    let gauss_line = spectrum_of(Potential::Gaussian)?;
    let quartic = spectrum_of(Potential::Quartic { c: 0.1 })?;
    let err = max_of((1..=5).map(|k| (gauss_line[k] - k as f64).abs()));
    let milman = min_of((1..=5).map(|k| quartic[k] - k as f64));
    reports.push(Report::bound("line-eigenvalues", "line:gaussian", &[], err, 0.0, 1e-3));
    reports.push(Report::bound("line-milman", "line:quartic", &[], 0.0, milman, 1e-3));
    Ok(Check::new(
        format!(
            "gauss k={k}; sphere max |gap − 1/(n−1)| = {worst_sphere:e}; line |λ_k − k| ≤ {err:.2e}; quartic min(λ_k − k) = {milman:.4}"
        ),
        reports,
    )
    .with(k == 1))
}

fn perimeter() -> Result<Check> {
    let mut reports = Vec::new();
    let mut lines = Vec::new();
    let mut push = |label: String, engine: String, p: inequality_lab::PerimeterEstimate| {
        reports.push(Report::bound(
            "perimeter-relative-error",
            &engine,
            &[],
            p.relative_error(),
            0.01,
            0.0,
        ));
        reports.push(Report::bound("perimeter-order", &engine, &[], 0.4, p.order, 0.0));
        lines.push(format!("{label}: err {:.2e} order {:.2}", p.relative_error(), p.order));
    };
    for a in [0.0, 1.0] {
        let s = Subject::gauss_data(MehlerData::half_line(a));
        push(
            format!("half-line a={a}"),
            s.engine_id(),
            perimeter_via_flow(&s, 0.04, 5)?,
        );
    }
    for n in [2, 10] {
        let eng = SphereEngine::with_dimension(n)?;
        for v in [0.3, 0.5] {
            let s = Subject::sphere_set(&eng, BandSet::cap_of_volume(eng.geom, v)?);
            push(
                format!("cap n={n} v={v}"),
                s.engine_id(),
                perimeter_via_flow(&s, 0.01, 4)?,
            );
        }
    }
    Ok(Check::new(lines.join("; "), reports))
}

fn l1_contraction(opts: &BatteryOptions) -> Result<Check> {
    let eng = GaussEngine::default();
    let r = check_l1_contraction(&Subject::gauss_poly(&eng, HermiteFunction::basis(1)), 0.1)?;
    let closed = 0.2f64.sqrt();
    let mut reports = vec![
        Report::bound(
            "l1-linear-lhs",
            "gauss",
            &[("t", 0.1)],
            (r.lhs - 0.07592).abs(),
            0.0,
            1e-5,
        ),
        Report::bound(
            "l1-linear-rhs",
            "gauss",
            &[("t", 0.1)],
            (r.rhs - closed).abs(),
            0.0,
            1e-10,
        ),
        Report::bound(
            "l1-linear-rhs-digits",
            "gauss",
            &[("t", 0.1)],
            (r.rhs - 0.44721).abs(),
            0.0,
            5e-6,
        ),
        Report::from(&r),
    ];
    let mut rng = seeded(opts.seed ^ 0x14);
    for _ in 0..10 {
        let f = random_hermite(&mut rng, 8);
        for t in [0.1, 1.0] {
            reports.push(check_l1_contraction(&Subject::gauss_poly(&eng, f.clone()), t)?.into());
        }
    }
    let sphere = SphereEngine::with_dimension(5)?;
    for v in [0.2, 0.5] {
        let f = sphere.flow_set(&BandSet::cap_of_volume(sphere.geom, v)?, 0.05)?;
        reports.push(check_l1_contraction(&Subject::sphere_poly(&sphere, f), 0.1)?.into());
    }
    Ok(Check::new(
        format!("f = x, t = 0.1: lhs = {:.8}, rhs = {:.12}", r.lhs, r.rhs),
        reports,
    ))
}

fn halfspace_linearity() -> Result<Check> {
    let mut reports = Vec::new();
    let mut lines = Vec::new();
    for t in [0.1, 0.3, 1.0] {
        let fit = halfspace_flow_check(&MehlerData::half_line(0.0), t)?;
        reports.push(Report::bound(
            "halfspace-residual",
            "gauss",
            &[("t", t)],
            fit.residual,
            0.0,
            1e-8,
        ));
        reports.push(Report::bound(
            "halfspace-slope",
            "gauss",
            &[("t", t)],
            (fit.normalized_slope - fit.k_t).abs(),
            0.0,
            1e-6,
        ));
        lines.push(format!(
            "t={t}: residual {:.1e}, slope {:.10} vs {:.10}",
            fit.residual, fit.normalized_slope, fit.k_t
        ));
    }
    Ok(Check::new(lines.join("; "), reports))
}

pub const H_TIMES: [f64; 6] = [0.02, 0.05, 0.1, 0.2, 0.3, 0.5];
pub const H_EPS: [f64; 3] = [0.05, 0.1, 1.0 / 7.0];
pub const H_DIMS: [usize; 4] = [3, 5, 10, 50];
/// Cap volume and smoothing time of the scanned data `P_s 1_cap`.
pub const H_CAP: (f64, f64) = (0.3, 0.01);

fn hypothesis_scan() -> Result<Check> {
    let start = Instant::now();
    let mut reports = Vec::new();
    let mut lines = Vec::new();
    for n in H_DIMS {
        let eng = SphereEngine::with_dimension(n)?;
        let scan = hypothesis_h_scan(&eng, H_CAP.0, H_CAP.1, &H_TIMES, &H_EPS, 4.0)?;
        let spread = scan.time_spread();
        reports.push(Report::bound(
            "h-constant-finite",
            &format!("sphere:{n}"),
            &[],
            0.0,
            if scan.c_h.is_finite() { 1.0 } else { -1.0 },
            0.0,
        ));
        reports.push(Report::bound(
            "h-constant-time-spread",
            &format!("sphere:{n}"),
            &[],
            spread,
            3.0,
            0.0,
        ));
        lines.push(format!(
            "n={n}: C_H {:.3e}, spread over t {spread:.3e}, t-exponent {:.2}, skipped {}",
            scan.c_h,
            scan.time_exponent(),
            scan.skipped
        ));
    }
    reports.push(runtime("h-scan-runtime", start, 120.0));
    Ok(Check::new(lines.join("; "), reports))
}

pub const KERNEL_TIMES: [f64; 7] = [0.05, 0.1, 0.2, 0.35, 0.5, 0.75, 1.0];

fn kernel_bounds() -> Result<Check> {
    let mut grads = Vec::new();
    let mut hess = Vec::new();
    let mut finite = true;
    for n in [3, 5, 10] {
        let scan = kernel_bound_scan(&SphereGeometry::new(n)?, &KERNEL_TIMES)?;
        finite &= scan
            .rows
            .iter()
            .all(|r| r.grad.is_finite() && r.hess_log.is_finite() && r.resolved > 0);
        grads.push(scan.const_grad());
        hess.push(scan.const_hess_log());
    }
    let spread = |v: &[f64]| max_of(v.iter().copied()) / min_of(v.iter().copied());
    let (sg, sh) = (spread(&grads), spread(&hess));
    Ok(Check::new(
        format!("gradient constants {grads:.4?} (spread {sg:.3}); Hessian constants {hess:.4?} (spread {sh:.3})"),
        vec![
            Report::bound("kernel-gradient-spread", "sphere", &[], sg, 4.0, 0.0),
            Report::bound("kernel-hessian-spread", "sphere", &[], sh, 4.0, 0.0),
        ],
    )
    .with(finite))
}

/// Pinned constant for `|μ(slab) − γ₁([0,√t])|·n/√t`.
pub const CAP_GAP_CONSTANT: f64 = 1.0;

fn cap_gap() -> Result<Check> {
    let ts: Vec<f64> = (2..=10).map(|k| (k as f64 / 10.0).powi(2)).collect();
    let mut sup = 0.0f64;
    for n in (10..=200).step_by(10) {
        for row in cap_measure_gap(&SphereGeometry::new(n)?, &ts)? {
            sup = sup.max(row.scaled);
        }
    }
    Ok(Check::new(
        format!("sup gap·n/√t = {sup:.4} over n ∈ 10..200, t ∈ [0.04, 1]"),
        vec![Report::bound(
            "cap-gap-scaled",
            "sphere",
            &[],
            sup,
            CAP_GAP_CONSTANT,
            0.0,
        )],
    ))
}

fn deficit_consistency() -> Result<Check> {
    let start = Instant::now();
    let consts = PipelineConstants::default();
    let eng = SphereEngine::with_dimension(50)?;
    let e = deficit_experiment(
        eng.geom,
        Family::CapAntipodal,
        0.5,
        &log_grid(0.05, 5.0, 2),
        DeltaKind::Sphere,
        &consts,
    )?;
    let mut reports = vec![
        Report::bound("deficit-decades", "sphere:50", &[], 3.0, e.decades, 0.0),
        Report::bound(
            "deficit-violations",
            "sphere:50",
            &[("c_fit", e.c_fit)],
            e.violations as f64,
            0.0,
            0.0,
        ),
    ];
    let mut worst_round = f64::INFINITY;
    for p in &e.points {
        let tr = mn_bound_pipeline(p.delta, &consts)?;
        let t = if tr.t.is_finite() { tr.t } else { consts.t0 };
        let set = make_perturbed_set(eng.geom, Family::CapAntipodal, 0.5, p.s)?;
        let r = rounding(&eng, &set, t)?;
        worst_round = worst_round.min(r.l1 - r.sym_diff);
        reports.push(Report::bound(
            "rounding",
            "sphere:50",
            &[("s", p.s), ("t", t)],
            r.sym_diff,
            r.l1,
            0.0,
        ));
    }
    reports.push(runtime("deficit-runtime", start, 300.0));
    Ok(Check::new(
        format!(
            "{} points over {:.2} decades, C_fit = {:.4}, violations {}, min rounding slack {worst_round:.3e}",
            e.points.len(),
            e.decades,
            e.c_fit,
            e.violations
        ),
        reports,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profiles_parse() {
        assert_eq!("quick".parse::<BatteryProfile>().unwrap(), BatteryProfile::Quick);
        assert!("slow".parse::<BatteryProfile>().is_err());
        assert_eq!(BatteryProfile::Full.criteria().len(), 19);
    }

    #[test]
    fn broken_c_n_fails_its_bound() {
        let opts = BatteryOptions {
            c_n_scale: 1.01,
            ..BatteryOptions::default()
        };
        assert!(!run_criterion(4, &opts).passed);
        assert!(run_criterion(4, &BatteryOptions::default()).passed);
    }

    #[test]
    fn unknown_criterion_is_reported_as_failure() {
        let o = run_criterion(42, &BatteryOptions::default());
        assert!(!o.passed && o.detail.starts_with("error"));
    }
}
