//! Operations behind each subcommand and the `run` entry point that persists
//! their output.

use std::path::PathBuf;
use std::sync::Arc;

use deficit_lab::{
    cap_measure_gap, deficit_experiment, hypothesis_h_scan, kernel_bound_scan, log_grid, make_perturbed_set,
    mn_bound_pipeline, projection_distance_check, rounding, DeltaKind, Experiment, Family, PipelineConstants,
};
use gauss_engine::{FlowGrid, GaussEngine, HermiteFunction, MehlerData};
use inequality_lab::{
    bobkov_flow, check_commutation, check_l1_contraction, check_local_bounds, check_reverse_bobkov, check_reverse_iso,
    flow_times, halfspace_flow_check, perimeter_via_flow, second_order_poincare_gauss, second_order_poincare_line,
    second_order_poincare_sphere, stein_gap, LocalKind, SecondOrder, SpectrumSource, Subject,
};
use line_engine::{discretize_generator, DiscreteOperator, Potential, PotentialTable, WeightedLineMeasure};
use profiles::{bobkov_constant, cdf, iso_gauss, pdf, profile_gap, profile_grid, sf, SphereGeometry};
use serde_json::{json, Value};
use sphere_engine::{BandSet, SphereEngine, ZonalFunction};

use crate::battery::{self, BatteryOptions, BatteryProfile, H_CAP, H_EPS, H_TIMES, KERNEL_TIMES};
use crate::config::{CommandKind, EngineSpec, RunConfig};
use crate::error::{HarnessError, Result};
use crate::output::{ArtifactWriter, RunManifest, Table};
use crate::pool::{parallel_map, thread_cap};
use crate::random::{random_hermite, random_line, random_zonal, seeded};
use crate::report::Report;

pub const REPORTS_FILE: &str = "reports.json";
pub const SUMMARY_FILE: &str = "summary.json";
pub const CONFIG_FILE: &str = "config.json";

/// Everything an operation produces before it is written out.
#[derive(Debug, Default)]
pub struct Outcome {
    pub reports: Vec<Report>,
    pub tables: Vec<Table>,
    /// Written as `records.jsonl` when non-empty.
    pub records: Vec<Value>,
    pub summary: Value,
    /// Overrides the report verdicts (battery criteria).
    pub failed: Option<bool>,
}

impl Outcome {
    pub fn holds(&self) -> bool {
        self.failed
            .map_or_else(|| self.reports.iter().all(Report::holds), |f| !f)
    }
}

#[derive(Debug)]
pub struct RunResult {
    pub exit_status: i32,
    pub out: PathBuf,
    /// Report file holding the violation, on exit 1.
    pub violation: Option<PathBuf>,
    pub manifest: RunManifest,
    pub summary: Value,
}

pub fn execute(cfg: &RunConfig) -> Result<Outcome> {
    cfg.validate()?;
    match cfg.command {
        CommandKind::Profile => profile_cmd(cfg),
        CommandKind::Flow => flow_cmd(cfg),
        CommandKind::Check => check_cmd(cfg),
        CommandKind::Deficit => deficit_cmd(cfg),
        CommandKind::Kernel => kernel_cmd(cfg),
        CommandKind::Battery => battery_cmd(cfg),
    }
}

/// Executes `cfg` and writes its artifacts; the manifest is written last.
pub fn run(cfg: &RunConfig) -> Result<RunResult> {
    let outcome = execute(cfg)?;
    let mut w = ArtifactWriter::create(&cfg.out)?;
    w.write_json(CONFIG_FILE, cfg)?;
    let reports_path = w.write_json(REPORTS_FILE, &outcome.reports)?;
    for t in &outcome.tables {
        w.write_table(t)?;
    }
    if !outcome.records.is_empty() {
        w.write_json_lines("records.jsonl", &outcome.records)?;
    }
    w.write_json(SUMMARY_FILE, &outcome.summary)?;
    let holds = outcome.holds();
    let exit_status = if holds { 0 } else { 1 };
    let out = w.dir().to_path_buf();
    let manifest = w.finish(&cfg.hash()?, exit_status)?;
    Ok(RunResult {
        exit_status,
        out,
        violation: (!holds).then_some(reports_path),
        manifest,
        summary: outcome.summary,
    })
}

fn usage(msg: impl Into<String>) -> HarnessError {
    HarnessError::Usage(msg.into())
}

fn unknown_operation(cfg: &RunConfig, known: &[&str]) -> HarnessError {
    usage(format!(
        "unknown {} operation {:?}; expected one of {}",
        cfg.command,
        cfg.operation,
        known.join(", ")
    ))
}

fn sphere_dim(cfg: &RunConfig) -> Result<usize> {
    match cfg.engine {
        EngineSpec::Sphere(n) => Ok(n),
        _ => Err(usage(format!(
            "{} {} needs a sphere engine",
            cfg.command, cfg.operation
        ))),
    }
}

fn count(cfg: &RunConfig, key: &str, default: usize) -> Result<usize> {
    let v = cfg.param(key, default as f64);
    if v >= 0.0 && v.fract() == 0.0 && v <= 1e9 {
        Ok(v as usize)
    } else {
        Err(usage(format!("{key} must be a non-negative integer, got {v}")))
    }
}

fn line_operator(cfg: &RunConfig) -> Result<DiscreteOperator> {
    let potential = match (&cfg.engine, cfg.engine.line_table()) {
        (_, Some(path)) => Potential::Table(PotentialTable::from_csv(path)?),
        (EngineSpec::Line(name), None) => Potential::by_name(name)?,
        _ => return Err(usage("line engine expected")),
    };
    let m = WeightedLineMeasure::with_default_domain(potential, cfg.param("kappa", 1.0))?;
    Ok(discretize_generator(m, count(cfg, "m", 2000)?)?)
}

/// Eigenpairs kept for line-engine flows.
pub const LINE_MODES: usize = 96;

/// Index in names like `h3`, `p2`, `e1`.
fn indexed(name: &str, prefixes: &[char]) -> Option<usize> {
    let mut chars = name.chars();
    let first = chars.next()?;
    prefixes.contains(&first).then(|| chars.as_str().parse().ok()).flatten()
}

fn bad_function(cfg: &RunConfig, name: &str) -> HarnessError {
    usage(format!("unknown test function {name:?} for engine {}", cfg.engine))
}

/// Builds the subject named by `--f` and hands it to `body`.
fn with_subject<R>(cfg: &RunConfig, body: impl FnOnce(&Subject<'_>) -> Result<R>) -> Result<R> {
    let mut rng = seeded(cfg.seed);
    let degree = count(cfg, "degree", 6)?;
    match &cfg.engine {
        EngineSpec::Gauss => {
            let eng = GaussEngine::default();
            let name = cfg.option("f").unwrap_or("h1");
            let s = match name {
                "half" | "cap" => Subject::gauss_data(MehlerData::half_line(cfg.param("a", 0.0))),
                "random" => Subject::gauss_poly(&eng, random_hermite(&mut rng, degree)),
                "x" => Subject::gauss_poly(&eng, HermiteFunction::basis(1)),
                "pos" => Subject::gauss_poly(&eng, HermiteFunction::new(vec![1.0, 0.0, 0.3])),
                "phi" => {
                    let a = cfg.param("a", 1.0);
                    let data = MehlerData::smooth(Arc::new(move |x| cdf(a * x)), Some(Arc::new(move |x| sf(a * x))));
                    Subject::gauss_data_on(data, FlowGrid::new(-8.0, 8.0, 64, 8)?)
                }
                other => match indexed(other, &['h']) {
                    Some(k) => Subject::gauss_poly(&eng, HermiteFunction::basis(k)),
                    None => return Err(bad_function(cfg, other)),
                },
            };
            body(&s)
        }
        EngineSpec::Sphere(n) => {
            let eng = SphereEngine::with_dimension(*n)?;
            let name = cfg.option("f").unwrap_or("cap");
            let s = match name {
                "cap" => Subject::sphere_set(&eng, BandSet::cap_of_volume(eng.geom, cfg.param("v", 0.3))?),
                "random" => Subject::sphere_poly(&eng, random_zonal(&mut rng, *n, degree)),
                "x" => Subject::sphere_poly(&eng, ZonalFunction::basis(*n, 1)),
                // 1 + 0.3 cos θ.
                "pos" => Subject::sphere_poly(&eng, ZonalFunction::new(*n, vec![1.0, 0.3 / (*n as f64 + 1.0).sqrt()])),
                "smooth-cap" => {
                    let cap = BandSet::cap_of_volume(eng.geom, cfg.param("v", 0.3))?;
                    Subject::sphere_poly(&eng, eng.flow_set(&cap, cfg.param("s", 0.05))?)
                }
                other => match indexed(other, &['p', 'h']) {
                    Some(k) => Subject::sphere_poly(&eng, ZonalFunction::basis(*n, k)),
                    None => return Err(bad_function(cfg, other)),
                },
            };
            body(&s)
        }
        EngineSpec::Line(_) => {
            let op = line_operator(cfg)?;
            let spec = op.spectrum(count(cfg, "modes", LINE_MODES)?.max(degree + 2))?;
            let name = cfg.option("f").unwrap_or("random");
            let f = match name {
                "random" => random_line(&mut rng, &spec, degree),
                "x" => op.sample(|x| x),
                "pos" => op.sample(|x| 1.0 + 0.5 * x.tanh()),
                "phi" => {
                    let a = cfg.param("a", 1.0);
                    op.sample(|x| cdf(a * x))
                }
                other => match indexed(other, &['e', 'h', 'p']) {
                    Some(k) if k < spec.functions.len() => spec.functions[k].clone(),
                    _ => return Err(bad_function(cfg, other)),
                },
            };
            body(&Subject::line(&op, &spec, f)?)
        }
    }
}

fn reports_summary(cfg: &RunConfig, reports: &[Report]) -> Value {
    json!({
        "command": cfg.command.to_string(),
        "operation": cfg.operation,
        "engine": cfg.engine.to_string(),
        "checks": reports.len(),
        "violations": reports.iter().filter(|r| !r.holds()).count(),
    })
}

fn profile_cmd(cfg: &RunConfig) -> Result<Outcome> {
    let mut out = Outcome::default();
    match cfg.operation.as_str() {
        "iso-gauss" => {
            let mut t = Table::new("profile", &["v", "iso_gauss"]);
            for v in profile_grid() {
                t.push_numbers(&[v, iso_gauss(v)]);
            }
            out.tables.push(t);
        }
        "sphere" => {
            let geom = SphereGeometry::new(sphere_dim(cfg)?)?;
            let mut t = Table::new("profile", &["v", "iso_sphere", "iso_gauss"]);
            for v in profile_grid() {
                t.push_numbers(&[v, geom.iso_sphere(v)?, iso_gauss(v)]);
            }
            out.tables.push(t);
        }
        "c-n" => {
            let n_max = count(cfg, "n", 100)?.max(2);
            let mut t = Table::new("c_n", &["n", "c_n", "sqrt_n_minus_1", "sqrt_n"]);
            let (mut lo, mut hi) = (f64::INFINITY, f64::INFINITY);
            for n in 2..=n_max {
                let c = bobkov_constant(n)?;
                let nf = n as f64;
                lo = lo.min(c - (nf - 1.0).sqrt());
                hi = hi.min(nf.sqrt() - c);
                t.push_numbers(&[nf, c, (nf - 1.0).sqrt(), nf.sqrt()]);
            }
            out.reports.push(Report::bound(
                "c_n-lower",
                "-",
                &[("n_max", n_max as f64)],
                0.0,
                lo,
                0.0,
            ));
            out.reports.push(Report::bound(
                "c_n-upper",
                "-",
                &[("n_max", n_max as f64)],
                0.0,
                hi,
                0.0,
            ));
            out.tables.push(t);
        }
        "gap" => {
            let n = sphere_dim(cfg)?;
            let g = profile_gap(n)?;
            let mut t = Table::new(
                "gap",
                &["n", "sup_gap", "argmax", "min_gap", "ratio_argmin", "asym_residual"],
            );
            t.push_numbers(&[
                n as f64,
                g.sup_gap,
                g.argmax,
                g.min_gap,
                g.ratio_argmin,
                g.asym_residual,
            ]);
            out.reports.push(Report::bound(
                "profile-gap-sign",
                &cfg.engine.to_string(),
                &[],
                0.0,
                g.min_gap,
                1e-12,
            ));
            out.tables.push(t);
        }
        _ => return Err(unknown_operation(cfg, &["iso-gauss", "sphere", "c-n", "gap"])),
    }
    out.summary = reports_summary(cfg, &out.reports);
    Ok(out)
}

fn flow_cmd(cfg: &RunConfig) -> Result<Outcome> {
    let mut out = Outcome::default();
    match cfg.operation.as_str() {
        "bobkov" => {
            let trace = with_subject(cfg, |s| {
                let times = flow_times(cfg.param("t0", 0.02), s.spectral_gap(), count(cfg, "per_octave", 2)?);
                Ok(bobkov_flow(s, &times, cfg.param("kappa", 1.0))?)
            })?;
            let mut t = Table::new("flow", &["t", "psi", "decay_rate", "bound"]);
            for (j, (&time, &psi)) in trace.times.iter().zip(&trace.psi).enumerate() {
                let rate = trace.decay_rate.get(j).copied().unwrap_or(f64::NAN);
                let bound = trace.bound.get(j).copied().unwrap_or(f64::NAN);
                t.push_numbers(&[time, psi, rate, bound]);
            }
            out.tables.push(t);
            out.reports.push(Report::bound(
                "bobkov-monotone",
                &trace.engine,
                &[],
                trace.max_increase(),
                0.0,
                1e-7,
            ));
            let gap = trace.worst_bound_gap(10.0);
            out.reports.push(Report::bound(
                "bobkov-derivative-bound",
                &trace.engine,
                &[("slope", 10.0)],
                0.0,
                gap,
                0.0,
            ));
        }
        "perimeter" => {
            let (p, engine) = with_subject(cfg, |s| {
                Ok((
                    perimeter_via_flow(s, cfg.param("t0", 0.01), count(cfg, "levels", 4)?)?,
                    s.engine_id(),
                ))
            })?;
            let mut t = Table::new("perimeter", &["t", "estimate"]);
            for (time, v) in p.times.iter().zip(&p.values) {
                t.push_numbers(&[*time, *v]);
            }
            out.tables.push(t);
            out.reports.push(Report::bound(
                "perimeter-relative-error",
                &engine,
                &[("limit", p.limit), ("reference", p.reference), ("order", p.order)],
                p.relative_error(),
                cfg.param("rel", 0.01),
                0.0,
            ));
        }
        _ => return Err(unknown_operation(cfg, &["bobkov", "perimeter"])),
    }
    out.summary = reports_summary(cfg, &out.reports);
    Ok(out)
}

const CHECKS: [&str; 10] = [
    "commutation",
    "commutation-sqrt",
    "local-poincare",
    "local-log-sobolev",
    "reverse-iso",
    "reverse-bobkov",
    "l1-contraction",
    "second-order",
    "stein-gap",
    "halfspace",
];

fn second_order_cmd(cfg: &RunConfig) -> Result<SecondOrder> {
    let mut rng = seeded(cfg.seed);
    let degree = count(cfg, "degree", 6)?;
    let name = cfg.option("f").unwrap_or("random");
    match &cfg.engine {
        EngineSpec::Gauss => {
            let f = match name {
                "random" => random_hermite(&mut rng, degree),
                other => HermiteFunction::basis(indexed(other, &['h']).ok_or_else(|| bad_function(cfg, other))?),
            };
            Ok(second_order_poincare_gauss(&GaussEngine::default(), &f)?)
        }
        EngineSpec::Sphere(n) => {
            let eng = SphereEngine::with_dimension(*n)?;
            let f = match name {
                "random" => random_zonal(&mut rng, *n, degree),
                other => ZonalFunction::basis(*n, indexed(other, &['p', 'h']).ok_or_else(|| bad_function(cfg, other))?),
            };
            Ok(second_order_poincare_sphere(&eng, &f)?)
        }
        EngineSpec::Line(_) => {
            let op = line_operator(cfg)?;
            let spec = op.spectrum(degree + 2)?;
            let f = match name {
                "random" => random_line(&mut rng, &spec, degree),
                "x" => op.sample(|x| x),
                other => return Err(bad_function(cfg, other)),
            };
            Ok(second_order_poincare_line(&op, &f)?)
        }
    }
}

fn check_cmd(cfg: &RunConfig) -> Result<Outcome> {
    let t = cfg.param("t", 0.1);
    let kappa = cfg.param("kappa", 1.0);
    let mut out = Outcome::default();
    let reports: Vec<Report> = match cfg.operation.as_str() {
        "commutation" => with_subject(cfg, |s| {
            let c = check_commutation(s, t, kappa)?;
            Ok(vec![c.gamma_form.into(), c.sqrt_form.into()])
        })?,
        "commutation-sqrt" => with_subject(cfg, |s| Ok(vec![check_commutation(s, t, kappa)?.sqrt_form.into()]))?,
        "local-poincare" | "local-log-sobolev" => with_subject(cfg, |s| {
            let kind = if cfg.operation == "local-poincare" {
                LocalKind::Poincare
            } else {
                LocalKind::LogSobolev
            };
            let b = check_local_bounds(s, t, kappa, kind)?;
            Ok(vec![b.lower.into(), b.upper.into()])
        })?,
        "reverse-iso" => with_subject(cfg, |s| {
            let r = check_reverse_iso(s, t, kappa)?;
            Ok(vec![r.chain.into(), r.lipschitz.into()])
        })?,
        "l1-contraction" => with_subject(cfg, |s| Ok(vec![check_l1_contraction(s, t)?.into()]))?,
        "reverse-bobkov" => {
            if cfg.engine != EngineSpec::Gauss {
                return Err(usage("reverse-bobkov runs on the gauss engine"));
            }
            let a = cfg.param("a", 1.0);
            vec![check_reverse_bobkov(&|x| cdf(a * x), &|x| sf(a * x), &|x| a * pdf(a * x))?.into()]
        }
        "second-order" => {
            let r = second_order_cmd(cfg)?;
            let gap = r.identity_gap();
            let mut v: Vec<Report> = vec![r.report.into()];
            v.extend(r.corollary.map(Report::from));
            v.push(Report::bound(
                "second-order-identity",
                &cfg.engine.to_string(),
                &[],
                gap,
                0.0,
                cfg.tolerance,
            ));
            v
        }
        "stein-gap" => {
            let (gap, k) = match &cfg.engine {
                EngineSpec::Gauss => stein_gap(&SpectrumSource::Gauss, kappa)?,
                EngineSpec::Sphere(n) => stein_gap(&SpectrumSource::Sphere(*n), kappa)?,
                EngineSpec::Line(_) => {
                    let spec = line_operator(cfg)?.spectrum(count(cfg, "levels", 8)?)?;
                    stein_gap(&SpectrumSource::Line(&spec), kappa)?
                }
            };
            vec![Report::bound(
                "stein-gap",
                &cfg.engine.to_string(),
                &[("kappa", kappa), ("k", k as f64)],
                0.0,
                gap,
                cfg.tolerance,
            )]
        }
        "halfspace" => {
            let fit = halfspace_flow_check(&MehlerData::half_line(cfg.param("a", 0.0)), t)?;
            vec![fit.report()?.into()]
        }
        _ => return Err(unknown_operation(cfg, &CHECKS)),
    };
    out.reports = reports;
    out.summary = reports_summary(cfg, &out.reports);
    Ok(out)
}

fn families(cfg: &RunConfig) -> Result<Vec<Family>> {
    match cfg.option("family").unwrap_or("cap-antipodal") {
        "all" => Ok(Family::ALL.to_vec()),
        name => Ok(vec![name.parse::<Family>()?]),
    }
}

fn delta_kind(cfg: &RunConfig) -> Result<DeltaKind> {
    match cfg.option("delta").unwrap_or("sphere") {
        "sphere" => Ok(DeltaKind::Sphere),
        "gauss" => Ok(DeltaKind::Gauss),
        other => Err(usage(format!("delta must be sphere or gauss, got {other:?}"))),
    }
}

fn constants(cfg: &RunConfig) -> PipelineConstants {
    let d = PipelineConstants::default();
    PipelineConstants {
        c: cfg.param("c", d.c),
        c_h: cfg.param("c_h", d.c_h),
        eta_h: cfg.param("eta_h", d.eta_h),
        ..d
    }
}

fn sweep(cfg: &RunConfig, out: &mut Outcome) -> Result<()> {
    let geom = SphereGeometry::new(sphere_dim(cfg)?)?;
    let v = cfg.param("v", 0.5);
    let grid = log_grid(
        cfg.param("s_max", 0.05),
        cfg.param("decades", 5.0),
        count(cfg, "per_decade", 2)?,
    );
    let kind = delta_kind(cfg)?;
    let k = constants(cfg);
    let fams = families(cfg)?;
    let results: Vec<Result<Experiment>> = parallel_map(&fams, thread_cap(), |&f| {
        Ok(deficit_experiment(geom, f, v, &grid, kind, &k)?)
    });
    let mut table = Table::new("sweep", &["family", "s", "delta", "sym_diff", "bound"]);
    let mut fits = Vec::new();
    for (family, e) in fams.iter().zip(results) {
        let e = match e {
            Ok(e) => e,
            Err(err) => {
                out.reports.push(Report::bound(
                    "deficit-stability",
                    &cfg.engine.to_string(),
                    &[],
                    f64::NAN,
                    f64::NAN,
                    0.0,
                ));
                fits.push(json!({ "family": family.name(), "error": err.to_string() }));
                continue;
            }
        };
        for p in &e.points {
            table.push(vec![
                e.family.name().into(),
                p.s.to_string(),
                p.delta.to_string(),
                p.record.sym_diff.to_string(),
                p.fitted_bound.to_string(),
            ]);
            out.records.push(json!({
                "family": e.family.name(),
                "n": e.n,
                "v": e.v,
                "s": p.s,
                "boundary": p.record.boundary,
                "delta_gauss": p.record.delta_gauss,
                "delta_sphere": p.record.delta_sphere,
                "sym_diff": p.record.sym_diff,
                "pipeline_t": p.trace.t,
                "pipeline_eps": p.trace.eps,
                "final_bound": p.trace.final_bound,
                "fitted_bound": p.fitted_bound,
            }));
            out.reports.push(Report::bound(
                "deficit-stability",
                &cfg.engine.to_string(),
                &[("s", p.s), ("c_fit", e.c_fit)],
                p.record.sym_diff,
                p.fitted_bound,
                0.0,
            ));
        }
        fits.push(json!({
            "family": e.family.name(),
            "c_fit": e.c_fit,
            "exponent_fit": e.exponent_fit,
            "decades": e.decades,
            "violations": e.violations,
        }));
    }
    out.tables.push(table);
    out.summary = json!({ "fits": fits, "checks": reports_summary(cfg, &out.reports) });
    Ok(())
}

fn deficit_cmd(cfg: &RunConfig) -> Result<Outcome> {
    let mut out = Outcome::default();
    let t = cfg.param("t", 0.1);
    let engine = cfg.engine.to_string();
    let perturbed = |eng: &SphereEngine| -> Result<BandSet> {
        let family = families(cfg)?.into_iter().next().unwrap_or(Family::CapAntipodal);
        Ok(make_perturbed_set(
            eng.geom,
            family,
            cfg.param("v", 0.5),
            cfg.param("s", 0.01),
        )?)
    };
    match cfg.operation.as_str() {
        "sweep" => {
            sweep(cfg, &mut out)?;
            return Ok(out);
        }
        "pipeline" => {
            let tr = mn_bound_pipeline(cfg.param("delta", 1e-6), &constants(cfg))?;
            let mut tab = Table::new(
                "pipeline",
                &[
                    "delta",
                    "trivial",
                    "t",
                    "eps",
                    "term1",
                    "term2",
                    "l2_bound",
                    "l1_bound",
                    "final_bound",
                ],
            );
            tab.push_numbers(&[
                tr.delta,
                f64::from(u8::from(tr.trivial)),
                tr.t,
                tr.eps,
                tr.term1,
                tr.term2,
                tr.l2_bound,
                tr.l1_bound,
                tr.final_bound,
            ]);
            out.tables.push(tab);
            out.reports.push(Report::bound(
                "pipeline-final-bound",
                "-",
                &[("delta", tr.delta)],
                tr.final_bound,
                1.0,
                0.0,
            ));
        }
        "hscan" => {
            let eng = SphereEngine::with_dimension(sphere_dim(cfg)?)?;
            let eps: Vec<f64> = cfg.params.get("eps").map_or(H_EPS.to_vec(), |e| vec![*e]);
            let times: Vec<f64> = cfg.params.get("t").map_or(H_TIMES.to_vec(), |t| vec![*t]);
            let scan = hypothesis_h_scan(
                &eng,
                cfg.param("v", H_CAP.0),
                cfg.param("s", H_CAP.1),
                &times,
                &eps,
                cfg.param("eta_h", 4.0),
            )?;
            let mut tab = Table::new("hscan", &["t", "eps", "low", "high", "nodes_low", "nodes_high", "eta"]);
            for c in &scan.cells {
                tab.push_numbers(&[
                    c.t,
                    c.eps,
                    c.low.unwrap_or(f64::NAN),
                    c.high.unwrap_or(f64::NAN),
                    c.nodes_low as f64,
                    c.nodes_high as f64,
                    c.eta,
                ]);
            }
            out.tables.push(tab);
            out.reports.push(Report::bound(
                "h-constant-time-spread",
                &engine,
                &[("c_h", scan.c_h), ("t_exponent", scan.time_exponent())],
                scan.time_spread(),
                cfg.param("spread", 3.0),
                0.0,
            ));
        }
        "rounding" => {
            let eng = SphereEngine::with_dimension(sphere_dim(cfg)?)?;
            let r = rounding(&eng, &perturbed(&eng)?, t)?;
            out.reports.push(Report::bound(
                "rounding",
                &engine,
                &[("t", t), ("c1", r.linear.c1)],
                r.sym_diff,
                r.l1,
                0.0,
            ));
        }
        "projection" => {
            let eng = SphereEngine::with_dimension(sphere_dim(cfg)?)?;
            let p = projection_distance_check(&eng, &perturbed(&eng)?, t, &constants(cfg))?;
            out.reports.push(Report::bound(
                "projection-distance",
                &engine,
                &[("t", t), ("eps", p.eps), ("delta", p.delta)],
                p.lhs,
                p.bound,
                0.0,
            ));
        }
        _ => {
            return Err(unknown_operation(
                cfg,
                &["sweep", "pipeline", "hscan", "rounding", "projection"],
            ))
        }
    }
    out.summary = reports_summary(cfg, &out.reports);
    Ok(out)
}

fn kernel_cmd(cfg: &RunConfig) -> Result<Outcome> {
    let mut out = Outcome::default();
    let geom = SphereGeometry::new(sphere_dim(cfg)?)?;
    let times: Vec<f64> = cfg.params.get("t").map_or(KERNEL_TIMES.to_vec(), |t| vec![*t]);
    match cfg.operation.as_str() {
        "derivatives" => {
            let scan = kernel_bound_scan(&geom, &times)?;
            let mut tab = Table::new(
                "kernel",
                &["t", "grad", "hess_log", "hess_ratio", "resolved", "excluded"],
            );
            for r in &scan.rows {
                tab.push_numbers(&[
                    r.t,
                    r.grad,
                    r.hess_log,
                    r.hess_ratio,
                    r.resolved as f64,
                    r.excluded as f64,
                ]);
            }
            out.tables.push(tab);
            out.summary = json!({
                "n": scan.n,
                "const_grad": scan.const_grad(),
                "const_hess_log": scan.const_hess_log(),
                "const_hess_ratio": scan.const_hess_ratio(),
            });
            return Ok(out);
        }
        "cap-gap" => {
            let mut tab = Table::new("cap_gap", &["n", "t", "sphere", "gauss", "scaled"]);
            for r in cap_measure_gap(&geom, &times)? {
                tab.push_numbers(&[r.n as f64, r.t, r.sphere, r.gauss, r.scaled]);
                out.reports.push(Report::bound(
                    "cap-gap-scaled",
                    &cfg.engine.to_string(),
                    &[("t", r.t)],
                    r.scaled,
                    battery::CAP_GAP_CONSTANT,
                    0.0,
                ));
            }
            out.tables.push(tab);
        }
        _ => return Err(unknown_operation(cfg, &["derivatives", "cap-gap"])),
    }
    out.summary = reports_summary(cfg, &out.reports);
    Ok(out)
}

fn battery_cmd(cfg: &RunConfig) -> Result<Outcome> {
    let profile: BatteryProfile = cfg.operation.parse()?;
    let opts = BatteryOptions {
        seed: cfg.seed,
        c_n_scale: cfg.param("c_n_scale", 1.0),
        threads: thread_cap(),
    };
    let outcomes = battery::run_battery(profile, &opts);
    let mut tab = Table::new("criteria", &["id", "title", "passed"]);
    for o in &outcomes {
        tab.push(vec![o.id.to_string(), o.title.clone(), o.passed.to_string()]);
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    Ok(Outcome {
        reports: outcomes.iter().flat_map(|o| o.reports.iter().cloned()).collect(),
        tables: vec![tab],
        records: Vec::new(),
        summary: json!({
            "profile": profile,
            "seed": cfg.seed,
            "passed": outcomes.len() - failed,
            "failed": failed,
            "criteria": outcomes.iter().map(|o| json!({
                "id": o.id,
                "title": o.title,
                "passed": o.passed,
                "detail": o.detail,
                "seconds": o.seconds,
            })).collect::<Vec<_>>(),
        }),
        failed: Some(failed > 0),
    })
}
