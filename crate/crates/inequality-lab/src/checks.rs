//! Point-wise and integrated inequalities under `CD(κ,∞)`.

use std::sync::atomic::{AtomicBool, Ordering};

use gauss_engine::{FlowGrid, GaussEngine, HermiteFunction, MehlerData};
use line_engine::{functional_report, DiscreteOperator, Spectrum};
use profiles::gauss::{iso_gauss_pair, quantile_pair};
use profiles::{iso_gauss, PHI_INV_CLAMP};
use sphere_engine::{eigenvalue, SphereEngine, ZonalFunction};

use crate::error::{LabError, Result};
use crate::report::{params, InequalityReport};
use crate::subject::Subject;

/// `C(κ,t) = 2∫₀ᵗ e^{2κs} ds`.
pub fn c_kappa(kappa: f64, t: f64) -> f64 {
    if kappa == 0.0 {
        2.0 * t
    } else {
        (2.0 * kappa * t).exp_m1() / kappa
    }
}

/// `D(κ,t) = 2∫₀ᵗ e^{−2κs} ds`.
pub fn d_kappa(kappa: f64, t: f64) -> f64 {
    if kappa == 0.0 {
        2.0 * t
    } else {
        -(-2.0 * kappa * t).exp_m1() / kappa
    }
}

/// Error margin above the engine estimate used for the `Φ⁻¹` clamp.
pub const CLAMP_ERR_MARGIN: f64 = 1e3;
/// Tolerance of the Lipschitz form of the reverse isoperimetric bound.
pub const LIPSCHITZ_TOL: f64 = 1e-6;

fn need_time(t: f64) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(LabError::Domain(format!("t must be positive, got {t}")));
    }
    Ok(())
}

fn need_gradient(s: &Subject<'_>) -> Result<()> {
    if s.is_rough() {
        return Err(LabError::Domain("this check needs a function with a gradient".into()));
    }
    Ok(())
}

fn max_over(nodes: &[usize], f: impl Fn(usize) -> f64) -> f64 {
    nodes.iter().map(|&i| f(i)).fold(f64::NEG_INFINITY, f64::max)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommutationCheck {
    /// `Γ(P_t f) ≤ e^{−2κt} P_t(Γf)`.
    pub gamma_form: InequalityReport,
    /// `√Γ(P_t f) ≤ e^{−κt} P_t√Γf`.
    pub sqrt_form: InequalityReport,
    /// Whether `(P_t√Γf)² ≤ P_tΓf` held at every node, i.e. the square-root
    /// form was the tighter of the two.
    pub sqrt_is_tighter: bool,
}

pub fn check_commutation(s: &Subject<'_>, t: f64, kappa: f64) -> Result<CommutationCheck> {
    need_time(t)?;
    need_gradient(s)?;
    s.check_kappa(kappa)?;
    let st = s.state(t)?;
    let pg = s.flow_composed(t, &|_, d| d * d)?;
    let pa = s.flow_abs_gradient(t)?;
    let nodes = s.active_nodes(&st);
    let acc = s.pointwise_accuracy();
    let damp2 = (-2.0 * kappa * t).exp();
    let damp = (-kappa * t).exp();
    let scale = max_over(&nodes, |i| damp2 * pg[i]).max(0.0);
    let lhs = max_over(&nodes, |i| st.gamma(i) - damp2 * pg[i]);
    let p = params(&[("t", t), ("kappa", kappa), ("nodes", nodes.len() as f64)]);
    let gamma_form = InequalityReport::new("commutation", s.engine_id(), p.clone(), lhs, 0.0, acc * (1.0 + scale))?;
    // The projection of |∇f| on the sphere converges only algebraically.
    let sqrt_acc = match s {
        Subject::SpherePoly { .. } => 1e-6,
        _ => acc.max(1e-9),
    };
    let sqrt_scale = max_over(&nodes, |i| damp * pa[i]).max(0.0);
    let sqrt_lhs = max_over(&nodes, |i| st.du[i].abs() - damp * pa[i]);
    let sqrt_form = InequalityReport::new(
        "commutation-sqrt",
        s.engine_id(),
        p,
        sqrt_lhs,
        0.0,
        sqrt_acc * (1.0 + sqrt_scale),
    )?;
    let sqrt_is_tighter = nodes.iter().all(|&i| pa[i] * pa[i] <= pg[i] + sqrt_acc * (1.0 + pg[i]));
    Ok(CommutationCheck {
        gamma_form,
        sqrt_form,
        sqrt_is_tighter,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocalKind {
    Poincare,
    LogSobolev,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalBounds {
    /// Reverse form `c·Γ(P_tf)[/P_tf] ≤ local variance or entropy`.
    pub lower: InequalityReport,
    /// Direct form `local variance or entropy ≤ D·P_t(Γf[/f])`.
    pub upper: InequalityReport,
}

/// Local Poincaré and log-Sobolev chains. The reverse log-Sobolev form uses
/// `C(κ,t)/2`: with `C(κ,t)` itself it fails for `f = e^{ax}` on the
/// Gaussian line, where the ratio of the two sides is exactly `(e^{2t}−1)/2`.
pub fn check_local_bounds(s: &Subject<'_>, t: f64, kappa: f64, kind: LocalKind) -> Result<LocalBounds> {
    need_time(t)?;
    need_gradient(s)?;
    s.check_kappa(kappa)?;
    let st = s.state(t)?;
    let nodes = s.active_nodes(&st);
    let acc = s.pointwise_accuracy();
    let c = c_kappa(kappa, t);
    let d = d_kappa(kappa, t);
    let (name, local, rev, dir, c_lower) = match kind {
        LocalKind::Poincare => {
            let p2 = s.flow_composed(t, &|v, _| v * v)?;
            let pg = s.flow_composed(t, &|_, g| g * g)?;
            let local: Vec<f64> = p2.iter().zip(&st.u).map(|(a, u)| a - u * u).collect();
            let rev: Vec<f64> = (0..st.len()).map(|i| st.gamma(i)).collect();
            ("local-poincare", local, rev, pg, c)
        }
        LocalKind::LogSobolev => {
            let bad = AtomicBool::new(false);
            let guard = |v: f64| {
                if !(v > 0.0) {
                    bad.store(true, Ordering::Relaxed);
                    f64::NAN
                } else {
                    v
                }
            };
            let pe = s.flow_composed(t, &|v, _| {
                let v = guard(v);
                v * v.ln()
            })?;
            let pr = s.flow_composed(t, &|v, g| g * g / guard(v))?;
            if bad.load(Ordering::Relaxed) || st.u.iter().any(|u| !(*u > 0.0)) {
                return Err(LabError::Domain("log-Sobolev chain needs f > 0".into()));
            }
            let local: Vec<f64> = pe.iter().zip(&st.u).map(|(a, u)| a - u * u.ln()).collect();
            let rev: Vec<f64> = (0..st.len()).map(|i| st.gamma(i) / st.u[i]).collect();
            ("local-log-sobolev", local, rev, pr, 0.5 * c)
        }
    };
    let scale = max_over(&nodes, |i| local[i].abs().max(d * dir[i]).max(st.u[i].abs())).max(0.0);
    let tol = acc * (1.0 + scale);
    let p = params(&[("t", t), ("kappa", kappa), ("c_lower", c_lower), ("d_upper", d)]);
    let lower = InequalityReport::new(
        format!("{name}-reverse"),
        s.engine_id(),
        p.clone(),
        max_over(&nodes, |i| c_lower * rev[i] - local[i]),
        0.0,
        tol,
    )?;
    let upper = InequalityReport::new(
        format!("{name}-direct"),
        s.engine_id(),
        p,
        max_over(&nodes, |i| local[i] - d * dir[i]),
        0.0,
        tol,
    )?;
    Ok(LocalBounds { lower, upper })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReverseIso {
    /// `C(κ,t)Γ(P_tf) ≤ I_γ(P_tf)² − (P_t I_γ(f))²`.
    pub chain: InequalityReport,
    /// `C(κ,t)·max Γ(Φ⁻¹P_tf) ≤ 1`.
    pub lipschitz: InequalityReport,
}

pub fn check_reverse_iso(s: &Subject<'_>, t: f64, kappa: f64) -> Result<ReverseIso> {
    need_time(t)?;
    s.check_kappa(kappa)?;
    let out_of_range = AtomicBool::new(false);
    let pi = s.flow_composed(t, &|v, _| {
        if !(-1e-12..=1.0 + 1e-12).contains(&v) {
            out_of_range.store(true, Ordering::Relaxed);
        }
        iso_gauss(v.clamp(0.0, 1.0))
    })?;
    if out_of_range.load(Ordering::Relaxed) {
        return Err(LabError::Domain("reverse isoperimetry needs 0 ≤ f ≤ 1".into()));
    }
    let st = s.state(t)?;
    let nodes = s.active_nodes(&st);
    let c = c_kappa(kappa, t);
    let acc = s.pointwise_accuracy();
    let chain_lhs = max_over(&nodes, |i| {
        let iu = iso_gauss_pair(st.u[i], st.uc[i]);
        c * st.gamma(i) - (iu * iu - pi[i] * pi[i])
    });
    let mut eta = PHI_INV_CLAMP;
    let mut ratio = 0.0f64;
    let mut used = 0usize;
    for &i in &nodes {
        let e = st.clamp_at(i, PHI_INV_CLAMP, CLAMP_ERR_MARGIN);
        eta = eta.max(e);
        let tp = st.transformed(i, kappa, e);
        if !tp.clamped {
            ratio = ratio.max(c * tp.gamma);
            used += 1;
        }
    }
    let p = params(&[("t", t), ("kappa", kappa)]);
    let chain = InequalityReport::new("reverse-iso", s.engine_id(), p, chain_lhs, 0.0, acc * (1.0 + c))?;
    let lp = params(&[
        ("t", t),
        ("kappa", kappa),
        ("eta", eta),
        ("excluded", (st.len() - used) as f64),
    ]);
    let lipschitz = if used == 0 {
        InequalityReport::inconclusive("reverse-iso-lipschitz", s.engine_id(), lp, LIPSCHITZ_TOL)
    } else {
        InequalityReport::new("reverse-iso-lipschitz", s.engine_id(), lp, ratio, 1.0, LIPSCHITZ_TOL)?
    };
    Ok(ReverseIso { chain, lipschitz })
}

/// `‖f − P_tf‖₁ ≤ √(2t)‖√Γf‖₁`.
pub fn check_l1_contraction(s: &Subject<'_>, t: f64) -> Result<InequalityReport> {
    need_time(t)?;
    need_gradient(s)?;
    let s0 = s.state(0.0)?;
    let st = s.state(t)?;
    let lhs = s0.integrate(s0.u.iter().zip(&st.u).map(|(a, b)| (a - b).abs()));
    let rhs = (2.0 * t).sqrt() * s0.integrate(s0.du.iter().map(|d| d.abs()));
    let tol = 1e-9 * (1.0 + rhs);
    InequalityReport::new("l1-contraction", s.engine_id(), params(&[("t", t)]), lhs, rhs, tol)
}

/// Reverse Bobkov `√((∫f′dγ)² + (∫I_γ(f)dγ)²) ≤ I_γ(∫f dγ)` for a smooth
/// `f` into `[0,1]`, given with its complement and derivative.
pub fn check_reverse_bobkov(
    f: &dyn Fn(f64) -> f64,
    fc: &dyn Fn(f64) -> f64,
    df: &dyn Fn(f64) -> f64,
) -> Result<InequalityReport> {
    let grid = FlowGrid::standard();
    let bad = grid.nodes.iter().any(|&x| !(-1e-12..=1.0 + 1e-12).contains(&f(x)));
    let mean = grid.integrate(f);
    if bad {
        return Err(LabError::Domain("reverse Bobkov needs 0 ≤ f ≤ 1".into()));
    }
    let mean_c = grid.integrate(fc);
    let grad = grid.integrate(df);
    let iso = grid.integrate(|x| iso_gauss_pair(f(x).clamp(0.0, 1.0), fc(x).clamp(0.0, 1.0)));
    let lhs = grad.hypot(iso);
    let rhs = iso_gauss_pair(mean, mean_c);
    InequalityReport::new("reverse-bobkov", "gauss", params(&[("mean", mean)]), lhs, rhs, 1e-9)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SecondOrder {
    /// `½‖f+Lf‖² ≤ ∫(Γ₂−Γ)(f)`, stored with `lhs = ½‖f+Lf‖²`.
    pub report: InequalityReport,
    /// Sphere only: `½‖f−Π₁f‖² ≤ ½‖f+Lf‖²`.
    pub corollary: Option<InequalityReport>,
    /// `Σ(λ_k²−λ_k)f_k²` and `Σ(λ_k−1)²f_k²` where a spectrum is exact.
    pub spectral: Option<(f64, f64)>,
    /// The same two integrals by quadrature of point-wise Γ-calculus.
    pub quadrature: (f64, f64),
    /// Whether the input had to be centred.
    pub centered: bool,
}

impl SecondOrder {
    /// Largest disagreement between spectral and quadrature values.
    pub fn identity_gap(&self) -> f64 {
        match self.spectral {
            Some((a, b)) => (a - self.quadrature.0).abs().max((b - self.quadrature.1).abs()),
            None => 0.0,
        }
    }
}

pub const SECOND_ORDER_TOL: f64 = 1e-9;

pub fn second_order_poincare_gauss(engine: &GaussEngine, f: &HermiteFunction) -> Result<SecondOrder> {
    let centered = f.mean().abs() > 0.0;
    let mut g = f.clone();
    g.coeffs[0] = 0.0;
    let spec_g2g: f64 = g
        .coeffs
        .iter()
        .enumerate()
        .map(|(k, a)| (k * k - k) as f64 * a * a)
        .sum();
    let spec_flf: f64 = g
        .coeffs
        .iter()
        .enumerate()
        .map(|(k, a)| (k as f64 - 1.0).powi(2) * a * a)
        .sum();
    let d1 = g.derivative();
    let d2 = d1.derivative();
    let rule = profiles::quad::gauss_hermite((2 * g.degree() + 2).max(engine.rule.len()))?;
    let quad_g2g = rule.integrate(|x| d2.eval(x).powi(2));
    let quad_flf = rule.integrate(|x| (g.eval(x) + d2.eval(x) - x * d1.eval(x)).powi(2));
    let tol = SECOND_ORDER_TOL * (1.0 + spec_g2g);
    let report = InequalityReport::new(
        "second-order-poincare",
        "gauss",
        params(&[("kappa", 1.0), ("degree", g.degree() as f64)]),
        0.5 * spec_flf,
        spec_g2g,
        tol,
    )?;
    Ok(SecondOrder {
        report,
        corollary: None,
        spectral: Some((spec_g2g, spec_flf)),
        quadrature: (quad_g2g, quad_flf),
        centered,
    })
}

pub fn second_order_poincare_sphere(engine: &SphereEngine, f: &ZonalFunction) -> Result<SecondOrder> {
    let centered = f.mean().abs() > 0.0;
    let mut g = f.clone();
    g.coeffs[0] = 0.0;
    let spec_g2g = g.gamma2_minus_gamma();
    let spec_flf = g.poincare2_rhs();
    let gam = engine.gamma_calculus_zonal(&g)?;
    let vals = engine.synthesize(&g)?;
    let quad_g2g = gam.integral_gamma2_minus_gamma();
    let quad_flf: f64 = gam
        .weights
        .iter()
        .zip(&vals)
        .zip(&gam.laplacian)
        .map(|((w, v), l)| w * (v + l).powi(2))
        .sum();
    let tol = SECOND_ORDER_TOL * (1.0 + spec_g2g);
    let engine_id = format!("sphere(n={})", engine.n());
    let p = params(&[("kappa", 1.0), ("degree", g.degree() as f64)]);
    let report = InequalityReport::new(
        "second-order-poincare",
        engine_id.clone(),
        p.clone(),
        0.5 * spec_flf,
        spec_g2g,
        tol,
    )?;
    let beyond_linear = g.sub(&g.project_linear()).norm2();
    let corollary = InequalityReport::new(
        "second-order-poincare-corollary",
        engine_id,
        p,
        0.5 * beyond_linear,
        0.5 * spec_flf,
        tol,
    )?;
    Ok(SecondOrder {
        report,
        corollary: Some(corollary),
        spectral: Some((spec_g2g, spec_flf)),
        quadrature: (quad_g2g, quad_flf),
        centered,
    })
}

pub fn second_order_poincare_line(op: &DiscreteOperator, f: &[f64]) -> Result<SecondOrder> {
    let r = functional_report(op, f)?;
    let tol = 1e-8 * (1.0 + r.gamma2_minus_gamma);
    let report = InequalityReport::new(
        "second-order-poincare",
        format!("line({})", op.measure.potential.name()),
        params(&[("kappa", op.measure.kappa)]),
        0.5 * r.f_plus_lf_sq,
        r.gamma2_minus_gamma,
        tol,
    )?;
    Ok(SecondOrder {
        report,
        corollary: None,
        spectral: None,
        quadrature: (r.gamma2_minus_gamma, r.f_plus_lf_sq),
        centered: r.mean.abs() > 0.0,
    })
}

/// Which spectrum a Stein-gap query refers to.
pub enum SpectrumSource<'a> {
    Gauss,
    Sphere(usize),
    Line(&'a Spectrum),
}

/// `min_{k≥1}(λ_k − κ)` and its minimizer.
pub fn stein_gap(src: &SpectrumSource<'_>, kappa: f64) -> Result<(f64, usize)> {
    const LEVELS: usize = 64;
    match src {
        SpectrumSource::Gauss => Ok((1..=LEVELS)
            .map(|k| (k as f64 - kappa, k))
            .min_by(|a, b| a.0.total_cmp(&b.0))
            .expect("non-empty")),
        SpectrumSource::Sphere(n) => {
            if *n < 2 {
                return Err(LabError::Parameter(format!("sphere dimension must be ≥ 2, got {n}")));
            }
            Ok((1..=LEVELS)
                .map(|k| (eigenvalue(*n, k) - kappa, k))
                .min_by(|a, b| a.0.total_cmp(&b.0))
                .expect("non-empty"))
        }
        SpectrumSource::Line(spec) => Ok(line_engine::stein_gap(spec, kappa)?),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HalfspaceFit {
    pub t: f64,
    /// γ-weighted RMS distance of `Φ⁻¹(Q_tf)` from its best affine fit.
    pub residual: f64,
    pub slope: f64,
    pub intercept: f64,
    /// `e^t·|slope|`, to be compared with `k_t`.
    pub normalized_slope: f64,
    /// `k_t = (1−e^{−2t})^{−1/2}`.
    pub k_t: f64,
    pub nodes_used: usize,
}

pub const HALFSPACE_RESIDUAL_TOL: f64 = 1e-8;

pub fn halfspace_flow_check(data: &MehlerData, t: f64) -> Result<HalfspaceFit> {
    need_time(t)?;
    let grid = FlowGrid::standard();
    let st = grid.flow(data, t)?;
    let (mut sw, mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    let mut pts = Vec::new();
    for i in 0..st.len() {
        let lo = st.u[i].min(st.uc[i]);
        if lo < PHI_INV_CLAMP || lo < CLAMP_ERR_MARGIN * st.err[i] {
            continue;
        }
        let h = quantile_pair(st.u[i], st.uc[i]);
        let (x, w) = (st.coord[i], st.weights[i]);
        sw += w;
        sx += w * x;
        sy += w * h;
        sxx += w * x * x;
        sxy += w * x * h;
        pts.push((x, w, h));
    }
    if pts.len() < 3 {
        return Err(LabError::Resolution("too few unclamped nodes for a fit".into()));
    }
    let (mx, my) = (sx / sw, sy / sw);
    let slope = (sxy / sw - mx * my) / (sxx / sw - mx * mx);
    let intercept = my - slope * mx;
    let ss: f64 = pts
        .iter()
        .map(|&(x, w, h)| w * (h - intercept - slope * x).powi(2))
        .sum();
    Ok(HalfspaceFit {
        t,
        residual: (ss / sw).sqrt(),
        slope,
        intercept,
        normalized_slope: t.exp() * slope.abs(),
        k_t: 1.0 / (-(-2.0 * t).exp_m1()).sqrt(),
        nodes_used: pts.len(),
    })
}

impl HalfspaceFit {
    pub fn report(&self) -> Result<InequalityReport> {
        InequalityReport::new(
            "halfspace-linearity",
            "gauss",
            params(&[
                ("t", self.t),
                ("slope", self.slope),
                ("normalized_slope", self.normalized_slope),
                ("k_t", self.k_t),
            ]),
            self.residual,
            0.0,
            HALFSPACE_RESIDUAL_TOL,
        )
    }
}
