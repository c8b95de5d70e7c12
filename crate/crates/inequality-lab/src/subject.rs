//! A test function together with the engine that flows it. Every check is
//! written against two capabilities: the flowed snapshot `P_t f` on the
//! engine's grid, and `P_t[g(f, ∂f)]` at the same nodes.

use std::sync::{Arc, OnceLock};

use gauss_engine::mehler::PointFn;
use gauss_engine::{FlowGrid, GaussEngine, HermiteFunction, MehlerData};
use line_engine::{DiscreteOperator, Spectrum};
use profiles::quad::{gauss_gegenbauer, gauss_hermite, gauss_legendre, Rule};
use profiles::{pdf, FlowState};
use sphere_engine::{arc_jet, BandSet, SphereEngine, ThetaGrid, ZonalFunction};

use crate::error::{LabError, Result};

/// Residual bound accepted from the line semigroup.
pub const LINE_SEMIGROUP_TOL: f64 = 1e-9;
/// Gauss–Hermite order for smooth compositions on the Gaussian line.
const GH_ORDER: usize = 160;
/// Degree of the Gegenbauer projection of composed zonal data.
const ZONAL_PROJECTION_DEGREE: usize = 320;
/// Nodes whose weight is below this fraction of the largest are ignored by
/// point-wise suprema.
pub const WEIGHT_WINDOW: f64 = 1e-14;
/// Relative error above which a node counts as unresolved.
pub const RESOLVE_TOL: f64 = 1e-9;

/// Point-wise composition `g(f, ∂_s f)`.
pub type Composite<'c> = &'c (dyn Fn(f64, f64) -> f64 + Sync);

pub enum Subject<'a> {
    /// Polynomial on the Gaussian line.
    GaussPoly {
        engine: &'a GaussEngine,
        f: HermiteFunction,
        grid: FlowGrid,
    },
    /// Bounded data on the Gaussian line, flowed by the Mehler kernel.
    GaussData { data: MehlerData, grid: FlowGrid },
    /// Zonal polynomial on the sphere.
    SpherePoly {
        engine: &'a SphereEngine,
        f: ZonalFunction,
        grid: ThetaGrid,
        rule: OnceLock<Rule>,
    },
    /// Indicator of a union of bands on the sphere.
    SphereSet {
        engine: &'a SphereEngine,
        set: BandSet,
        grid: ThetaGrid,
    },
    /// Grid function on the weighted line.
    Line {
        op: &'a DiscreteOperator,
        spec: &'a Spectrum,
        f: Vec<f64>,
    },
}

impl<'a> Subject<'a> {
    pub fn gauss_poly(engine: &'a GaussEngine, f: HermiteFunction) -> Self {
        Self::GaussPoly {
            engine,
            f,
            grid: FlowGrid::standard(),
        }
    }

    pub fn gauss_data(data: MehlerData) -> Self {
        Self::GaussData {
            data,
            grid: FlowGrid::standard(),
        }
    }

    /// Bounded data evaluated on a caller-chosen grid.
    pub fn gauss_data_on(data: MehlerData, grid: FlowGrid) -> Self {
        Self::GaussData { data, grid }
    }

    pub fn sphere_poly(engine: &'a SphereEngine, f: ZonalFunction) -> Self {
        let grid = ThetaGrid::standard(&engine.geom);
        Self::SpherePoly {
            engine,
            f,
            grid,
            rule: OnceLock::new(),
        }
    }

    pub fn sphere_set(engine: &'a SphereEngine, set: BandSet) -> Self {
        let grid = ThetaGrid::standard(&engine.geom);
        Self::SphereSet { engine, set, grid }
    }

    /// Band set evaluated on a caller-chosen polar grid.
    pub fn sphere_set_on(engine: &'a SphereEngine, set: BandSet, grid: ThetaGrid) -> Self {
        Self::SphereSet { engine, set, grid }
    }

    pub fn line(op: &'a DiscreteOperator, spec: &'a Spectrum, f: Vec<f64>) -> Result<Self> {
        if f.len() != op.len() {
            return Err(LabError::Domain(format!(
                "expected {} grid values, got {}",
                op.len(),
                f.len()
            )));
        }
        Ok(Self::Line { op, spec, f })
    }

    pub fn engine_id(&self) -> String {
        match self {
            Self::GaussPoly { .. } | Self::GaussData { .. } => "gauss".into(),
            Self::SpherePoly { engine, .. } | Self::SphereSet { engine, .. } => format!("sphere(n={})", engine.n()),
            Self::Line { op, .. } => format!("line({})", op.measure.potential.name()),
        }
    }

    /// Lower curvature bound of the engine.
    pub fn curvature(&self) -> f64 {
        match self {
            Self::Line { op, .. } => op.measure.kappa,
            _ => 1.0,
        }
    }

    /// Spectral gap `λ₁`.
    pub fn spectral_gap(&self) -> f64 {
        match self {
            Self::GaussPoly { .. } | Self::GaussData { .. } => 1.0,
            Self::SpherePoly { engine, .. } | Self::SphereSet { engine, .. } => engine.geom.eigenvalue(1),
            Self::Line { spec, .. } => spec.values.get(1).copied().unwrap_or(spec.next_value),
        }
    }

    /// Whether `f` is an indicator or other data without a classical gradient.
    pub fn is_rough(&self) -> bool {
        matches!(self, Self::GaussData { .. } | Self::SphereSet { .. })
    }

    /// Relative accuracy of point-wise data from this engine.
    pub fn pointwise_accuracy(&self) -> f64 {
        match self {
            Self::Line { .. } => 1e-4,
            Self::SpherePoly { .. } | Self::SphereSet { .. } => 1e-9,
            _ => 1e-10,
        }
    }

    pub fn mean(&self) -> Result<f64> {
        Ok(match self {
            Self::GaussPoly { f, .. } => f.mean(),
            Self::GaussData { data, .. } => data.mean()?,
            Self::SpherePoly { f, .. } => f.mean(),
            Self::SphereSet { set, .. } => set.volume(),
            Self::Line { op, f, .. } => op.mean(f),
        })
    }

    pub fn check_kappa(&self, kappa: f64) -> Result<()> {
        if !(kappa.is_finite() && kappa <= self.curvature() + 1e-12) {
            return Err(LabError::Parameter(format!(
                "κ = {kappa} exceeds the curvature bound {} of {}",
                self.curvature(),
                self.engine_id()
            )));
        }
        Ok(())
    }

    /// Snapshot of `P_t f`.
    pub fn state(&self, t: f64) -> Result<FlowState> {
        if !(t >= 0.0) {
            return Err(LabError::Domain(format!("flow time must be ≥ 0, got {t}")));
        }
        match self {
            Self::GaussPoly { engine, f, grid } => Ok(engine.flow_state(&f.ou_flow(t)?, &grid.nodes, &grid.weights)),
            Self::GaussData { data, grid } => {
                if t == 0.0 {
                    return Err(LabError::Domain("rough data needs t > 0".into()));
                }
                Ok(grid.flow(data, t)?)
            }
            Self::SpherePoly { engine, f, grid, .. } => Ok(grid.state(&engine.geom, &engine.basis, &f.heat_flow(t)?)),
            Self::SphereSet { engine, set, grid } => {
                if t == 0.0 {
                    return Err(LabError::Domain("rough data needs t > 0".into()));
                }
                let flowed = engine.flow_set(set, t)?;
                Ok(grid.state(&engine.geom, &engine.basis, &flowed))
            }
            Self::Line { op, spec, f } => Ok(op.state(&op.semigroup_apply(spec, f, t, LINE_SEMIGROUP_TOL)?)),
        }
    }

    /// `P_t[g(f, ∂_s f)]` at the nodes of [`Subject::state`]. For rough data
    /// the gradient argument is 0.
    pub fn flow_composed(&self, t: f64, g: Composite<'_>) -> Result<Vec<f64>> {
        if !(t >= 0.0) {
            return Err(LabError::Domain(format!("flow time must be ≥ 0, got {t}")));
        }
        match self {
            Self::GaussPoly { f, grid, .. } => {
                let df = f.derivative();
                if t == 0.0 {
                    return Ok(grid.nodes.iter().map(|&x| g(f.eval(x), df.eval(x))).collect());
                }
                let rule = gauss_hermite(GH_ORDER)?;
                let c = (-t).exp();
                let s = (-(-2.0 * t).exp_m1()).sqrt();
                Ok(grid
                    .nodes
                    .iter()
                    .map(|&x| {
                        rule.integrate(|y| {
                            let z = c * x + s * y;
                            g(f.eval(z), df.eval(z))
                        })
                    })
                    .collect())
            }
            Self::GaussData { data, grid } => {
                if t == 0.0 {
                    return Err(LabError::Domain("rough data needs t > 0".into()));
                }
                if let MehlerData::Intervals(_) = data {
                    // Indicator: g takes two values.
                    let g0 = g(0.0, 0.0);
                    let g1 = g(1.0, 0.0);
                    let flowed = grid.flow(data, t)?;
                    return Ok(flowed.u.iter().map(|u| g0 + (g1 - g0) * u).collect());
                }
                let (inner, breaks) = pointwise_of(data);
                let panel = gauss_legendre(16)?;
                Ok(grid
                    .nodes
                    .iter()
                    .map(|&x| mehler_quadrature(&panel, &|z| g(inner(z), 0.0), &breaks, t, x))
                    .collect())
            }
            Self::SpherePoly { engine, f, grid, rule } => {
                let geom = &engine.geom;
                let rule = match rule.get() {
                    Some(r) => r,
                    None => {
                        let r = gauss_gegenbauer(engine.basis.alpha, 2 * ZONAL_PROJECTION_DEGREE)?;
                        rule.get_or_init(|| r)
                    }
                };
                let k = ZONAL_PROJECTION_DEGREE.min(engine.basis.k_max());
                let mut b = vec![0.0; k + 1];
                for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
                    let theta = x.clamp(-1.0, 1.0).acos();
                    let j = arc_jet(geom, &engine.basis, f, theta);
                    let v = g(j.u, j.us);
                    for (c, p) in b.iter_mut().zip(engine.basis.values(x, k)) {
                        *c += w * v * p;
                    }
                }
                let proj = ZonalFunction::new(geom.n, b).heat_flow(t)?;
                Ok(grid
                    .theta
                    .iter()
                    .map(|&th| proj.eval(&engine.basis, th.cos()))
                    .collect())
            }
            Self::SphereSet { .. } => {
                if t == 0.0 {
                    return Err(LabError::Domain("rough data needs t > 0".into()));
                }
                let g0 = g(0.0, 0.0);
                let g1 = g(1.0, 0.0);
                let st = self.state(t)?;
                Ok(st.u.iter().map(|u| g0 + (g1 - g0) * u).collect())
            }
            Self::Line { op, spec, f } => {
                let (d1, _) = op.derivatives(f);
                let v: Vec<f64> = f.iter().zip(&d1).map(|(a, b)| g(*a, *b)).collect();
                Ok(op.semigroup_apply(spec, &v, t, LINE_SEMIGROUP_TOL)?)
            }
        }
    }

    /// `P_t|∂f|` for the square-root commutation form. On the Gaussian line
    /// the integrand is split at the sign changes of `f′`.
    pub fn flow_abs_gradient(&self, t: f64) -> Result<Vec<f64>> {
        match self {
            Self::GaussPoly { f, grid, .. } if t > 0.0 => {
                let df = f.derivative();
                let breaks = sign_changes(&df, -40.0, 40.0);
                let panel = gauss_legendre(16)?;
                Ok(grid
                    .nodes
                    .iter()
                    .map(|&x| mehler_quadrature(&panel, &|z| df.eval(z).abs(), &breaks, t, x))
                    .collect())
            }
            _ => self.flow_composed(t, &|_, d: f64| d.abs()),
        }
    }

    /// Nodes used by point-wise suprema: non-negligible weight and resolved.
    pub fn active_nodes(&self, st: &FlowState) -> Vec<usize> {
        let wmax = st.weights.iter().cloned().fold(0.0, f64::max);
        (0..st.len())
            .filter(|&i| st.weights[i] >= WEIGHT_WINDOW * wmax && st.err[i] <= RESOLVE_TOL * st.u[i].abs().max(1.0))
            .collect()
    }
}

/// Turn bounded Mehler data into a point function and its breakpoints.
fn pointwise_of(data: &MehlerData) -> (PointFn, Vec<f64>) {
    match data {
        MehlerData::Intervals(iv) => {
            let ivc = iv.clone();
            let breaks = iv.iter().flat_map(|&(a, b)| [a, b]).filter(|v| v.is_finite()).collect();
            (
                Arc::new(move |z| {
                    if ivc.iter().any(|&(a, b)| a <= z && z <= b) {
                        1.0
                    } else {
                        0.0
                    }
                }),
                breaks,
            )
        }
        MehlerData::Pointwise { f, breaks, .. } => (f.clone(), breaks.clone()),
    }
}

/// `∫ h(e^{−t}x + √(1−e^{−2t}) y) dγ(y)` by Gauss–Legendre panels of width
/// 1/2 on `|y| ≤ 10`, split at the images of `breaks`.
fn mehler_quadrature(panel: &Rule, h: &dyn Fn(f64) -> f64, breaks: &[f64], t: f64, x: f64) -> f64 {
    let c = (-t).exp();
    let s = (-(-2.0 * t).exp_m1()).sqrt();
    let mut cuts: Vec<f64> = breaks
        .iter()
        .map(|b| (b - c * x) / s)
        .filter(|y| y.abs() < 10.0)
        .collect();
    cuts.push(-10.0);
    cuts.push(10.0);
    cuts.sort_by(|a, b| a.total_cmp(b));
    let mut total = 0.0;
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let pieces = ((b - a) / 0.5).ceil().max(1.0) as usize;
        let step = (b - a) / pieces as f64;
        for j in 0..pieces {
            let lo = a + step * j as f64;
            let mid = lo + 0.5 * step;
            total += 0.5
                * step
                * panel.integrate(|r| {
                    let y = mid + 0.5 * step * r;
                    h(c * x + s * y) * pdf(y)
                });
        }
    }
    total
}

/// Sign changes of a polynomial on `[lo, hi]`, refined by bisection.
pub fn sign_changes(p: &HermiteFunction, lo: f64, hi: f64) -> Vec<f64> {
    let steps = 80_000;
    let h = (hi - lo) / steps as f64;
    let mut roots = Vec::new();
    let mut xa = lo;
    let mut fa = p.eval(xa);
    for i in 1..=steps {
        let xb = lo + h * i as f64;
        let fb = p.eval(xb);
        if fa == 0.0 {
            roots.push(xa);
        } else if fa * fb < 0.0 {
            let (mut a, mut b, mut va) = (xa, xb, fa);
            for _ in 0..80 {
                let m = 0.5 * (a + b);
                let vm = p.eval(m);
                if vm == 0.0 {
                    a = m;
                    b = m;
                    break;
                }
                if (vm < 0.0) == (va < 0.0) {
                    a = m;
                    va = vm;
                } else {
                    b = m;
                }
            }
            roots.push(0.5 * (a + b));
        }
        xa = xb;
        fa = fb;
    }
    roots
}
