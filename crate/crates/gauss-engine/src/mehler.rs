//! Mehler-kernel flow `Q_t f(x) = ∫ f(e^{−t}x + √(1−e^{−2t}) y) dγ(y)` for
//! non-smooth data, with first and second `x`-derivatives.
//!
//! Unions of intervals use the closed form. Other bounded data is integrated
//! in `y` by composite Gauss–Legendre panels split at the images of the
//! declared breakpoints; a halved-panel pass supplies the error estimate.

use std::sync::Arc;

use profiles::gauss::{cdf, pdf, sf};
use profiles::quad::{composite_legendre, gauss_legendre, Rule};
use profiles::FlowState;

use crate::error::{GaussError, Result};

pub type PointFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Half-width of the `y` window; `γ` puts less than `1e−22` outside it.
const Y_RANGE: f64 = 10.0;
const PANEL_WIDTH: f64 = 1.0;
const PANEL_ORDER: usize = 16;
/// Largest accepted disagreement between the two refinements.
pub const MEHLER_TOL: f64 = 1e-10;

#[derive(Clone)]
pub enum MehlerData {
    /// Disjoint sorted intervals `[lo, hi]` (infinite ends allowed).
    Intervals(Vec<(f64, f64)>),
    /// A function into `[0,1]`, optionally with an accurate `1 − f`, and the
    /// points where it jumps or kinks.
    Pointwise {
        f: PointFn,
        complement: Option<PointFn>,
        breaks: Vec<f64>,
    },
}

impl std::fmt::Debug for MehlerData {
    fn fmt(&self, fm: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Intervals(iv) => fm.debug_tuple("Intervals").field(iv).finish(),
            Self::Pointwise { breaks, .. } => fm
                .debug_struct("Pointwise")
                .field("breaks", breaks)
                .finish_non_exhaustive(),
        }
    }
}

/// `Q_t f` and its derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MehlerJet {
    pub u: f64,
    pub uc: f64,
    pub du: f64,
    pub d2u: f64,
    pub err: f64,
}

impl MehlerData {
    /// `1_{(−∞,a]}`.
    pub fn half_line(a: f64) -> Self {
        Self::Intervals(vec![(f64::NEG_INFINITY, a)])
    }

    pub fn intervals(iv: Vec<(f64, f64)>) -> Result<Self> {
        for (j, &(lo, hi)) in iv.iter().enumerate() {
            if !(lo < hi) || lo.is_nan() || hi.is_nan() {
                return Err(GaussError::Domain(format!("empty or invalid interval [{lo}, {hi}]")));
            }
            if j > 0 && iv[j - 1].1 >= lo {
                return Err(GaussError::Domain("intervals must be sorted and disjoint".into()));
            }
        }
        Ok(Self::Intervals(iv))
    }

    pub fn smooth(f: PointFn, complement: Option<PointFn>) -> Self {
        Self::Pointwise {
            f,
            complement,
            breaks: Vec::new(),
        }
    }

    pub fn constant(c: f64) -> Self {
        Self::smooth(Arc::new(move |_| c), Some(Arc::new(move |_| 1.0 - c)))
    }

    /// Evaluate the datum itself (used for `t = 0` comparisons).
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Self::Intervals(iv) => {
                if iv.iter().any(|&(lo, hi)| lo <= x && x <= hi) {
                    1.0
                } else {
                    0.0
                }
            }
            Self::Pointwise { f, .. } => f(x),
        }
    }

    /// Mean `∫ f dγ`.
    pub fn mean(&self) -> Result<f64> {
        Ok(self.jet(f64::INFINITY, 0.0)?.u)
    }

    pub fn jet(&self, t: f64, x: f64) -> Result<MehlerJet> {
        if !(t > 0.0) {
            return Err(GaussError::Domain(format!("Mehler flow needs t > 0, got {t}")));
        }
        let c = (-t).exp();
        let s = (-(-2.0 * t).exp_m1()).sqrt();
        match self {
            Self::Intervals(iv) => Ok(interval_jet(iv, c, s, x)),
            Self::Pointwise { f, complement, breaks } => pointwise_jet(f, complement.as_ref(), breaks, c, s, x),
        }
    }
}

/// `γ([zl, zh])` without cancellation in either tail.
fn gauss_mass(zl: f64, zh: f64) -> f64 {
    if zl >= 0.0 {
        sf(zl) - sf(zh)
    } else if zh <= 0.0 {
        cdf(zh) - cdf(zl)
    } else {
        1.0 - cdf(zl) - sf(zh)
    }
}

fn complement_of(iv: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut lo = f64::NEG_INFINITY;
    for &(a, b) in iv {
        if a > lo {
            out.push((lo, a));
        }
        lo = b;
    }
    if lo < f64::INFINITY {
        out.push((lo, f64::INFINITY));
    }
    out
}

fn interval_jet(iv: &[(f64, f64)], c: f64, s: f64, x: f64) -> MehlerJet {
    let z = |e: f64| (e - c * x) / s;
    let mass = |set: &[(f64, f64)]| set.iter().map(|&(a, b)| gauss_mass(z(a), z(b))).sum::<f64>();
    let u = mass(iv);
    let uc = mass(&complement_of(iv));
    let (mut d1, mut d2) = (0.0, 0.0);
    for &(a, b) in iv {
        for (e, sign) in [(b, 1.0), (a, -1.0)] {
            if e.is_finite() {
                let ze = z(e);
                d1 += sign * pdf(ze);
                d2 += sign * ze * pdf(ze);
            }
        }
    }
    let r = c / s;
    MehlerJet {
        u,
        uc,
        du: -r * d1,
        d2u: -r * r * d2,
        err: 4.0 * f64::EPSILON * u.min(uc),
    }
}

struct Moments {
    m0: f64,
    m1: f64,
    m2: f64,
}

fn panel_edges(breaks: &[f64], c: f64, s: f64, x: f64, width: f64) -> Vec<f64> {
    let mut cuts: Vec<f64> = breaks
        .iter()
        .map(|&b| (b - c * x) / s)
        .filter(|y| y.abs() < Y_RANGE)
        .collect();
    cuts.push(-Y_RANGE);
    cuts.push(Y_RANGE);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut edges = vec![cuts[0]];
    for w in cuts.windows(2) {
        let pieces = ((w[1] - w[0]) / width).ceil().max(1.0) as usize;
        for j in 1..=pieces {
            edges.push(w[0] + (w[1] - w[0]) * j as f64 / pieces as f64);
        }
    }
    edges
}

fn moments(g: &dyn Fn(f64) -> f64, edges: &[f64], base: &Rule, c: f64, s: f64, x: f64) -> Moments {
    let mut m = Moments {
        m0: 0.0,
        m1: 0.0,
        m2: 0.0,
    };
    for w in edges.windows(2) {
        let mid = 0.5 * (w[0] + w[1]);
        let half = 0.5 * (w[1] - w[0]);
        for (&node, &wt) in base.nodes.iter().zip(&base.weights) {
            let y = mid + half * node;
            let val = half * wt * g(c * x + s * y) * pdf(y);
            m.m0 += val;
            m.m1 += val * y;
            m.m2 += val * (y * y - 1.0);
        }
    }
    m
}

fn gl_base() -> &'static Rule {
    static RULE: std::sync::OnceLock<Rule> = std::sync::OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(PANEL_ORDER).expect("Gauss–Legendre rule"))
}

fn pointwise_jet(
    f: &PointFn,
    complement: Option<&PointFn>,
    breaks: &[f64],
    c: f64,
    s: f64,
    x: f64,
) -> Result<MehlerJet> {
    let base = gl_base();
    let coarse_edges = panel_edges(breaks, c, s, x, PANEL_WIDTH);
    let fine_edges = panel_edges(breaks, c, s, x, 0.5 * PANEL_WIDTH);
    let fc_default = |z: f64| 1.0 - f(z);
    let fc: &dyn Fn(f64) -> f64 = match complement {
        Some(g) => g.as_ref(),
        None => &fc_default,
    };
    let main = moments(f.as_ref(), &fine_edges, base, c, s, x);
    let (mut u, mut uc, m) = if main.m0 <= 0.5 {
        let other = moments(fc, &fine_edges, base, c, s, x);
        (main.m0, other.m0, main)
    } else {
        let other = moments(fc, &fine_edges, base, c, s, x);
        let flipped = Moments {
            m0: main.m0,
            m1: -other.m1,
            m2: -other.m2,
        };
        (main.m0, other.m0, flipped)
    };
    // The window drops mass `< 1e−22`; keep the two halves consistent.
    u = u.max(0.0);
    uc = uc.max(0.0);
    let small_is_u = u <= uc;
    let g: &dyn Fn(f64) -> f64 = if small_is_u { f.as_ref() } else { fc };
    let coarse = moments(g, &coarse_edges, base, c, s, x).m0;
    let fine = if small_is_u { u } else { uc };
    let diff = (coarse - fine).abs();
    if diff > MEHLER_TOL {
        return Err(GaussError::Accuracy { diff, tol: MEHLER_TOL });
    }
    let r = c / s;
    Ok(MehlerJet {
        u,
        uc,
        du: r * m.m1,
        d2u: r * r * m.m2,
        err: diff + 4.0 * f64::EPSILON * fine,
    })
}

/// `Q_t f(x)`; the output stays in `[0,1]` for data in `[0,1]`.
pub fn mehler_apply(data: &MehlerData, t: f64, x: f64) -> Result<f64> {
    Ok(data.jet(t, x)?.u.clamp(0.0, 1.0))
}

/// Composite Gauss–Legendre grid on `[lo, hi]` with weights `w_i φ(x_i)`.
#[derive(Debug, Clone)]
pub struct FlowGrid {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl FlowGrid {
    pub fn new(lo: f64, hi: f64, panels: usize, order: usize) -> Result<Self> {
        let rule = composite_legendre(lo, hi, panels, order)?;
        let weights = rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(&x, &w)| w * pdf(x))
            .collect();
        Ok(Self {
            nodes: rule.nodes,
            weights,
        })
    }

    /// 400 panels of 8 points on `[−10, 10]`.
    pub fn standard() -> Self {
        Self::new(-10.0, 10.0, 400, 8).expect("standard flow grid")
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    /// Snapshot of `Q_t f` on the grid.
    pub fn flow(&self, data: &MehlerData, t: f64) -> Result<FlowState> {
        let len = self.nodes.len();
        let mut st = FlowState {
            coord: self.nodes.clone(),
            weights: self.weights.clone(),
            u: Vec::with_capacity(len),
            uc: Vec::with_capacity(len),
            du: Vec::with_capacity(len),
            d2u: Vec::with_capacity(len),
            tangential: vec![0.0; len],
            tangential_mult: 0.0,
            curvature: vec![1.0; len],
            err: Vec::with_capacity(len),
        };
        for &x in &self.nodes {
            let j = data.jet(t, x)?;
            st.u.push(j.u);
            st.uc.push(j.uc);
            st.du.push(j.du);
            st.d2u.push(j.d2u);
            st.err.push(j.err);
        }
        Ok(st)
    }
}
