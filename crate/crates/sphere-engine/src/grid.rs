//! Dense colatitude grid for point-wise functionals, and the conversion of a
//! zonal function into a [`FlowState`] in the arc-length coordinate.
//!
//! With `u = F(cos θ)` and `s = Rθ`:
//! `u_s = −sin θ F′/R`, `u_ss = (sin²θ F″ − cos θ F′)/R²`, and the tangential
//! Hessian eigenvalue `u_s cot θ / R = −cos θ F′/R²`, which stays finite at
//! both poles.

use std::f64::consts::PI;

use profiles::quad::composite_legendre;
use profiles::{FlowState, SphereGeometry};

use crate::basis::GegenbauerBasis;
use crate::error::Result;
use crate::zonal::ZonalFunction;

#[derive(Debug, Clone)]
pub struct ThetaGrid {
    pub theta: Vec<f64>,
    /// Probability weights (`sin^{n−1}θ dθ / Z`).
    pub weights: Vec<f64>,
}

/// Arc-length derivatives of a zonal function at one colatitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcJet {
    pub u: f64,
    pub us: f64,
    pub uss: f64,
    pub tangential: f64,
    pub err: f64,
}

pub fn arc_jet(geom: &SphereGeometry, basis: &GegenbauerBasis, f: &ZonalFunction, theta: f64) -> ArcJet {
    let (s, c) = theta.sin_cos();
    let k = f.degree();
    let pj = basis.jet(c, k);
    let (mut v, mut dv, mut d2v, mut abs_sum) = (0.0, 0.0, 0.0, 0.0);
    for (i, b) in f.coeffs.iter().enumerate() {
        let term = b * pj.p[i];
        v += term;
        abs_sum += term.abs();
        dv += b * pj.dp[i];
        d2v += b * pj.d2p[i];
    }
    let mut err = 64.0 * f64::EPSILON * abs_sum;
    if k >= 4 {
        // Geometric extrapolation of the last retained terms bounds the
        // omitted tail; it stays large where the terms do not decay.
        let term = |j: usize| (f.coeffs[j] * pj.p[j]).abs();
        let last = term(k) + term(k - 1);
        let before = term(k - 2) + term(k - 3);
        let ratio = if before > 0.0 { (last / before).min(1.0) } else { 1.0 };
        err += last * ratio;
    }
    let r = geom.r;
    ArcJet {
        u: v,
        us: -s * dv / r,
        uss: (s * s * d2v - c * dv) / (r * r),
        tangential: -c * dv / (r * r),
        err,
    }
}

impl ThetaGrid {
    pub fn new(geom: &SphereGeometry, panels: usize, order: usize) -> Result<Self> {
        let rule = composite_legendre(0.0, PI, panels, order)?;
        let weights = rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(&t, &w)| w * geom.density(t))
            .collect();
        Ok(Self {
            theta: rule.nodes,
            weights,
        })
    }

    /// 250 panels of 8 points.
    pub fn standard(geom: &SphereGeometry) -> Self {
        Self::new(geom, 250, 8).expect("standard colatitude grid")
    }

    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.theta.iter().zip(&self.weights).map(|(&t, &w)| w * f(t)).sum()
    }

    pub fn integrate_values(&self, values: impl Iterator<Item = f64>) -> f64 {
        self.weights.iter().zip(values).map(|(w, v)| w * v).sum()
    }

    /// Snapshot of `f` in arc length; the curvature entry is `Ric = 1`.
    pub fn state(&self, geom: &SphereGeometry, basis: &GegenbauerBasis, f: &ZonalFunction) -> FlowState {
        let len = self.len();
        let mut st = FlowState {
            coord: self.theta.iter().map(|t| geom.r * t).collect(),
            weights: self.weights.clone(),
            u: Vec::with_capacity(len),
            uc: Vec::with_capacity(len),
            du: Vec::with_capacity(len),
            d2u: Vec::with_capacity(len),
            tangential: Vec::with_capacity(len),
            tangential_mult: geom.nf() - 1.0,
            curvature: vec![1.0; len],
            err: Vec::with_capacity(len),
        };
        for &t in &self.theta {
            let j = arc_jet(geom, basis, f, t);
            st.u.push(j.u);
            st.uc.push(1.0 - j.u);
            st.du.push(j.us);
            st.d2u.push(j.uss);
            st.tangential.push(j.tangential);
            st.err.push(j.err);
        }
        st
    }
}
