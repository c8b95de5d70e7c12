//! Point-wise snapshot of a flowed function on a weighted one-dimensional grid.
//!
//! Every engine reduces to a coordinate `s` (arc length on the line or the
//! geodesic distance from the pole on the sphere). Derivatives are taken in
//! `s`. On the sphere the Hessian also has `n−1` equal tangential
//! eigenvalues `u_s·cot(s/R)/R`, stored in `tangential`.

use crate::gauss::{pdf, quantile_pair};

/// Default clamp band for `Φ⁻¹`.
pub const PHI_INV_CLAMP: f64 = 1e-12;

#[derive(Debug, Clone, Default)]
pub struct FlowState {
    pub coord: Vec<f64>,
    /// Probability weights of the grid.
    pub weights: Vec<f64>,
    pub u: Vec<f64>,
    /// `1 − u`, computed directly where the engine can.
    pub uc: Vec<f64>,
    pub du: Vec<f64>,
    pub d2u: Vec<f64>,
    pub tangential: Vec<f64>,
    /// Multiplicity of the tangential Hessian eigenvalue (`n−1`, or 0).
    pub tangential_mult: f64,
    /// `Ric + ∇²V` in the radial direction at each node.
    pub curvature: Vec<f64>,
    /// Absolute error estimate for `u` at each node.
    pub err: Vec<f64>,
}

/// `h = Φ⁻¹(u)` and its first-order data at one node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformedPoint {
    pub h: f64,
    pub clamped: bool,
    /// `Γ(h)`.
    pub gamma: f64,
    /// `(Γ₂ − κΓ)(h)`.
    pub gamma2_minus: f64,
}

impl FlowState {
    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    pub fn integrate(&self, values: impl Iterator<Item = f64>) -> f64 {
        self.weights.iter().zip(values).map(|(w, v)| w * v).sum()
    }

    pub fn mean(&self) -> f64 {
        self.integrate(self.u.iter().copied())
    }

    /// `Γ(u) = u_s²` at node `i`.
    pub fn gamma(&self, i: usize) -> f64 {
        self.du[i] * self.du[i]
    }

    /// Effective clamp at node `i`: the larger of `eta` and a margin above
    /// the engine's error estimate.
    pub fn clamp_at(&self, i: usize, eta: f64, err_margin: f64) -> f64 {
        let e = self.err.get(i).copied().unwrap_or(0.0);
        eta.max(err_margin * e)
    }

    /// `Φ⁻¹(u)` data at node `i`. Clamped nodes have zero derivatives.
    pub fn transformed(&self, i: usize, kappa: f64, eta: f64) -> TransformedPoint {
        let u = self.u[i];
        let uc = self.uc[i];
        let lo = u.min(uc);
        if !(lo >= eta) {
            let h = if u <= uc {
                quantile_pair(eta, 1.0 - eta)
            } else {
                quantile_pair(1.0 - eta, eta)
            };
            return TransformedPoint {
                h,
                clamped: true,
                gamma: 0.0,
                gamma2_minus: 0.0,
            };
        }
        let h = quantile_pair(u, uc);
        let dens = pdf(h);
        let hs = self.du[i] / dens;
        let hss = self.d2u[i] / dens + h * hs * hs;
        let th = self.tangential[i] / dens;
        let g2 = hss * hss + self.tangential_mult * th * th + (self.curvature[i] - kappa) * hs * hs;
        TransformedPoint {
            h,
            clamped: false,
            gamma: hs * hs,
            gamma2_minus: g2,
        }
    }
}
