//! Divergence-form discretization of `L = d²/dx² − V′ d/dx` with zero flux at
//! both ends, its spectrum, and the semigroup by eigen-expansion.
//!
//! With `w_i ∝ e^{−V(x_i)} h` and flux weights `ρ_{i+1/2} ∝ e^{−V(x_{i+1/2})}`,
//! `(Lf)_i = [ρ_{i+1/2}(f_{i+1}−f_i) − ρ_{i−1/2}(f_i−f_{i−1})] / (h w_i)`.
//! `W^{1/2}(−L)W^{−1/2}` is symmetric tridiagonal; its entries are formed
//! from differences of `V`, so nothing underflows.

use profiles::quad::integrate_adaptive;
use profiles::tridiag::SymTridiagonal;
use profiles::FlowState;

use crate::error::{LineError, Result};
use crate::potential::Potential;

pub const MASS_LOSS_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct WeightedLineMeasure {
    pub potential: Potential,
    pub a: f64,
    pub b: f64,
    pub kappa: f64,
    /// `max V″` over the domain (sampled).
    pub k_upper: f64,
    /// Fraction of the full-line mass outside `[a,b]` (log-concave tail bound).
    pub mass_loss: f64,
}

impl WeightedLineMeasure {
    pub fn new(potential: Potential, a: f64, b: f64, kappa: f64) -> Result<Self> {
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(LineError::Parameter(format!("invalid domain [{a}, {b}]")));
        }
        if !(kappa > 0.0) {
            return Err(LineError::Parameter(format!("κ must be positive, got {kappa}")));
        }
        let vmin = (0..=2000)
            .map(|i| potential.v(a + (b - a) * i as f64 / 2000.0))
            .fold(f64::INFINITY, f64::min);
        let inside = integrate_adaptive(|x| (-(potential.v(x) - vmin)).exp(), a, b, 1e-12);
        // For convex V with V′ pointing outward, ∫_b^∞ e^{−V} ≤ e^{−V(b)}/V′(b).
        let tail = |edge: f64, slope: f64| -> f64 {
            if slope > 0.0 {
                (-(potential.v(edge) - vmin)).exp() / slope
            } else {
                f64::INFINITY
            }
        };
        let tails = tail(b, potential.dv(b)) + tail(a, -potential.dv(a));
        let mass_loss = tails / (inside + tails);
        if !(mass_loss <= MASS_LOSS_TOL) {
            let mid = 0.5 * (a + b);
            let half = 0.75 * (b - a);
            return Err(LineError::DomainTooSmall {
                a,
                b,
                lost: mass_loss,
                suggest_a: mid - half,
                suggest_b: mid + half,
            });
        }
        let k_upper = (0..=2000)
            .map(|i| potential.d2v(a + (b - a) * i as f64 / 2000.0))
            .fold(f64::NEG_INFINITY, f64::max);
        Ok(Self {
            potential,
            a,
            b,
            kappa,
            k_upper,
            mass_loss,
        })
    }

    pub fn with_default_domain(potential: Potential, kappa: f64) -> Result<Self> {
        let (a, b) = potential.default_domain();
        Self::new(potential, a, b, kappa)
    }
}

#[derive(Debug, Clone)]
pub struct DiscreteOperator {
    pub measure: WeightedLineMeasure,
    pub x: Vec<f64>,
    pub h: f64,
    /// Probability weights `w_i`.
    pub w: Vec<f64>,
    /// `W^{1/2}(−L)W^{−1/2}`.
    pub sym: SymTridiagonal,
    v_nodes: Vec<f64>,
    v_mid: Vec<f64>,
}

/// Eigenpairs of `−L`, eigenfunctions orthonormal in `L²(w)`.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub values: Vec<f64>,
    pub functions: Vec<Vec<f64>>,
    /// First eigenvalue not retained.
    pub next_value: f64,
}

pub fn discretize_generator(measure: WeightedLineMeasure, m: usize) -> Result<DiscreteOperator> {
    if m < 100 {
        return Err(LineError::Parameter(format!("grid size must be ≥ 100, got {m}")));
    }
    let (a, b) = (measure.a, measure.b);
    let h = (b - a) / (m - 1) as f64;
    let x: Vec<f64> = (0..m).map(|i| a + h * i as f64).collect();
    for &xi in &x {
        let c = measure.potential.d2v(xi);
        if c < measure.kappa - 1e-12 {
            return Err(LineError::Curvature {
                x: xi,
                found: c,
                kappa: measure.kappa,
            });
        }
    }
    let v_nodes: Vec<f64> = x.iter().map(|&xi| measure.potential.v(xi)).collect();
    let v_mid: Vec<f64> = x.windows(2).map(|p| measure.potential.v(0.5 * (p[0] + p[1]))).collect();
    let vmin = v_nodes.iter().cloned().fold(f64::INFINITY, f64::min);
    let raw: Vec<f64> = v_nodes.iter().map(|v| (-(v - vmin)).exp()).collect();
    let total: f64 = raw.iter().sum();
    let w: Vec<f64> = raw.iter().map(|r| r / total).collect();
    let h2 = h * h;
    let mut d = vec![0.0; m];
    let mut e = vec![0.0; m - 1];
    for i in 0..m {
        let mut s = 0.0;
        if i > 0 {
            s += (v_nodes[i] - v_mid[i - 1]).exp();
        }
        if i + 1 < m {
            s += (v_nodes[i] - v_mid[i]).exp();
        }
        d[i] = s / h2;
    }
    for i in 0..m - 1 {
        e[i] = -(0.5 * (v_nodes[i] + v_nodes[i + 1]) - v_mid[i]).exp() / h2;
    }
    let sym = SymTridiagonal::new(d, e)?;
    Ok(DiscreteOperator {
        measure,
        x,
        h,
        w,
        sym,
        v_nodes,
        v_mid,
    })
}

impl DiscreteOperator {
    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn inner(&self, f: &[f64], g: &[f64]) -> f64 {
        self.w.iter().zip(f).zip(g).map(|((w, a), b)| w * a * b).sum()
    }

    pub fn mean(&self, f: &[f64]) -> f64 {
        self.w.iter().zip(f).map(|(w, a)| w * a).sum()
    }

    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        self.x.iter().map(|&x| f(x)).collect()
    }

    /// Discrete `Lf`.
    pub fn apply(&self, f: &[f64]) -> Vec<f64> {
        let m = self.len();
        let h2 = self.h * self.h;
        (0..m)
            .map(|i| {
                let mut s = 0.0;
                if i + 1 < m {
                    s += (self.v_nodes[i] - self.v_mid[i]).exp() * (f[i + 1] - f[i]);
                }
                if i > 0 {
                    s -= (self.v_nodes[i] - self.v_mid[i - 1]).exp() * (f[i] - f[i - 1]);
                }
                s / h2
            })
            .collect()
    }

    pub fn spectrum(&self, count: usize) -> Result<Spectrum> {
        if count == 0 || count > self.len() / 10 {
            return Err(LineError::Parameter(format!(
                "spectrum count must be in 1..={}, got {count}",
                self.len() / 10
            )));
        }
        let mut values = self.sym.lowest_eigenvalues(count + 1);
        let next_value = values.pop().expect("count + 1 eigenvalues");
        let mut functions = Vec::with_capacity(count);
        for (k, lam) in values.iter_mut().enumerate() {
            let v = if k == 0 {
                // The kernel is exactly the constants: v ∝ √w.
                *lam = 0.0;
                self.w.iter().map(|w| w.sqrt()).collect::<Vec<_>>()
            } else {
                self.sym.eigenvector(*lam)?
            };
            let mut phi: Vec<f64> = v.iter().zip(&self.w).map(|(a, w)| a / w.sqrt()).collect();
            let norm = self.inner(&phi, &phi).sqrt();
            if !(norm.is_finite() && norm > 0.0) {
                return Err(LineError::Numerical(format!("degenerate eigenvector {k}")));
            }
            // Sign convention: positive at the right end.
            let sign = if *phi.last().expect("non-empty") < 0.0 {
                -1.0
            } else {
                1.0
            };
            phi.iter_mut().for_each(|p| *p *= sign / norm);
            functions.push(phi);
        }
        Ok(Spectrum {
            values,
            functions,
            next_value,
        })
    }

    /// `P_t f` from the retained modes; fails when the discarded part,
    /// damped by `e^{−λ t}` for the first omitted `λ`, exceeds `tol`.
    pub fn semigroup_apply(&self, spec: &Spectrum, f: &[f64], t: f64, tol: f64) -> Result<Vec<f64>> {
        if !(t >= 0.0) {
            return Err(LineError::Domain(format!("flow time must be ≥ 0, got {t}")));
        }
        if t == 0.0 {
            return Ok(f.to_vec());
        }
        let coeffs: Vec<f64> = spec.functions.iter().map(|phi| self.inner(f, phi)).collect();
        let mut recon = vec![0.0; f.len()];
        let mut out = vec![0.0; f.len()];
        for ((c, phi), lam) in coeffs.iter().zip(&spec.functions).zip(&spec.values) {
            let damp = (-lam * t).exp();
            for i in 0..f.len() {
                recon[i] += c * phi[i];
                out[i] += damp * c * phi[i];
            }
        }
        let resid: Vec<f64> = f.iter().zip(&recon).map(|(a, b)| a - b).collect();
        let bound = (-spec.next_value * t).exp() * self.inner(&resid, &resid).sqrt();
        if bound > tol {
            return Err(LineError::IncreaseModes { residual: bound, tol });
        }
        Ok(out)
    }

    /// Centred first and second differences (one-sided at the ends).
    pub fn derivatives(&self, f: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let m = self.len();
        let h = self.h;
        let mut d1 = vec![0.0; m];
        let mut d2 = vec![0.0; m];
        for i in 1..m - 1 {
            d1[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
            d2[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) / (h * h);
        }
        d1[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
        d1[m - 1] = (3.0 * f[m - 1] - 4.0 * f[m - 2] + f[m - 3]) / (2.0 * h);
        d2[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / (h * h);
        d2[m - 1] = (2.0 * f[m - 1] - 5.0 * f[m - 2] + 4.0 * f[m - 3] - f[m - 4]) / (h * h);
        (d1, d2)
    }

    /// Point-wise snapshot; the curvature entry is `V″(x_i)`.
    pub fn state(&self, u: &[f64]) -> FlowState {
        let (du, d2u) = self.derivatives(u);
        FlowState {
            coord: self.x.clone(),
            weights: self.w.clone(),
            u: u.to_vec(),
            uc: u.iter().map(|v| 1.0 - v).collect(),
            du,
            d2u,
            tangential: vec![0.0; u.len()],
            tangential_mult: 0.0,
            curvature: self.x.iter().map(|&x| self.measure.potential.d2v(x)).collect(),
            err: u.iter().map(|v| 1e-13 * v.abs().max(1.0)).collect(),
        }
    }
}
