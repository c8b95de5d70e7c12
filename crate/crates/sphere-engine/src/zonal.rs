//! Zonal functions as coefficients in the orthonormal Gegenbauer basis.

use crate::basis::GegenbauerBasis;
use crate::error::{Result, SphereError};

/// `λ_k = k(n+k−1)/(n−1)`.
pub fn eigenvalue(n: usize, k: usize) -> f64 {
    let (n, k) = (n as f64, k as f64);
    k * (n + k - 1.0) / (n - 1.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZonalFunction {
    pub n: usize,
    pub coeffs: Vec<f64>,
}

/// `F(x)`, `F′(x)`, `F″(x)` in `x = cos θ`, plus a round-off estimate for `F`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZonalJet {
    pub f: f64,
    pub df: f64,
    pub d2f: f64,
    pub err: f64,
}

impl ZonalFunction {
    pub fn new(n: usize, coeffs: Vec<f64>) -> Self {
        let coeffs = if coeffs.is_empty() { vec![0.0] } else { coeffs };
        Self { n, coeffs }
    }

    pub fn constant(n: usize, c: f64) -> Self {
        Self::new(n, vec![c])
    }

    pub fn basis(n: usize, k: usize) -> Self {
        let mut c = vec![0.0; k + 1];
        c[k] = 1.0;
        Self::new(n, c)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn mean(&self) -> f64 {
        self.coeffs[0]
    }

    pub fn norm2(&self) -> f64 {
        self.coeffs.iter().map(|b| b * b).sum()
    }

    pub fn eigenvalue(&self, k: usize) -> f64 {
        eigenvalue(self.n, k)
    }

    fn spectral_sum(&self, weight: impl Fn(f64) -> f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, b)| weight(self.eigenvalue(k)) * b * b)
            .sum()
    }

    /// `∫Γ dμ = Σ λ_k b_k²`.
    pub fn dirichlet(&self) -> f64 {
        self.spectral_sum(|l| l)
    }

    /// `∫(Δf)² dμ = Σ λ_k² b_k²`.
    pub fn laplacian_norm2(&self) -> f64 {
        self.spectral_sum(|l| l * l)
    }

    /// `∫(Γ₂ − Γ) dμ = Σ (λ_k² − λ_k) b_k²`.
    pub fn gamma2_minus_gamma(&self) -> f64 {
        self.spectral_sum(|l| l * l - l)
    }

    /// `‖f + Δf‖² = Σ (λ_k − 1)² b_k²`.
    pub fn poincare2_rhs(&self) -> f64 {
        self.spectral_sum(|l| (l - 1.0) * (l - 1.0))
    }

    /// `e^{tΔ}`: `b_k ↦ e^{−λ_k t} b_k`.
    pub fn heat_flow(&self, t: f64) -> Result<Self> {
        if !(t >= 0.0) {
            return Err(SphereError::Domain(format!("flow time must be ≥ 0, got {t}")));
        }
        Ok(Self::new(
            self.n,
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, b)| (-self.eigenvalue(k) * t).exp() * b)
                .collect(),
        ))
    }

    /// Degree-1 component only.
    pub fn project_linear(&self) -> Self {
        Self::new(self.n, vec![0.0, self.coeffs.get(1).copied().unwrap_or(0.0)])
    }

    pub fn sub(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let get = |c: &[f64], k: usize| c.get(k).copied().unwrap_or(0.0);
        Self::new(
            self.n,
            (0..len).map(|k| get(&self.coeffs, k) - get(&other.coeffs, k)).collect(),
        )
    }

    pub fn eval(&self, basis: &GegenbauerBasis, x: f64) -> f64 {
        basis
            .values(x, self.degree())
            .iter()
            .zip(&self.coeffs)
            .map(|(p, b)| p * b)
            .sum()
    }

    /// Values and `x`-derivatives with a round-off estimate for the sum.
    pub fn jet(&self, basis: &GegenbauerBasis, x: f64) -> ZonalJet {
        let k = self.degree();
        let j = basis.jet(x, k);
        let mut out = ZonalJet {
            f: 0.0,
            df: 0.0,
            d2f: 0.0,
            err: 0.0,
        };
        let mut abs_sum = 0.0;
        for (i, b) in self.coeffs.iter().enumerate() {
            let term = b * j.p[i];
            out.f += term;
            abs_sum += term.abs();
            out.df += b * j.dp[i];
            out.d2f += b * j.d2p[i];
        }
        out.err = 64.0 * f64::EPSILON * abs_sum;
        out
    }
}
