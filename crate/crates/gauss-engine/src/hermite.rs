//! Finite Hermite chaos expansions `f = Σ a_k h_k` with `h_k` orthonormal in `L²(γ₁)`.

use crate::error::{GaussError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct HermiteFunction {
    pub coeffs: Vec<f64>,
}

/// Values `h_0(x), …, h_k(x)`.
pub fn hermite_values(x: f64, k: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(k + 1);
    out.push(1.0);
    if k >= 1 {
        out.push(x);
    }
    for j in 1..k {
        let next = (x * out[j] - (j as f64).sqrt() * out[j - 1]) / ((j + 1) as f64).sqrt();
        out.push(next);
    }
    out
}

impl HermiteFunction {
    pub fn new(coeffs: Vec<f64>) -> Self {
        let coeffs = if coeffs.is_empty() { vec![0.0] } else { coeffs };
        Self { coeffs }
    }

    pub fn zero(degree: usize) -> Self {
        Self::new(vec![0.0; degree + 1])
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    /// The basis element `h_k`.
    pub fn basis(k: usize) -> Self {
        let mut c = vec![0.0; k + 1];
        c[k] = 1.0;
        Self::new(c)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: f64) -> f64 {
        let mut prev = 0.0;
        let mut cur = 1.0;
        let mut sum = self.coeffs[0];
        for (j, &a) in self.coeffs.iter().enumerate().skip(1) {
            let next = (x * cur - ((j - 1) as f64).sqrt() * prev) / (j as f64).sqrt();
            prev = cur;
            cur = next;
            sum += a * cur;
        }
        sum
    }

    /// `f′`: the degree-`(k−1)` coefficient is `√k·a_k`.
    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::constant(0.0);
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, a)| (k as f64).sqrt() * a)
                .collect(),
        )
    }

    /// `Lf = f″ − x f′`, i.e. `−k a_k` coefficient-wise.
    pub fn generator(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().map(|(k, a)| -(k as f64) * a).collect())
    }

    /// `‖f‖²_{L²(γ)} = Σ a_k²`.
    pub fn norm2(&self) -> f64 {
        self.coeffs.iter().map(|a| a * a).sum()
    }

    pub fn mean(&self) -> f64 {
        self.coeffs[0]
    }

    pub fn variance(&self) -> f64 {
        self.coeffs.iter().skip(1).map(|a| a * a).sum()
    }

    /// `∫Γ dγ = Σ k a_k²`.
    pub fn dirichlet(&self) -> f64 {
        self.coeffs.iter().enumerate().map(|(k, a)| k as f64 * a * a).sum()
    }

    /// Ornstein–Uhlenbeck flow `Q_t`: `a_k ↦ e^{−kt} a_k`.
    pub fn ou_flow(&self, t: f64) -> Result<Self> {
        if !(t >= 0.0) {
            return Err(GaussError::Domain(format!("flow time must be ≥ 0, got {t}")));
        }
        Ok(Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, a)| (-(k as f64) * t).exp() * a)
                .collect(),
        ))
    }

    /// The degree-`k` chaos component `a_k h_k`.
    pub fn project_chaos(&self, k: usize) -> Result<Self> {
        if k > self.degree() {
            return Err(GaussError::Domain(format!(
                "chaos degree {k} exceeds truncation {}",
                self.degree()
            )));
        }
        let mut c = vec![0.0; k + 1];
        c[k] = self.coeffs[k];
        Ok(Self::new(c))
    }

    /// `Π₁f = a₁ h₁`.
    pub fn project_linear(&self) -> Self {
        Self::new(vec![0.0, self.coeffs.get(1).copied().unwrap_or(0.0)])
    }

    pub fn sub(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            (0..len)
                .map(|k| self.coeffs.get(k).copied().unwrap_or(0.0) - other.coeffs.get(k).copied().unwrap_or(0.0))
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        self.sub(&other.scale(-1.0))
    }

    pub fn scale(&self, c: f64) -> Self {
        Self::new(self.coeffs.iter().map(|a| c * a).collect())
    }

    /// Zero-pads to degree `k` (never truncates).
    pub fn padded(&self, k: usize) -> Self {
        let mut c = self.coeffs.clone();
        if c.len() < k + 1 {
            c.resize(k + 1, 0.0);
        }
        Self::new(c)
    }
}
