//! Orthonormal zonal eigenbasis: Gegenbauer polynomials in `x = cos θ`,
//! orthonormal for the probability measure `∝ (1−x²)^{(n−2)/2} dx`.

use profiles::quad::gegenbauer_beta;

#[derive(Debug, Clone)]
pub struct GegenbauerBasis {
    pub n: usize,
    pub alpha: f64,
    beta: Vec<f64>,
}

/// Values and first two `x`-derivatives of `p_0..p_K` at one point.
#[derive(Debug, Clone)]
pub struct BasisJet {
    pub p: Vec<f64>,
    pub dp: Vec<f64>,
    pub d2p: Vec<f64>,
}

impl GegenbauerBasis {
    pub fn new(n: usize, k_max: usize) -> Self {
        let alpha = 0.5 * (n as f64 - 2.0);
        Self {
            n,
            alpha,
            beta: gegenbauer_beta(alpha, k_max + 1),
        }
    }

    pub fn k_max(&self) -> usize {
        self.beta.len() - 2
    }

    fn ensure(&mut self, k: usize) {
        if k > self.k_max() {
            self.beta = gegenbauer_beta(self.alpha, k + 1);
        }
    }

    /// Grows the recurrence table to degree `k`.
    pub fn with_degree(mut self, k: usize) -> Self {
        self.ensure(k);
        self
    }

    pub fn values(&self, x: f64, k: usize) -> Vec<f64> {
        assert!(k <= self.k_max(), "basis built up to {}, asked {k}", self.k_max());
        let mut p = Vec::with_capacity(k + 1);
        p.push(1.0);
        if k >= 1 {
            p.push(x / self.beta[1]);
        }
        for j in 1..k {
            p.push((x * p[j] - self.beta[j] * p[j - 1]) / self.beta[j + 1]);
        }
        p
    }

    /// Differentiated recurrence: `p_j + x p_j′ = β_{j+1} p′_{j+1} + β_j p′_{j−1}`.
    pub fn jet(&self, x: f64, k: usize) -> BasisJet {
        let p = self.values(x, k);
        let mut dp = vec![0.0; k + 1];
        let mut d2p = vec![0.0; k + 1];
        if k >= 1 {
            dp[1] = 1.0 / self.beta[1];
        }
        for j in 1..k {
            dp[j + 1] = (p[j] + x * dp[j] - self.beta[j] * dp[j - 1]) / self.beta[j + 1];
            d2p[j + 1] = (2.0 * dp[j] + x * d2p[j] - self.beta[j] * d2p[j - 1]) / self.beta[j + 1];
        }
        BasisJet { p, dp, d2p }
    }

    /// `p_k′` only (cheaper than the full jet).
    pub fn derivatives(&self, x: f64, k: usize) -> Vec<f64> {
        self.jet(x, k).dp
    }
}
