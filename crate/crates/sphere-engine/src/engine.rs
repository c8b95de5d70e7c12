//! Gegenbauer transforms on Gauss–Gegenbauer nodes and the zonal Γ-calculus.

use profiles::quad::{gauss_gegenbauer, Rule};
use profiles::SphereGeometry;

use crate::bands::{BandSet, DEFAULT_K_LIMIT};
use crate::basis::GegenbauerBasis;
use crate::error::{Result, SphereError};
use crate::grid::arc_jet;
use crate::zonal::ZonalFunction;

#[derive(Debug, Clone)]
pub struct SphereEngine {
    pub geom: SphereGeometry,
    pub basis: GegenbauerBasis,
    /// Transform truncation degree.
    pub k: usize,
    /// Gauss rule in `x = cos θ`.
    pub rule: Rule,
}

#[derive(Debug, Clone)]
pub enum ZonalInput {
    Values(Vec<f64>),
    Coeffs(ZonalFunction),
}

#[derive(Debug, Clone)]
pub enum ZonalOutput {
    Function(ZonalFunction),
    Values(Vec<f64>),
}

/// Nodal `Γf`, `Γ₂f`, `Δf` and `(Γ₂−Γ)f` at the engine's quadrature nodes.
#[derive(Debug, Clone)]
pub struct ZonalGamma {
    pub theta: Vec<f64>,
    pub weights: Vec<f64>,
    pub gamma: Vec<f64>,
    pub gamma2: Vec<f64>,
    pub gamma2_minus_gamma: Vec<f64>,
    pub laplacian: Vec<f64>,
}

impl ZonalGamma {
    fn integral(&self, v: &[f64]) -> f64 {
        self.weights.iter().zip(v).map(|(w, x)| w * x).sum()
    }

    pub fn integral_gamma(&self) -> f64 {
        self.integral(&self.gamma)
    }

    pub fn integral_gamma2(&self) -> f64 {
        self.integral(&self.gamma2)
    }

    pub fn integral_gamma2_minus_gamma(&self) -> f64 {
        self.integral(&self.gamma2_minus_gamma)
    }

    pub fn integral_laplacian_sq(&self) -> f64 {
        self.weights.iter().zip(&self.laplacian).map(|(w, l)| w * l * l).sum()
    }
}

impl SphereEngine {
    pub fn new(n: usize, k: usize, m: usize) -> Result<Self> {
        if m < k + 1 {
            return Err(SphereError::Aliasing { nodes: m, degree: k });
        }
        let geom = SphereGeometry::new(n)?;
        let basis = GegenbauerBasis::new(n, k.max(DEFAULT_K_LIMIT) + 2);
        let rule = gauss_gegenbauer(basis.alpha, m)?;
        Ok(Self { geom, basis, k, rule })
    }

    /// `K = 64` on 256 nodes.
    pub fn with_dimension(n: usize) -> Result<Self> {
        Self::new(n, 64, 256)
    }

    pub fn n(&self) -> usize {
        self.geom.n
    }

    pub fn zonal_transform(&self, input: ZonalInput) -> Result<ZonalOutput> {
        match input {
            ZonalInput::Values(v) => self.analyze(&v).map(ZonalOutput::Function),
            ZonalInput::Coeffs(f) => self.synthesize(&f).map(ZonalOutput::Values),
        }
    }

    pub fn analyze(&self, values: &[f64]) -> Result<ZonalFunction> {
        if values.len() != self.rule.len() {
            return Err(SphereError::Domain(format!(
                "expected {} nodal values, got {}",
                self.rule.len(),
                values.len()
            )));
        }
        let mut b = vec![0.0; self.k + 1];
        for ((&x, &w), &v) in self.rule.nodes.iter().zip(&self.rule.weights).zip(values) {
            for (c, p) in b.iter_mut().zip(self.basis.values(x, self.k)) {
                *c += w * v * p;
            }
        }
        Ok(ZonalFunction::new(self.n(), b))
    }

    /// Analyze a function of the colatitude.
    pub fn analyze_fn(&self, f: impl Fn(f64) -> f64) -> ZonalFunction {
        let v: Vec<f64> = self.rule.nodes.iter().map(|&x| f(x.clamp(-1.0, 1.0).acos())).collect();
        self.analyze(&v).expect("node count matches")
    }

    pub fn synthesize(&self, f: &ZonalFunction) -> Result<Vec<f64>> {
        if f.degree() + 1 > self.rule.len() {
            return Err(SphereError::Aliasing {
                nodes: self.rule.len(),
                degree: f.degree(),
            });
        }
        Ok(self.rule.nodes.iter().map(|&x| f.eval(&self.basis, x)).collect())
    }

    /// Largest deviation of the quadrature Gram matrix of `p_0..p_K` from the identity.
    pub fn gram_error(&self) -> f64 {
        let k = self.k;
        let mut g = vec![0.0; (k + 1) * (k + 1)];
        for (&x, &w) in self.rule.nodes.iter().zip(&self.rule.weights) {
            let p = self.basis.values(x, k);
            for i in 0..=k {
                for j in 0..=i {
                    g[i * (k + 1) + j] += w * p[i] * p[j];
                }
            }
        }
        let mut worst = 0.0f64;
        for i in 0..=k {
            for j in 0..=i {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g[i * (k + 1) + j] - target).abs());
            }
        }
        worst
    }

    pub fn heat_flow(&self, f: &ZonalFunction, t: f64) -> Result<ZonalFunction> {
        f.heat_flow(t)
    }

    /// Nodal Γ-calculus; products are exact on the rule when `2·deg f < 2m`.
    pub fn gamma_calculus_zonal(&self, f: &ZonalFunction) -> Result<ZonalGamma> {
        if f.degree() + 1 > self.rule.len() {
            return Err(SphereError::Aliasing {
                nodes: self.rule.len(),
                degree: f.degree(),
            });
        }
        let nm1 = self.geom.nf() - 1.0;
        let mut out = ZonalGamma {
            theta: Vec::new(),
            weights: self.rule.weights.clone(),
            gamma: Vec::new(),
            gamma2: Vec::new(),
            gamma2_minus_gamma: Vec::new(),
            laplacian: Vec::new(),
        };
        for &x in &self.rule.nodes {
            let theta = x.clamp(-1.0, 1.0).acos();
            let j = arc_jet(&self.geom, &self.basis, f, theta);
            let g = j.us * j.us;
            let hess = j.uss * j.uss + nm1 * j.tangential * j.tangential;
            let lap = j.uss + nm1 * j.tangential;
            if !(g.is_finite() && hess.is_finite() && lap.is_finite()) {
                return Err(SphereError::Numerical(format!("non-finite Γ data at θ = {theta}")));
            }
            out.theta.push(theta);
            out.gamma.push(g);
            out.gamma2_minus_gamma.push(hess);
            out.gamma2.push(hess + g);
            out.laplacian.push(lap);
        }
        Ok(out)
    }

    /// Flowed indicator of a band set (adaptive truncation).
    pub fn flow_set(&self, set: &BandSet, t: f64) -> Result<ZonalFunction> {
        set.flowed(&self.basis, t, self.basis.k_max() - 2)
    }
}
