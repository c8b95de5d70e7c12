//! Hermite transforms against Gauss–Hermite quadrature and the Γ-calculus of
//! the Ornstein–Uhlenbeck generator `L = d²/dx² − x d/dx`.

use profiles::quad::{gauss_hermite, Rule};
use profiles::FlowState;

use crate::error::{GaussError, Result};
use crate::hermite::{hermite_values, HermiteFunction};

pub const DEFAULT_DEGREE: usize = 64;
pub const DEFAULT_NODES: usize = 128;

#[derive(Debug, Clone)]
pub struct GaussEngine {
    pub k: usize,
    pub rule: Rule,
}

#[derive(Debug, Clone)]
pub enum TransformInput {
    /// Values at the engine's quadrature nodes.
    Values(Vec<f64>),
    Coeffs(HermiteFunction),
}

#[derive(Debug, Clone)]
pub enum TransformOutput {
    Function(HermiteFunction),
    Values(Vec<f64>),
}

/// `Γf = (f′)²`, `Γ₂f = (f″)² + (f′)²`, `Lf = f″ − x f′`, all exact in the basis.
#[derive(Debug, Clone)]
pub struct GammaCalculus {
    pub gamma: HermiteFunction,
    pub gamma2: HermiteFunction,
    pub generator: HermiteFunction,
}

impl Default for GaussEngine {
    fn default() -> Self {
        Self::new(DEFAULT_DEGREE, DEFAULT_NODES).expect("default rule is valid")
    }
}

impl GaussEngine {
    pub fn new(k: usize, m: usize) -> Result<Self> {
        if m < k + 1 {
            return Err(GaussError::Aliasing { nodes: m, degree: k });
        }
        Ok(Self {
            k,
            rule: gauss_hermite(m)?,
        })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.rule.nodes
    }

    pub fn hermite_transform(&self, input: TransformInput) -> Result<TransformOutput> {
        match input {
            TransformInput::Values(v) => self.analyze(&v).map(TransformOutput::Function),
            TransformInput::Coeffs(f) => self.synthesize(&f).map(TransformOutput::Values),
        }
    }

    /// Coefficients `a_k = Σ w_i f(x_i) h_k(x_i)` for `k ≤ K`.
    pub fn analyze(&self, values: &[f64]) -> Result<HermiteFunction> {
        if values.len() != self.rule.len() {
            return Err(GaussError::Domain(format!(
                "expected {} nodal values, got {}",
                self.rule.len(),
                values.len()
            )));
        }
        Ok(analyze_with(&self.rule, values, self.k))
    }

    pub fn analyze_fn(&self, f: impl Fn(f64) -> f64) -> HermiteFunction {
        let values: Vec<f64> = self.rule.nodes.iter().map(|&x| f(x)).collect();
        analyze_with(&self.rule, &values, self.k)
    }

    pub fn synthesize(&self, f: &HermiteFunction) -> Result<Vec<f64>> {
        if f.degree() + 1 > self.rule.len() {
            return Err(GaussError::Aliasing {
                nodes: self.rule.len(),
                degree: f.degree(),
            });
        }
        Ok(self.rule.nodes.iter().map(|&x| f.eval(x)).collect())
    }

    /// `Γ`, `Γ₂` and `L` of `f`. Products are formed in the degree-extended
    /// space with a rule exact for them.
    pub fn gamma_calculus(&self, f: &HermiteFunction) -> Result<GammaCalculus> {
        let d1 = f.derivative();
        let d2 = d1.derivative();
        let gamma = product(&d1, &d1)?;
        let hess = product(&d2, &d2)?;
        Ok(GammaCalculus {
            gamma2: hess.add(&gamma),
            gamma,
            generator: f.generator(),
        })
    }

    /// Point-wise snapshot of a smooth `f` on the given grid.
    pub fn flow_state(&self, f: &HermiteFunction, coord: &[f64], weights: &[f64]) -> FlowState {
        let d1 = f.derivative();
        let d2 = d1.derivative();
        let u: Vec<f64> = coord.iter().map(|&x| f.eval(x)).collect();
        FlowState {
            coord: coord.to_vec(),
            weights: weights.to_vec(),
            uc: u.iter().map(|v| 1.0 - v).collect(),
            du: coord.iter().map(|&x| d1.eval(x)).collect(),
            d2u: coord.iter().map(|&x| d2.eval(x)).collect(),
            tangential: vec![0.0; u.len()],
            tangential_mult: 0.0,
            curvature: vec![1.0; u.len()],
            err: u.iter().map(|v| 1e-15 * v.abs().max(1.0)).collect(),
            u,
        }
    }
}

fn analyze_with(rule: &Rule, values: &[f64], k: usize) -> HermiteFunction {
    let mut coeffs = vec![0.0; k + 1];
    for ((&x, &w), &v) in rule.nodes.iter().zip(&rule.weights).zip(values) {
        let h = hermite_values(x, k);
        for (c, hk) in coeffs.iter_mut().zip(&h) {
            *c += w * v * hk;
        }
    }
    HermiteFunction::new(coeffs)
}

/// Exact product `fg` of degree `deg f + deg g`.
pub fn product(f: &HermiteFunction, g: &HermiteFunction) -> Result<HermiteFunction> {
    let deg = f.degree() + g.degree();
    let rule = gauss_hermite(deg + 1)?;
    let values: Vec<f64> = rule.nodes.iter().map(|&x| f.eval(x) * g.eval(x)).collect();
    Ok(analyze_with(&rule, &values, deg))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn too_few_nodes_is_aliasing() {
        assert!(matches!(GaussEngine::new(10, 8), Err(GaussError::Aliasing { .. })));
    }

    #[test]
    fn square_of_h1() {
        let p = product(&HermiteFunction::basis(1), &HermiteFunction::basis(1)).unwrap();
        assert!((p.coeffs[0] - 1.0).abs() < 1e-14);
        assert!((p.coeffs[2] - 2f64.sqrt()).abs() < 1e-14);
    }
}
