//! Gauss rules for symmetric weights and adaptive Gauss–Legendre integration.
//!
//! Nodes come from the Jacobi matrix (Golub–Welsch) through the Sturm
//! bisection solver, are polished by Newton steps on the orthonormal
//! polynomial, and weights use the Christoffel formula
//! `w_i = 1 / Σ_{k<m} p_k(x_i)²`, which keeps tiny tail weights accurate.

use std::sync::OnceLock;

use crate::error::{ProfileError, Result};
use crate::tridiag::SymTridiagonal;

/// Quadrature rule with probability-normalized weights.
#[derive(Debug, Clone)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// Orthonormal values `p_0..p_{m-1}` and `p_m` at `x` for a symmetric
/// three-term recurrence `x p_k = β_{k+1} p_{k+1} + β_k p_{k−1}`.
fn recurrence_values(beta: &[f64], x: f64, m: usize) -> (f64, f64, f64) {
    // Returns (Σ_{k<m} p_k², p_m, p_m').
    let mut p_prev = 0.0;
    let mut p = 1.0;
    let mut d_prev = 0.0;
    let mut d = 0.0;
    let mut sum = 0.0;
    for k in 0..m {
        sum += p * p;
        let b_next = beta[k + 1];
        let b_k = beta[k];
        let p_next = (x * p - b_k * p_prev) / b_next;
        let d_next = (p + x * d - b_k * d_prev) / b_next;
        p_prev = p;
        p = p_next;
        d_prev = d;
        d = d_next;
    }
    (sum, p, d)
}

/// Gauss rule for the symmetric recurrence with coefficients `beta[1..=m]`
/// (`beta[0]` is ignored).
pub fn symmetric_rule(beta: &[f64], m: usize) -> Result<Rule> {
    if m == 0 || beta.len() < m + 1 {
        return Err(ProfileError::Domain(format!(
            "need {} recurrence coefficients for {m} nodes",
            m + 1
        )));
    }
    let jacobi = SymTridiagonal::new(vec![0.0; m], beta[1..m].to_vec())?;
    let mut nodes = jacobi.eigenvalues();
    let mut weights = Vec::with_capacity(m);
    for x in nodes.iter_mut() {
        for _ in 0..3 {
            let (_, p, d) = recurrence_values(beta, *x, m);
            if d == 0.0 || !d.is_finite() {
                break;
            }
            let step = p / d;
            *x -= step;
            if step.abs() < 1e-17 {
                break;
            }
        }
        let (sum, _, _) = recurrence_values(beta, *x, m);
        weights.push(1.0 / sum);
    }
    // Symmetrize to remove round-off asymmetry.
    for i in 0..m / 2 {
        let j = m - 1 - i;
        let x = 0.5 * (nodes[j] - nodes[i]);
        let w = 0.5 * (weights[i] + weights[j]);
        nodes[i] = -x;
        nodes[j] = x;
        weights[i] = w;
        weights[j] = w;
    }
    if m % 2 == 1 {
        nodes[m / 2] = 0.0;
    }
    let total: f64 = weights.iter().sum();
    for w in weights.iter_mut() {
        *w /= total;
    }
    Ok(Rule { nodes, weights })
}

/// Recurrence coefficients of the orthonormal Hermite polynomials (weight γ).
pub fn hermite_beta(m: usize) -> Vec<f64> {
    (0..=m).map(|k| (k as f64).sqrt()).collect()
}

/// Recurrence coefficients for the weight `(1−x²)^α` on `[−1,1]`.
pub fn gegenbauer_beta(alpha: f64, m: usize) -> Vec<f64> {
    (0..=m)
        .map(|k| {
            if k == 0 {
                0.0
            } else {
                let k = k as f64;
                let a2 = 2.0 * alpha;
                (k * (k + a2) / ((2.0 * k + a2 - 1.0) * (2.0 * k + a2 + 1.0))).sqrt()
            }
        })
        .collect()
}

/// Probabilists' Gauss–Hermite rule (weights sum to one).
pub fn gauss_hermite(m: usize) -> Result<Rule> {
    symmetric_rule(&hermite_beta(m), m)
}

/// Gauss rule for the probability measure ∝ `(1−x²)^α` on `[−1,1]`.
pub fn gauss_gegenbauer(alpha: f64, m: usize) -> Result<Rule> {
    if alpha <= -1.0 {
        return Err(ProfileError::Domain(format!("alpha must exceed −1, got {alpha}")));
    }
    symmetric_rule(&gegenbauer_beta(alpha, m), m)
}

/// Gauss–Legendre rule on `[−1,1]` with weights summing to 2.
pub fn gauss_legendre(m: usize) -> Result<Rule> {
    let mut rule = gauss_gegenbauer(0.0, m)?;
    for w in rule.weights.iter_mut() {
        *w *= 2.0;
    }
    Ok(rule)
}

fn gl_cached() -> &'static Rule {
    static RULE: OnceLock<Rule> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(12).expect("12-point Gauss–Legendre rule"))
}

fn gl_panel(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let rule = gl_cached();
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    h * rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&x, &w)| w * f(c + h * x))
        .sum::<f64>()
}

/// Adaptive Gauss–Legendre integration of a smooth integrand.
///
/// A panel is accepted once halving changes it by less than `rel_tol` of its
/// own value, of the running global estimate scaled by the panel width, or
/// of the round-off floor.
pub fn integrate_adaptive(f: impl Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> f64 {
    struct Ctx<'a, F: Fn(f64) -> f64> {
        f: &'a F,
        rel_tol: f64,
        global: f64,
        width: f64,
    }
    fn recurse<F: Fn(f64) -> f64>(ctx: &Ctx<'_, F>, a: f64, b: f64, whole: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let left = gl_panel(ctx.f, a, m);
        let right = gl_panel(ctx.f, m, b);
        let both = left + right;
        let err = (both - whole).abs();
        let local = ctx.rel_tol.max(64.0 * f64::EPSILON) * both.abs();
        let share = ctx.rel_tol * ctx.global * (b - a) / ctx.width;
        if depth >= 40 || err <= local.max(share) || m <= a || m >= b {
            return both;
        }
        recurse(ctx, a, m, left, depth + 1) + recurse(ctx, m, b, right, depth + 1)
    }
    if a == b {
        return 0.0;
    }
    // A coarse composite pass gives a global scale for the tolerance.
    let coarse: f64 = (0..8)
        .map(|i| {
            let lo = a + (b - a) * i as f64 / 8.0;
            let hi = a + (b - a) * (i + 1) as f64 / 8.0;
            gl_panel(&f, lo, hi)
        })
        .sum();
    let ctx = Ctx {
        f: &f,
        rel_tol,
        global: coarse.abs(),
        width: (b - a).abs(),
    };
    let whole = gl_panel(&f, a, b);
    recurse(&ctx, a, b, whole, 0)
}

/// Composite Gauss–Legendre nodes and weights (for `dx`) on `[a,b]`.
pub fn composite_legendre(a: f64, b: f64, panels: usize, order: usize) -> Result<Rule> {
    let base = gauss_legendre(order)?;
    let h = (b - a) / panels as f64;
    let mut nodes = Vec::with_capacity(panels * order);
    let mut weights = Vec::with_capacity(panels * order);
    for p in 0..panels {
        let c = a + (p as f64 + 0.5) * h;
        for (&x, &w) in base.nodes.iter().zip(&base.weights) {
            nodes.push(c + 0.5 * h * x);
            weights.push(0.5 * h * w);
        }
    }
    Ok(Rule { nodes, weights })
}
