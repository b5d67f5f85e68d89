//! Gauss-Jacobi rules with the endpoint singularities absorbed into the
//! weights, and the tensorized triangle rule built from them.
//!
//! Nodes are the roots of the Jacobi polynomial, located by a sign-change
//! scan plus bisection and polished by Newton steps on the three-term
//! recurrence. Q is capped at 128; these rules back test oracles, not the
//! production quadrature.

use std::f64::consts::PI;

use tribezier::AlphaWeights;

/// Cap on the rule order.
pub const MAX_ORDER: usize = 128;

// Lanczos ln-gamma (g = 7, 9 terms; the standard public-domain constants).
// Pinned against externally computed reference values in the tests below,
// so the Beta-moment cross checks do not hinge on a single implementation
// being right by accident.
fn ln_gamma(x: f64) -> f64 {
    assert!(x > 0.0);
    if x < 0.5 {
        return (PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    const C: [f64; 9] = [
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    ];
    let z = x - 1.0;
    let mut ser = C[0];
    for (i, c) in C.iter().enumerate().skip(1) {
        ser += c / (z + i as f64);
    }
    let t = z + 7.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + ser.ln()
}

/// Jacobi polynomial value and derivative at `x` on [-1, 1] via the
/// three-term recurrence and the shifted-parameter derivative identity.
fn jacobi_poly(q: usize, a: f64, b: f64, x: f64) -> f64 {
    if q == 0 {
        return 1.0;
    }
    let mut p_prev = 1.0;
    let mut p = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * x;
    for n in 2..=q {
        let nf = n as f64;
        let c1 = 2.0 * nf * (nf + a + b) * (2.0 * nf + a + b - 2.0);
        let c2 = (2.0 * nf + a + b - 1.0)
            * ((2.0 * nf + a + b) * (2.0 * nf + a + b - 2.0) * x + a * a - b * b);
        let c3 = 2.0 * (nf + a - 1.0) * (nf + b - 1.0) * (2.0 * nf + a + b);
        let next = (c2 * p - c3 * p_prev) / c1;
        p_prev = p;
        p = next;
    }
    p
}

fn jacobi_deriv(q: usize, a: f64, b: f64, x: f64) -> f64 {
    if q == 0 {
        return 0.0;
    }
    0.5 * (q as f64 + a + b + 1.0) * jacobi_poly(q - 1, a + 1.0, b + 1.0, x)
}

/// A quadrature rule on [0,1] for integrands against the absorbed weight
/// `(1-u)^a u^b`: `integral = sum_i w_i f(u_i)`.
#[derive(Debug, Clone)]
pub struct GaussJacobiRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussJacobiRule {
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&u, &w)| w * f(u))
            .sum()
    }
}

/// Builds the order-`q` rule for the weight `(1-u)^a u^b` on [0,1],
/// exact for polynomial integrands of degree <= 2q - 1.
pub fn gauss_jacobi_rule(q: usize, a: f64, b: f64) -> GaussJacobiRule {
    assert!(q >= 1 && q <= MAX_ORDER, "order {q} outside 1..={MAX_ORDER}");
    assert!(a > -1.0 && b > -1.0);

    // Bracket the q roots of P_q^{(a,b)} on (-1,1) by a dense cosine-spaced
    // scan, then bisect and polish with Newton.
    let samples = (16 * q).max(256);
    let grid: Vec<f64> = (0..=samples)
        .map(|i| -(PI * i as f64 / samples as f64).cos())
        .collect();
    let mut roots = Vec::with_capacity(q);
    let mut prev_x = grid[0];
    let mut prev_v = jacobi_poly(q, a, b, prev_x);
    for &x in &grid[1..] {
        let v = jacobi_poly(q, a, b, x);
        if prev_v == 0.0 {
            roots.push(prev_x);
        } else if prev_v * v < 0.0 {
            let (mut lo, mut hi) = (prev_x, x);
            let (mut flo, _) = (prev_v, v);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                let fm = jacobi_poly(q, a, b, mid);
                if flo * fm <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                    flo = fm;
                }
            }
            let mut root = 0.5 * (lo + hi);
            for _ in 0..3 {
                let f = jacobi_poly(q, a, b, root);
                let df = jacobi_deriv(q, a, b, root);
                if df != 0.0 {
                    root -= f / df;
                }
            }
            roots.push(root);
        }
        prev_x = x;
        prev_v = v;
    }
    assert_eq!(roots.len(), q, "root scan lost a Jacobi node (q = {q})");

    // w_i = C / ((1 - x_i^2) P'_q(x_i)^2) on [-1,1] with
    // C = 2^(a+b+1) G(q+a+1) G(q+b+1) / (q! G(q+a+b+1)).
    let qf = q as f64;
    let ln_c = (a + b + 1.0) * 2.0f64.ln() + ln_gamma(qf + a + 1.0) + ln_gamma(qf + b + 1.0)
        - ln_gamma(qf + 1.0)
        - ln_gamma(qf + a + b + 1.0);
    let c = ln_c.exp();
    // Map to [0,1]: u = (1+x)/2 absorbs 2^-(a+b+1) into the weights.
    let scale = 0.5f64.powf(a + b + 1.0);
    let mut nodes = Vec::with_capacity(q);
    let mut weights = Vec::with_capacity(q);
    for &x in &roots {
        let dp = jacobi_deriv(q, a, b, x);
        nodes.push(0.5 * (1.0 + x));
        weights.push(scale * c / ((1.0 - x * x) * dp * dp));
    }
    GaussJacobiRule { nodes, weights }
}

/// Tensorized rule for `integral_T w_alpha(x) F(x) dx` through the
/// substitution `x = (s, (1-s) t)`: an s-rule with weight
/// `(1-s)^(a2+a3+1) s^(a1)` and a t-rule with weight `(1-t)^(a3) t^(a2)`,
/// the normalization constant included.
#[derive(Debug, Clone)]
pub struct DenseQuadratureRule {
    alpha: AlphaWeights,
    s_rule: GaussJacobiRule,
    t_rule: GaussJacobiRule,
    norm: f64,
}

impl DenseQuadratureRule {
    pub fn new(order: usize, alpha: AlphaWeights) -> Self {
        let s_rule = gauss_jacobi_rule(order, alpha.a2 + alpha.a3 + 1.0, alpha.a1);
        let t_rule = gauss_jacobi_rule(order, alpha.a3, alpha.a2);
        let norm = (ln_gamma(alpha.total() + 3.0)
            - ln_gamma(alpha.a1 + 1.0)
            - ln_gamma(alpha.a2 + 1.0)
            - ln_gamma(alpha.a3 + 1.0))
        .exp();
        Self { alpha, s_rule, t_rule, norm }
    }

    pub fn alpha(&self) -> AlphaWeights {
        self.alpha
    }

    /// `integral_T w_alpha(x) f(x) dx` for `f` smooth (the weight
    /// singularities are absorbed by the rules).
    pub fn integrate<F: Fn(f64, f64) -> f64>(&self, f: F) -> f64 {
        let mut acc = 0.0;
        for (&s, &ws) in self.s_rule.nodes.iter().zip(&self.s_rule.weights) {
            let mut inner = 0.0;
            for (&t, &wt) in self.t_rule.nodes.iter().zip(&self.t_rule.weights) {
                inner += wt * f(s, (1.0 - s) * t);
            }
            acc += ws * inner;
        }
        self.norm * acc
    }

    /// The tensor nodes as `(x1, x2, combined weight)` triples, the
    /// normalization folded in; lets callers cache integrand values.
    pub fn points(&self) -> Vec<(f64, f64, f64)> {
        let mut out = Vec::with_capacity(self.s_rule.nodes.len() * self.t_rule.nodes.len());
        for (&s, &ws) in self.s_rule.nodes.iter().zip(&self.s_rule.weights) {
            for (&t, &wt) in self.t_rule.nodes.iter().zip(&self.t_rule.weights) {
                out.push((s, (1.0 - s) * t, self.norm * ws * wt));
            }
        }
        out
    }
}
