//! Triangular Bézier patches (rational and polynomial) and their evaluation.
//!
//! Control nets are stored as flat vectors in lexicographic order over
//! `Theta_n`. Evaluation uses the de Casteljau convex-combination scheme for
//! robustness near the triangle edges; the single-basis evaluator
//! [`bernstein`] uses the direct product formula.

use crate::error::{Error, Result};
use crate::index::{multinomial, theta_len, theta_position, MultiIndex};

/// Slack admitted by the domain checks, so grid points that land on the
/// hypotenuse after rounding are not rejected.
const DOMAIN_SLACK: f64 = 1e-9;

/// Checks that `x` lies in the standard triangle `T`.
pub fn check_domain(x: (f64, f64)) -> Result<()> {
    let (x1, x2) = x;
    if !(x1 >= -DOMAIN_SLACK && x2 >= -DOMAIN_SLACK && x1 + x2 <= 1.0 + DOMAIN_SLACK) {
        return Err(Error::InvalidInput(format!(
            "point ({x1}, {x2}) lies outside the standard triangle"
        )));
    }
    Ok(())
}

/// Bernstein basis polynomial `B^n_k(x) = (n ch k) x1^k1 x2^k2 (1-|x|)^(n-|k|)`.
pub fn bernstein(n: usize, k: MultiIndex, x: (f64, f64)) -> Result<f64> {
    if !k.in_theta(n) {
        return Err(Error::InvalidInput(format!(
            "index {k} outside Theta_{n}"
        )));
    }
    check_domain(x)?;
    let b3 = 1.0 - x.0 - x.1;
    Ok(multinomial(n, k) * x.0.powi(k.k1 as i32) * x.1.powi(k.k2 as i32)
        * b3.powi((n - k.total()) as i32))
}

/// One de Casteljau pass over a scalar net: degree `r` coefficients in,
/// degree `r-1` out (in place, the tail of the buffer is ignored afterwards).
fn de_casteljau_step(net: &mut [f64], r: usize, b: (f64, f64, f64)) {
    let lower = r - 1;
    for k1 in 0..=lower {
        for k2 in 0..=(lower - k1) {
            let k = MultiIndex::new(k1, k2);
            let v = b.0 * net[theta_position(r, MultiIndex::new(k1 + 1, k2))]
                + b.1 * net[theta_position(r, MultiIndex::new(k1, k2 + 1))]
                + b.2 * net[theta_position(r, k)];
            net[theta_position(lower, k)] = v;
        }
    }
}

/// Evaluates a scalar Bernstein form of degree `n` by de Casteljau.
pub(crate) fn eval_net(coeffs: &[f64], n: usize, x: (f64, f64)) -> f64 {
    debug_assert_eq!(coeffs.len(), theta_len(n));
    if n == 0 {
        return coeffs[0];
    }
    let b = (x.0, x.1, 1.0 - x.0 - x.1);
    let mut buf = coeffs.to_vec();
    for r in (1..=n).rev() {
        de_casteljau_step(&mut buf, r, b);
    }
    buf[0]
}

/// A degree-`n` rational triangular Bézier patch: control points in `R^D`
/// and positive weights, both over `Theta_n` in lexicographic order.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalPatch<const D: usize> {
    degree: usize,
    points: Vec<[f64; D]>,
    weights: Vec<f64>,
}

impl<const D: usize> RationalPatch<D> {
    pub fn new(degree: usize, points: Vec<[f64; D]>, weights: Vec<f64>) -> Result<Self> {
        let len = theta_len(degree);
        if points.len() != len {
            return Err(Error::InvalidInput(format!(
                "points: expected {len} entries for degree {degree}, got {}",
                points.len()
            )));
        }
        if weights.len() != len {
            return Err(Error::InvalidInput(format!(
                "weights: expected {len} entries for degree {degree}, got {}",
                weights.len()
            )));
        }
        for (i, &w) in weights.iter().enumerate() {
            if !(w > 0.0) || !w.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "weights[{i}]: must be a positive finite number, got {w}"
                )));
            }
        }
        Ok(Self { degree, points, weights })
    }

    /// Equal-weight wrapper around a polynomial net.
    pub fn from_polynomial(p: &PolynomialPatch<D>) -> Self {
        Self {
            degree: p.degree(),
            points: p.points().to_vec(),
            weights: vec![1.0; p.points().len()],
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn points(&self) -> &[[f64; D]] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn point(&self, k: MultiIndex) -> [f64; D] {
        self.points[theta_position(self.degree, k)]
    }

    pub fn weight(&self, k: MultiIndex) -> f64 {
        self.weights[theta_position(self.degree, k)]
    }

    /// Evaluates the patch at `x` in `T`. Numerator and denominator run
    /// through the same de Casteljau scheme; the denominator is positive by
    /// the weight invariant and the partition of unity.
    pub fn eval(&self, x: (f64, f64)) -> Result<[f64; D]> {
        check_domain(x)?;
        let denom = eval_net(&self.weights, self.degree, x);
        let mut out = [0.0; D];
        let mut component = vec![0.0; self.points.len()];
        for (d, slot) in out.iter_mut().enumerate() {
            for (i, p) in self.points.iter().enumerate() {
                component[i] = self.weights[i] * p[d];
            }
            *slot = eval_net(&component, self.degree, x) / denom;
        }
        Ok(out)
    }
}

/// A degree-`m` polynomial triangular Bézier patch over `Theta_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialPatch<const D: usize> {
    degree: usize,
    points: Vec<[f64; D]>,
}

impl<const D: usize> PolynomialPatch<D> {
    pub fn new(degree: usize, points: Vec<[f64; D]>) -> Result<Self> {
        let len = theta_len(degree);
        if points.len() != len {
            return Err(Error::InvalidInput(format!(
                "points: expected {len} entries for degree {degree}, got {}",
                points.len()
            )));
        }
        Ok(Self { degree, points })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn points(&self) -> &[[f64; D]] {
        &self.points
    }

    pub fn point(&self, k: MultiIndex) -> [f64; D] {
        self.points[theta_position(self.degree, k)]
    }

    pub fn eval(&self, x: (f64, f64)) -> Result<[f64; D]> {
        check_domain(x)?;
        let mut out = [0.0; D];
        let mut component = vec![0.0; self.points.len()];
        for (d, slot) in out.iter_mut().enumerate() {
            for (i, p) in self.points.iter().enumerate() {
                component[i] = p[d];
            }
            *slot = eval_net(&component, self.degree, x);
        }
        Ok(out)
    }

    /// Directional derivative along `dir = (d1, d2)` at `x`, from the
    /// control-net difference form of degree `m-1`.
    pub fn directional_derivative(&self, x: (f64, f64), dir: (f64, f64)) -> Result<[f64; D]> {
        check_domain(x)?;
        let m = self.degree;
        if m == 0 {
            return Ok([0.0; D]);
        }
        let mut out = [0.0; D];
        let mut diff = vec![0.0; theta_len(m - 1)];
        for (d, slot) in out.iter_mut().enumerate() {
            for k1 in 0..m {
                for k2 in 0..=(m - 1 - k1) {
                    let k = MultiIndex::new(k1, k2);
                    let base = self.points[theta_position(m, k)][d];
                    let d1 = self.points[theta_position(m, MultiIndex::new(k1 + 1, k2))][d] - base;
                    let d2 = self.points[theta_position(m, MultiIndex::new(k1, k2 + 1))][d] - base;
                    diff[theta_position(m - 1, k)] = dir.0 * d1 + dir.1 * d2;
                }
            }
            *slot = m as f64 * eval_net(&diff, m - 1, x);
        }
        Ok(out)
    }
}
