//! Adaptive two-level Chebyshev quadrature.
//!
//! The main entry point, [`integral_collection`], computes every weighted
//! integral of `B^{n+m}_j / omega` over the triangle for `j` in
//! `Omega^c_{n+m}` in one shared pass: the substitution `x = (s, (1-s) t)`
//! turns each integral into an iterated Jacobi-weighted integral of
//! `1/omega*(s, t)`, whose Chebyshev expansions depend on the node only,
//! not on `j`. Phase I expands `s -> 1/omega*(s, t_k)` adaptively per outer
//! node; Phase II expands the per-`j1` outer integrand over `t`, doubling
//! the outer node set (and re-running Phase I at the new odd nodes) until
//! the trailing-coefficient test passes.
//!
//! [`weighted_integral`] applies the same machinery to an arbitrary smooth
//! integrand; it backs the error metrics and the self test.

use crate::chebyshev::{cheb_interpolate, chebyshev_nodes, jacobi_cheb_integral, ChebyshevSeries};
use crate::error::{Error, Result};
use crate::index::{
    multinomial, omega, omega_position, theta_len, theta_position, ConstraintVector, MultiIndex,
};
use crate::jacobi::{normalization_constant, AlphaWeights};

/// Controls for the adaptive quadrature.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureConfig {
    /// Precision target of the stop rule.
    pub epsilon: f64,
    /// Initial outer interpolation degree `M*`; a power of two >= 8.
    pub initial_outer: usize,
    /// Initial inner interpolation degree `M_k*`; a power of two >= 8.
    pub initial_inner: usize,
    /// Hard cap on either degree; exceeding it reports divergence.
    pub size_cap: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            epsilon: 5e-16,
            initial_outer: 32,
            initial_inner: 32,
            size_cap: 1 << 20,
        }
    }
}

impl QuadratureConfig {
    pub fn with_epsilon(epsilon: f64) -> Self {
        Self { epsilon, ..Self::default() }
    }

    fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0) || !self.epsilon.is_finite() {
            return Err(Error::InvalidInput(format!(
                "epsilon must be a positive finite number, got {}",
                self.epsilon
            )));
        }
        for (name, v) in [
            ("initial_outer", self.initial_outer),
            ("initial_inner", self.initial_inner),
        ] {
            if v < 8 || !v.is_power_of_two() {
                return Err(Error::InvalidInput(format!(
                    "{name} must be a power of two >= 8, got {v}"
                )));
            }
            if v > self.size_cap {
                return Err(Error::InvalidInput(format!(
                    "{name} = {v} exceeds size_cap = {}",
                    self.size_cap
                )));
            }
        }
        Ok(())
    }
}

/// Trailing-coefficient acceptance test: the sum of the last four
/// coefficient magnitudes must not exceed `threshold * max(1, head)` where
/// `head` is the largest of the first four magnitudes.
fn stop_ok(coeffs: &[f64], threshold: f64) -> bool {
    let n = coeffs.len();
    let tail: f64 = coeffs[n - 4..].iter().map(|g| g.abs()).sum();
    let head = coeffs[..4].iter().fold(0.0f64, |m, g| m.max(g.abs()));
    tail <= threshold * head.max(1.0)
}

/// Adaptively interpolates `f` on [0,1]: doubles the degree from `initial`
/// until the stop test passes at `threshold`, reusing every sample at the
/// coinciding even nodes.
pub(crate) fn adaptive_series<F>(
    mut f: F,
    initial: usize,
    cap: usize,
    threshold: f64,
) -> Result<ChebyshevSeries>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut m = initial;
    let mut samples = Vec::with_capacity(m + 1);
    for &x in &chebyshev_nodes(m) {
        samples.push(f(x)?);
    }
    loop {
        let series = cheb_interpolate(&samples)?;
        if stop_ok(&series.coeffs, threshold) {
            return Ok(series);
        }
        if 2 * m > cap {
            return Err(Error::QuadratureDivergence(format!(
                "interpolation degree would exceed the cap {cap} without \
                 satisfying the stop rule"
            )));
        }
        m *= 2;
        let nodes = chebyshev_nodes(m);
        let mut doubled = Vec::with_capacity(m + 1);
        for (j, &x) in nodes.iter().enumerate() {
            if j % 2 == 0 {
                doubled.push(samples[j / 2]);
            } else {
                doubled.push(f(x)?);
            }
        }
        samples = doubled;
    }
}

/// Evaluates a univariate Bernstein form by de Casteljau.
pub(crate) fn eval_bernstein_1d(coeffs: &[f64], t: f64) -> f64 {
    let mut buf = coeffs.to_vec();
    for r in (1..buf.len()).rev() {
        for i in 0..r {
            buf[i] = (1.0 - t) * buf[i] + t * buf[i + 1];
        }
    }
    buf[0]
}

/// The per-`t` coefficient vector `w_i(t)` of the weight polynomial under
/// the substitution `x = (s, (1-s) t)`:
/// `omega*(s, t) = sum_i w_i(t) B^n_i(s)`, `w_i(t) = sum_j w_(i,j) B^(n-i)_j(t)`.
///
/// Computing this once per `t` is what lets a whole collection share its
/// samples.
pub fn omega_star_coeffs(n: usize, weights: &[f64], t: f64) -> Vec<f64> {
    debug_assert_eq!(weights.len(), theta_len(n));
    (0..=n)
        .map(|i| {
            let row: Vec<f64> = (0..=(n - i))
                .map(|j| weights[theta_position(n, MultiIndex::new(i, j))])
                .collect();
            eval_bernstein_1d(&row, t)
        })
        .collect()
}

/// `omega*(s, t) = omega(s, (1-s) t)`.
pub fn omega_star(n: usize, weights: &[f64], s: f64, t: f64) -> f64 {
    eval_bernstein_1d(&omega_star_coeffs(n, weights, t), s)
}

/// Jacobi exponents of the iterated form of `I_j`, `N = n + m`:
/// outer weight `(1-t)^a t^b`, inner weight `(1-s)^c s^d`.
#[derive(Debug, Clone, Copy)]
pub struct JacobiExponents {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

/// Exponents for the index `j`; all four are `> -1` whenever `j` lies in
/// `Omega^c_N` and the alpha exponents are admissible.
pub fn jacobi_exponents(n_plus_m: usize, alpha: AlphaWeights, j: MultiIndex) -> JacobiExponents {
    JacobiExponents {
        a: alpha.a3 + (n_plus_m - j.total()) as f64,
        b: alpha.a2 + j.k2 as f64,
        c: alpha.a2 + alpha.a3 + (n_plus_m - j.k1) as f64 + 1.0,
        d: alpha.a1 + j.k1 as f64,
    }
}

/// Diagnostics of one adaptive collection run.
#[derive(Debug, Clone, Default)]
pub struct QuadratureReport {
    /// Final outer degree `M`.
    pub final_outer: usize,
    /// Final inner degree `M_k` per outer node, in node order.
    pub inner_sizes: Vec<usize>,
    pub outer_doublings: usize,
    pub inner_doublings: usize,
    /// Total evaluations of `1/omega*`.
    pub psi_evaluations: usize,
}

/// The complete collection `{I_j : j in Omega^c_{n+m}}` with diagnostics.
#[derive(Debug, Clone)]
pub struct IntegralCollection {
    n_plus_m: usize,
    constraints: ConstraintVector,
    indices: Vec<MultiIndex>,
    values: Vec<f64>,
    pub report: QuadratureReport,
}

impl IntegralCollection {
    /// The value `I_j`. Asking for an index outside the collection is a
    /// programming error.
    pub fn get(&self, j: MultiIndex) -> f64 {
        assert!(
            self.constraints.admits(self.n_plus_m, j),
            "I_{j} outside Omega^{}_{}",
            self.constraints,
            self.n_plus_m
        );
        self.values[omega_position(self.n_plus_m, self.constraints, j)]
    }

    /// `Omega^c_{n+m}` in lexicographic order.
    pub fn indices(&self) -> &[MultiIndex] {
        &self.indices
    }

    /// Values in the same order as [`indices`](Self::indices).
    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Inner expansion and `W`-row of a single outer node.
#[derive(Debug, Clone)]
struct NodeColumn {
    inner_size: usize,
    /// `J(c(j1), d(j1); S_{M_k})` for each `j1` in range, in order.
    w_row: Vec<f64>,
}

fn phase_one_node(
    n: usize,
    weights: &[f64],
    t: f64,
    j1_range: (usize, usize),
    n_plus_m: usize,
    alpha: AlphaWeights,
    cfg: &QuadratureConfig,
    report: &mut QuadratureReport,
) -> Result<NodeColumn> {
    let wc = omega_star_coeffs(n, weights, t);
    let mut evals = 0usize;
    let mut size = cfg.initial_inner;
    let series = adaptive_series(
        |s| {
            evals += 1;
            Ok(1.0 / eval_bernstein_1d(&wc, s))
        },
        cfg.initial_inner,
        cfg.size_cap,
        16.0 * cfg.epsilon,
    )
    .map_err(|e| match e {
        Error::QuadratureDivergence(msg) => {
            Error::QuadratureDivergence(format!("{msg} (inner expansion at t = {t})"))
        }
        other => other,
    })?;
    report.psi_evaluations += evals;
    while size < series.degree() {
        size *= 2;
        report.inner_doublings += 1;
    }
    let w_row = (j1_range.0..=j1_range.1)
        .map(|j1| {
            let c_exp = alpha.a2 + alpha.a3 + (n_plus_m - j1) as f64 + 1.0;
            let d_exp = alpha.a1 + j1 as f64;
            jacobi_cheb_integral(c_exp, d_exp, &series)
        })
        .collect();
    Ok(NodeColumn { inner_size: series.degree(), w_row })
}

/// Computes the whole collection of rational-weight integrals for degrees
/// `n` (source) and `m` (target), constraints `c`, and weight `alpha`.
///
/// `weights` is the source patch weight vector over `Theta_n` in
/// lexicographic order. The collection ranges over `Omega^c_{n+m}`, which
/// is nonempty iff `|c| <= n + m`.
pub fn integral_collection(
    n: usize,
    weights: &[f64],
    m: usize,
    c: ConstraintVector,
    alpha: AlphaWeights,
    cfg: &QuadratureConfig,
) -> Result<IntegralCollection> {
    alpha.validate()?;
    cfg.validate()?;
    if weights.len() != theta_len(n) {
        return Err(Error::InvalidInput(format!(
            "weights: expected {} entries for degree {n}, got {}",
            theta_len(n),
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
    let n_plus_m = n + m;
    if c.total() > n_plus_m {
        return Err(Error::InvalidInput(format!(
            "constraints {c} leave Omega^c_{n_plus_m} empty"
        )));
    }
    let j1_range = (c.c1, n_plus_m - c.c2 - c.c3);
    let a_norm = normalization_constant(alpha);

    let mut report = QuadratureReport::default();
    let mut m_outer = cfg.initial_outer;
    let mut columns: Vec<NodeColumn> = Vec::with_capacity(m_outer + 1);
    for &t in &chebyshev_nodes(m_outer) {
        columns.push(phase_one_node(
            n, weights, t, j1_range, n_plus_m, alpha, cfg, &mut report,
        )?);
    }

    let indices = omega(n_plus_m, c);
    let mut values = vec![0.0; indices.len()];

    for (col_idx, j1) in (j1_range.0..=j1_range.1).enumerate() {
        let outer_series = loop {
            let samples: Vec<f64> = columns.iter().map(|nc| nc.w_row[col_idx]).collect();
            let series = cheb_interpolate(&samples)?;
            if stop_ok(&series.coeffs, 256.0 * cfg.epsilon) {
                break series;
            }
            if 2 * m_outer > cfg.size_cap {
                return Err(Error::QuadratureDivergence(format!(
                    "outer degree would exceed the cap {} without satisfying \
                     the stop rule (j1 = {j1})",
                    cfg.size_cap
                )));
            }
            m_outer *= 2;
            report.outer_doublings += 1;
            let nodes = chebyshev_nodes(m_outer);
            let mut doubled = Vec::with_capacity(m_outer + 1);
            for (k, &t) in nodes.iter().enumerate() {
                if k % 2 == 0 {
                    doubled.push(columns[k / 2].clone());
                } else {
                    doubled.push(phase_one_node(
                        n, weights, t, j1_range, n_plus_m, alpha, cfg, &mut report,
                    )?);
                }
            }
            columns = doubled;
        };
        for j2 in c.c2..=(n_plus_m - c.c3 - j1) {
            let j = MultiIndex::new(j1, j2);
            let e = jacobi_exponents(n_plus_m, alpha, j);
            values[omega_position(n_plus_m, c, j)] =
                a_norm * multinomial(n_plus_m, j) * jacobi_cheb_integral(e.a, e.b, &outer_series);
        }
    }

    report.final_outer = m_outer;
    report.inner_sizes = columns.iter().map(|nc| nc.inner_size).collect();
    Ok(IntegralCollection { n_plus_m, constraints: c, indices, values, report })
}

/// Adaptive weighted integral of a smooth integrand over the triangle:
/// `integral_T w_alpha(x) g(x1, x2) dx` through the same substitution and
/// stop rules as the collection quadrature.
pub fn weighted_integral<F>(g: F, alpha: AlphaWeights, cfg: &QuadratureConfig) -> Result<f64>
where
    F: Fn(f64, f64) -> f64,
{
    alpha.validate()?;
    cfg.validate()?;
    let inner = |s: f64| -> Result<f64> {
        let series = adaptive_series(
            |t| Ok(g(s, (1.0 - s) * t)),
            cfg.initial_inner,
            cfg.size_cap,
            16.0 * cfg.epsilon,
        )?;
        Ok(jacobi_cheb_integral(alpha.a3, alpha.a2, &series))
    };
    let outer = adaptive_series(inner, cfg.initial_outer, cfg.size_cap, 256.0 * cfg.epsilon)?;
    Ok(normalization_constant(alpha)
        * jacobi_cheb_integral(alpha.a2 + alpha.a3 + 1.0, alpha.a1, &outer))
}

/// `<f, g>` under the normalized weight, via [`weighted_integral`].
pub fn weighted_inner_product<F, G>(
    f: F,
    g: G,
    alpha: AlphaWeights,
    cfg: &QuadratureConfig,
) -> Result<f64>
where
    F: Fn(f64, f64) -> f64,
    G: Fn(f64, f64) -> f64,
{
    weighted_integral(|x1, x2| f(x1, x2) * g(x1, x2), alpha, cfg)
}
