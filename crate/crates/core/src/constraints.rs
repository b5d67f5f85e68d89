//! Constraint-point generators.
//!
//! [`boundary_constraints`] turns the three boundary curves of a rational
//! patch into a prescribed set over `Gamma^(1,1,1)_m` by weighted
//! least-squares degree reduction with the endpoints kept.
//! [`c1_constraints`] produces the two prescribed rows over
//! `Gamma^(2,0,0)_m` that join a patch to an already-approximated neighbor
//! with continuous first derivatives across the shared edge.

use std::collections::BTreeMap;

use crate::chebyshev::jacobi_cheb_integral;
use crate::error::{Error, Result};
use crate::gamma::ln_gamma;
use crate::index::{binomial, MultiIndex};
use crate::jacobi::AlphaWeights;
use crate::patch::{PolynomialPatch, RationalPatch};
use crate::quadrature::{adaptive_series, eval_bernstein_1d, QuadratureConfig};

/// A rational Bézier curve on [0,1]: control points in `R^D` and positive
/// weights.
#[derive(Debug, Clone)]
pub struct RationalCurve<const D: usize> {
    points: Vec<[f64; D]>,
    weights: Vec<f64>,
}

impl<const D: usize> RationalCurve<D> {
    pub fn new(points: Vec<[f64; D]>, weights: Vec<f64>) -> Result<Self> {
        if points.is_empty() || points.len() != weights.len() {
            return Err(Error::InvalidInput(format!(
                "curve needs matching nonempty point/weight lists, got {} and {}",
                points.len(),
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
        Ok(Self { points, weights })
    }

    pub fn degree(&self) -> usize {
        self.points.len() - 1
    }

    pub fn points(&self) -> &[[f64; D]] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn eval(&self, t: f64) -> [f64; D] {
        let denom = eval_bernstein_1d(&self.weights, t);
        std::array::from_fn(|d| {
            let num: Vec<f64> = self
                .points
                .iter()
                .zip(&self.weights)
                .map(|(p, w)| w * p[d])
                .collect();
            eval_bernstein_1d(&num, t) / denom
        })
    }
}

/// Gram entry of univariate degree-`m` Bernstein polynomials under the
/// Jacobi weight `(1-t)^au t^av`: a Beta-function closed form.
fn curve_gram_entry(m: usize, au: f64, av: f64, j: usize, k: usize) -> f64 {
    let beta = (ln_gamma(av + (j + k) as f64 + 1.0) + ln_gamma(au + (2 * m - j - k) as f64 + 1.0)
        - ln_gamma(au + av + 2.0 * m as f64 + 2.0))
    .exp();
    binomial(m, j) * binomial(m, k) * beta
}

/// Solves `a x = b` for a symmetric positive definite `a` by Cholesky;
/// `a` is row-major `n x n`.
fn solve_spd(a: &[f64], b: &mut [f64]) -> Result<()> {
    let n = b.len();
    debug_assert_eq!(a.len(), n * n);
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if s <= 0.0 {
                    return Err(Error::InvalidInput(
                        "normal matrix is numerically singular".into(),
                    ));
                }
                l[i * n + i] = s.sqrt();
            } else {
                l[i * n + j] = s / l[j * n + j];
            }
        }
    }
    for i in 0..n {
        for k in 0..i {
            b[i] -= l[i * n + k] * b[k];
        }
        b[i] /= l[i * n + i];
    }
    for i in (0..n).rev() {
        for k in (i + 1)..n {
            b[i] -= l[k * n + i] * b[k];
        }
        b[i] /= l[i * n + i];
    }
    Ok(())
}

/// Best degree-`m` polynomial Bézier approximation of a rational curve in
/// the Jacobi-weighted L2 sense on [0,1], weight `(1-t)^au t^av` with
/// `(au, av) = alpha_uv`, optionally interpolating the endpoints.
///
/// The normal equations use the Beta-function Gram closed form; the
/// right-hand sides expand the rational curve once in Chebyshev form and
/// integrate it against each basis function by the backward recurrence.
pub fn boundary_constrained_ls<const D: usize>(
    curve: &RationalCurve<D>,
    m: usize,
    endpoints_fixed: bool,
    alpha_uv: (f64, f64),
    cfg: &QuadratureConfig,
) -> Result<Vec<[f64; D]>> {
    let (au, av) = alpha_uv;
    if !(au > -1.0 && av > -1.0) {
        return Err(Error::InvalidInput(format!(
            "edge weight exponents must be > -1, got ({au}, {av})"
        )));
    }
    if endpoints_fixed && m < 2 {
        return Err(Error::InvalidInput(format!(
            "endpoint-fixed reduction needs m >= 2, got {m}"
        )));
    }

    // One adaptive Chebyshev expansion per component, reused for every
    // right-hand side.
    let series: Vec<_> = (0..D)
        .map(|d| {
            adaptive_series(
                |t| Ok(curve.eval(t)[d]),
                cfg.initial_inner,
                cfg.size_cap,
                16.0 * cfg.epsilon,
            )
        })
        .collect::<Result<_>>()?;

    // <r, b_j> = (m ch j) J(au + m - j, av + j; r).
    let moment = |j: usize, d: usize| {
        binomial(m, j)
            * jacobi_cheb_integral(au + (m - j) as f64, av + j as f64, &series[d])
    };

    let free: Vec<usize> = if endpoints_fixed {
        (1..m).collect()
    } else {
        (0..=m).collect()
    };
    let nf = free.len();
    let mut gram = vec![0.0; nf * nf];
    for (i, &j) in free.iter().enumerate() {
        for (ii, &k) in free.iter().enumerate() {
            gram[i * nf + ii] = curve_gram_entry(m, au, av, j, k);
        }
    }

    let mut out = vec![[0.0; D]; m + 1];
    if endpoints_fixed {
        out[0] = curve.points()[0];
        out[m] = *curve.points().last().expect("nonempty curve");
    }
    for d in 0..D {
        let mut rhs: Vec<f64> = free.iter().map(|&j| moment(j, d)).collect();
        if endpoints_fixed {
            for (i, &j) in free.iter().enumerate() {
                rhs[i] -= out[0][d] * curve_gram_entry(m, au, av, j, 0)
                    + out[m][d] * curve_gram_entry(m, au, av, j, m);
            }
        }
        solve_spd(&gram, &mut rhs)?;
        for (i, &j) in free.iter().enumerate() {
            out[j][d] = rhs[i];
        }
    }
    Ok(out)
}

/// The three boundary curves of a rational patch: the `x2 = 0` edge
/// (parametrized by `x1`), the `x1 = 0` edge (by `x2`), and the hypotenuse
/// `|x| = 1` (by `x1`).
pub fn boundary_curves<const D: usize>(patch: &RationalPatch<D>) -> [RationalCurve<D>; 3] {
    let n = patch.degree();
    let take = |keys: Vec<MultiIndex>| {
        RationalCurve::new(
            keys.iter().map(|&k| patch.point(k)).collect(),
            keys.iter().map(|&k| patch.weight(k)).collect(),
        )
        .expect("patch invariants carry over")
    };
    [
        take((0..=n).map(|i| MultiIndex::new(i, 0)).collect()),
        take((0..=n).map(|j| MultiIndex::new(0, j)).collect()),
        take((0..=n).map(|i| MultiIndex::new(i, n - i)).collect()),
    ]
}

/// Prescribed boundary band over `Gamma^(1,1,1)_m`: each boundary curve of
/// the source is reduced to degree `m` with its endpoints kept, under the
/// edge restriction of the surface weight.
pub fn boundary_constraints<const D: usize>(
    patch: &RationalPatch<D>,
    m: usize,
    alpha: AlphaWeights,
    cfg: &QuadratureConfig,
) -> Result<BTreeMap<MultiIndex, [f64; D]>> {
    if m < 4 {
        return Err(Error::InvalidInput(format!(
            "boundary constraints pair with c = (1,1,1), which needs m >= 4, got {m}"
        )));
    }
    alpha.validate()?;
    let [bottom, left, hyp] = boundary_curves(patch);
    // Edge restrictions of the surface weight: bottom carries
    // t^a1 (1-t)^a3, left t^a2 (1-t)^a3, hypotenuse t^a1 (1-t)^a2.
    let qb = boundary_constrained_ls(&bottom, m, true, (alpha.a3, alpha.a1), cfg)?;
    let ql = boundary_constrained_ls(&left, m, true, (alpha.a3, alpha.a2), cfg)?;
    let qh = boundary_constrained_ls(&hyp, m, true, (alpha.a2, alpha.a1), cfg)?;

    let mut g = BTreeMap::new();
    for (i, &p) in qb.iter().enumerate() {
        g.insert(MultiIndex::new(i, 0), p);
    }
    for (j, &p) in ql.iter().enumerate() {
        g.insert(MultiIndex::new(0, j), p);
    }
    for (i, &p) in qh.iter().enumerate() {
        g.insert(MultiIndex::new(i, m - i), p);
    }
    Ok(g)
}

/// Prescribed rows over `Gamma^(2,0,0)_m` that glue a patch to `neighbor`
/// with first-derivative continuity across the shared edge:
/// `g_(0,i) = p_(i,0)` and `g_(1,i) = p_(i+1,0) + (p_(i+1,0) - p_(i,1))`.
pub fn c1_constraints<const D: usize>(
    neighbor: &PolynomialPatch<D>,
    m: usize,
) -> Result<BTreeMap<MultiIndex, [f64; D]>> {
    if neighbor.degree() != m {
        return Err(Error::InvalidInput(format!(
            "neighbor degree {} does not match the requested degree {m}",
            neighbor.degree()
        )));
    }
    let mut g = BTreeMap::new();
    for i in 0..=m {
        g.insert(MultiIndex::new(0, i), neighbor.point(MultiIndex::new(i, 0)));
    }
    for i in 0..m {
        let ahead = neighbor.point(MultiIndex::new(i + 1, 0));
        let inner = neighbor.point(MultiIndex::new(i, 1));
        g.insert(
            MultiIndex::new(1, i),
            std::array::from_fn(|d| 2.0 * ahead[d] - inner[d]),
        );
    }
    Ok(g)
}
