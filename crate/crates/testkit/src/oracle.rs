//! Direct-formula evaluators and normal-equation solvers used as oracles.

use std::collections::BTreeMap;

use tribezier::{
    gram_entry, index_sets, theta, theta_len, theta_position, AlphaWeights, ConstraintVector,
    MultiIndex, PolynomialPatch, RationalPatch,
};

use crate::gauss_jacobi::DenseQuadratureRule;

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// Bernstein basis value by the direct product formula; deliberately not
/// the de Casteljau path of the main crate.
pub fn bernstein_direct(n: usize, k: MultiIndex, x: (f64, f64)) -> f64 {
    let coeff = factorial(n) / (factorial(k.k1) * factorial(k.k2) * factorial(n - k.total()));
    coeff
        * x.0.powi(k.k1 as i32)
        * x.1.powi(k.k2 as i32)
        * (1.0 - x.0 - x.1).powi((n - k.total()) as i32)
}

/// Rational patch value by direct basis sums.
pub fn rational_eval<const D: usize>(patch: &RationalPatch<D>, x: (f64, f64)) -> [f64; D] {
    let n = patch.degree();
    let mut denom = 0.0;
    let mut num = [0.0; D];
    for (i, k) in theta(n).into_iter().enumerate() {
        let b = patch.weights()[i] * bernstein_direct(n, k, x);
        denom += b;
        for (nd, p) in num.iter_mut().zip(&patch.points()[i]) {
            *nd += b * p;
        }
    }
    num.map(|v| v / denom)
}

/// `<f, g>` under the normalized weight by tensorized Gauss-Jacobi of
/// order `q` (use q >= 40 for oracle comparisons).
pub fn oracle_inner_product<F, G>(f: F, g: G, alpha: AlphaWeights, q: usize) -> f64
where
    F: Fn(f64, f64) -> f64,
    G: Fn(f64, f64) -> f64,
{
    DenseQuadratureRule::new(q, alpha).integrate(|x1, x2| f(x1, x2) * g(x1, x2))
}

/// Solves `a x = b` for symmetric positive definite `a` (row-major) by
/// Cholesky. Panics if the matrix is not positive definite; tests use that
/// as the definiteness check.
pub fn cholesky_solve(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = b.len();
    assert_eq!(a.len(), n * n);
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                assert!(s > 0.0, "matrix not positive definite at pivot {i}");
                l[i * n + i] = s.sqrt();
            } else {
                l[i * n + j] = s / l[j * n + j];
            }
        }
    }
    let mut x = b.to_vec();
    for i in 0..n {
        for k in 0..i {
            x[i] = x[i] - l[i * n + k] * x[k];
        }
        x[i] /= l[i * n + i];
    }
    for i in (0..n).rev() {
        for k in (i + 1)..n {
            x[i] = x[i] - l[k * n + i] * x[k];
        }
        x[i] /= l[i * n + i];
    }
    x
}

/// Direct normal-equation solution of the constrained approximation
/// problem: Gram over `Omega^c_m` from the closed form, right-hand sides
/// `<W, B^m_l>` by dense quadrature, Cholesky solve. Intended for small
/// instances (m <= 8).
pub fn oracle_constrained_ls<const D: usize>(
    source: &RationalPatch<D>,
    m: usize,
    c: ConstraintVector,
    prescribed: &BTreeMap<MultiIndex, [f64; D]>,
    alpha: AlphaWeights,
    q: usize,
) -> PolynomialPatch<D> {
    let sets = index_sets(m, c).expect("|c| < m");
    assert!(m <= 8, "oracle solve is conditioned for m <= 8 only");
    let nf = sets.omega.len();
    let mut gram = vec![0.0; nf * nf];
    for (i, &h) in sets.omega.iter().enumerate() {
        for (j, &l) in sets.omega.iter().enumerate() {
            gram[i * nf + j] = gram_entry(m, alpha, h, l);
        }
    }
    let rule = DenseQuadratureRule::new(q, alpha);
    let nodes = rule.points();
    // Cache the residual W = R - T and the basis values at every tensor
    // node; the right-hand sides are then plain weighted sums.
    let w_vals: Vec<[f64; D]> = nodes
        .iter()
        .map(|&(x1, x2, _)| {
            let r = rational_eval(source, (x1, x2));
            let mut out = r;
            for (&h, g) in prescribed {
                let b = bernstein_direct(m, h, (x1, x2));
                for (o, gd) in out.iter_mut().zip(g) {
                    *o -= b * gd;
                }
            }
            out
        })
        .collect();

    let mut points = vec![[0.0; D]; theta_len(m)];
    for (&k, g) in prescribed {
        points[theta_position(m, k)] = *g;
    }
    for d in 0..D {
        let rhs: Vec<f64> = sets
            .omega
            .iter()
            .map(|&l| {
                nodes
                    .iter()
                    .zip(&w_vals)
                    .map(|(&(x1, x2, w), wv)| w * wv[d] * bernstein_direct(m, l, (x1, x2)))
                    .sum()
            })
            .collect();
        let sol = cholesky_solve(&gram, &rhs);
        for (i, &k) in sets.omega.iter().enumerate() {
            points[theta_position(m, k)][d] = sol[i];
        }
    }
    PolynomialPatch::new(m, points).expect("sized by construction")
}

/// Exact degree elevation of a Bernstein net from degree `n` to `m >= n`,
/// by repeated single-step elevation.
pub fn oracle_degree_elevate<const D: usize>(
    points: &[[f64; D]],
    n: usize,
    m: usize,
) -> Vec<[f64; D]> {
    assert!(m >= n);
    assert_eq!(points.len(), theta_len(n));
    let mut cur = points.to_vec();
    for r in n..m {
        let next_len = theta_len(r + 1);
        let mut next = vec![[0.0; D]; next_len];
        for k in theta(r + 1) {
            let rf = (r + 1) as f64;
            let mut acc = [0.0; D];
            if k.k1 > 0 {
                let p = cur[theta_position(r, MultiIndex::new(k.k1 - 1, k.k2))];
                for (a, v) in acc.iter_mut().zip(&p) {
                    *a += k.k1 as f64 / rf * v;
                }
            }
            if k.k2 > 0 {
                let p = cur[theta_position(r, MultiIndex::new(k.k1, k.k2 - 1))];
                for (a, v) in acc.iter_mut().zip(&p) {
                    *a += k.k2 as f64 / rf * v;
                }
            }
            if k.total() <= r {
                let p = cur[theta_position(r, k)];
                for (a, v) in acc.iter_mut().zip(&p) {
                    *a += (r + 1 - k.total()) as f64 / rf * v;
                }
            }
            next[theta_position(r + 1, k)] = acc;
        }
        cur = next;
    }
    cur
}

/// Hahn polynomial by the terminating hypergeometric sum with the
/// prefactor folded into each term.
///
/// The alternating terms can exceed the result by many orders of
/// magnitude; in f64 this is only a valid oracle while the term
/// magnitudes stay moderate. [`hahn_hypergeometric_exact`] has no such
/// limit.
pub fn hahn_hypergeometric(l: usize, t: f64, a: f64, b: f64, m: usize) -> f64 {
    let poch = |x: f64, k: usize| -> f64 { (0..k).map(|i| x + i as f64).product() };
    let s = a + b + 1.0;
    (0..=l)
        .map(|k| {
            let kf = k as f64;
            poch(-(l as f64), k) * poch(l as f64 + s, k) * poch(-t, k)
                * poch(a + 1.0 + kf, l - k)
                * poch(-(m as f64) + kf, l - k)
                / factorial(k)
        })
        .sum()
}

/// The same terminating sum in exact rational arithmetic, for rational
/// parameters and argument given as `(numerator, denominator)` pairs.
/// Immune to the cancellation that sinks the f64 sum, so it can serve as
/// the reference even where the terms dwarf the value.
pub fn hahn_hypergeometric_exact(
    l: usize,
    t: (i64, i64),
    a: (i64, i64),
    b: (i64, i64),
    m: usize,
) -> f64 {
    use num::{BigInt, BigRational, ToPrimitive};
    let rat = |p: i64, q: i64| BigRational::new(BigInt::from(p), BigInt::from(q));
    let int = |p: i64| rat(p, 1);
    let poch = |x: &BigRational, k: usize| -> BigRational {
        let mut acc = rat(1, 1);
        for i in 0..k {
            acc *= x + int(i as i64);
        }
        acc
    };
    let a = rat(a.0, a.1);
    let b = rat(b.0, b.1);
    let t = rat(t.0, t.1);
    let s = &a + &b + int(1);
    let mut sum = rat(0, 1);
    for k in 0..=l {
        let mut term = poch(&int(-(l as i64)), k);
        term *= poch(&(int(l as i64) + &s), k);
        term *= poch(&(-&t), k);
        term *= poch(&(&a + int(1 + k as i64)), l - k);
        term *= poch(&int(k as i64 - m as i64), l - k);
        term /= poch(&int(1), k);
        sum += term;
    }
    sum.to_f64().expect("finite rational")
}
