//! Assembly of the constrained least-squares approximant from the dual-basis
//! table and the integral collection, plus the error metrics.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use crate::dual::dual_table;
use crate::error::{Error, Result};
use crate::gamma::pochhammer;
use crate::index::{
    index_sets, multinomial, theta, theta_len, theta_position, ConstraintVector, MultiIndex,
};
use crate::jacobi::AlphaWeights;
use crate::patch::{PolynomialPatch, RationalPatch};
use crate::quadrature::{
    integral_collection, weighted_integral, IntegralCollection, QuadratureConfig, QuadratureReport,
};

/// Compensated accumulator; the `u_l` terms can alternate in magnitude.
#[derive(Clone, Copy, Default)]
struct Kahan {
    sum: f64,
    carry: f64,
}

impl Kahan {
    fn add(&mut self, v: f64) {
        let y = v - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }
}

/// A constrained approximation instance: find the degree-`m` polynomial
/// patch closest to `source` in the weighted L2 sense, with the control
/// points over `Gamma^c_m` prescribed.
#[derive(Debug, Clone)]
pub struct ApproximationProblem<const D: usize> {
    pub source: RationalPatch<D>,
    pub target_degree: usize,
    pub constraints: ConstraintVector,
    /// Prescribed control points; must cover exactly `Gamma^c_m`.
    pub prescribed: BTreeMap<MultiIndex, [f64; D]>,
    pub alpha: AlphaWeights,
    pub quadrature: QuadratureConfig,
}

/// The computed approximant plus run diagnostics.
#[derive(Debug, Clone)]
pub struct ApproximationResult<const D: usize> {
    pub patch: PolynomialPatch<D>,
    pub quadrature: QuadratureReport,
    pub wall_time: Duration,
}

/// Binomial ratio `(n ch h) / (n+m ch h+l)`, evaluated as a product of `m`
/// bounded factors so no large intermediate appears.
fn binomial_ratio(n: usize, h: MultiIndex, m: usize, l: MultiIndex) -> f64 {
    pochhammer((h.k1 + 1) as f64, l.k1)
        * pochhammer((h.k2 + 1) as f64, l.k2)
        * pochhammer((n - h.total() + 1) as f64, m - l.total())
        / pochhammer((n + 1) as f64, m)
}

/// `u_l = sum_{h in Theta_n} (n ch h)/(n+m ch h+l) w_h r_h I_{h+l}`, summed
/// in lexicographic order with compensated accumulation.
///
/// Requires the collection to cover `Omega^c_{n+m}`; `h + l` stays inside it
/// for every `h` in `Theta_n` when `l` lies in `Omega^c_m`.
pub fn compute_u<const D: usize>(
    l: MultiIndex,
    source: &RationalPatch<D>,
    m: usize,
    integrals: &IntegralCollection,
) -> [f64; D] {
    let n = source.degree();
    let mut acc = [Kahan::default(); D];
    for (i, h) in theta(n).into_iter().enumerate() {
        let factor = binomial_ratio(n, h, m, l) * source.weights()[i] * integrals.get(h + l);
        for (a, p) in acc.iter_mut().zip(&source.points()[i]) {
            a.add(factor * p);
        }
    }
    acc.map(|k| k.sum)
}

/// `v_l = (|a|+3)_{2m}^{-1} sum_{h in Gamma} (m ch h) prod_i (a_i+1)_{h_i+l_i} g_h`
/// with `h_3 = m - |h|`, `l_3 = m - |l|`.
pub fn compute_v<const D: usize>(
    l: MultiIndex,
    prescribed: &BTreeMap<MultiIndex, [f64; D]>,
    m: usize,
    alpha: AlphaWeights,
) -> [f64; D] {
    let denom = pochhammer(alpha.total() + 3.0, 2 * m);
    let l3 = m - l.total();
    let mut out = [0.0; D];
    for (&h, g) in prescribed {
        let factor = multinomial(m, h)
            * pochhammer(alpha.a1 + 1.0, h.k1 + l.k1)
            * pochhammer(alpha.a2 + 1.0, h.k2 + l.k2)
            * pochhammer(alpha.a3 + 1.0, (m - h.total()) + l3)
            / denom;
        for (o, gd) in out.iter_mut().zip(g) {
            *o += factor * gd;
        }
    }
    out
}

/// Solves the constrained approximation problem:
/// `p_k = sum_{l in Omega} (m ch l) E^k_l (u_l - v_l)` on `Omega^c_m` and
/// `p_k = g_k` on `Gamma^c_m` (copied bit for bit).
///
/// Vector-valued patches share one integral collection and one dual table
/// across components.
pub fn approximate<const D: usize>(
    problem: &ApproximationProblem<D>,
) -> Result<ApproximationResult<D>> {
    let start = Instant::now();
    let m = problem.target_degree;
    let c = problem.constraints;
    problem.alpha.validate()?;
    let sets = index_sets(m, c)?;
    for k in problem.prescribed.keys() {
        if !k.in_theta(m) || c.admits(m, *k) {
            return Err(Error::InvalidInput(format!(
                "prescribed point {k} is not in Gamma^{c}_{m}"
            )));
        }
    }
    for k in &sets.gamma {
        if !problem.prescribed.contains_key(k) {
            return Err(Error::InvalidInput(format!(
                "prescribed map is missing {k} from Gamma^{c}_{m}"
            )));
        }
    }

    let n = problem.source.degree();
    let integrals = integral_collection(
        n,
        problem.source.weights(),
        m,
        c,
        problem.alpha,
        &problem.quadrature,
    )?;
    let etable = dual_table(m, problem.alpha, c)?;

    // u_l - v_l over Omega, shared across the final combination.
    let residuals: Vec<[f64; D]> = sets
        .omega
        .iter()
        .map(|&l| {
            let u = compute_u(l, &problem.source, m, &integrals);
            let v = compute_v(l, &problem.prescribed, m, problem.alpha);
            std::array::from_fn(|d| u[d] - v[d])
        })
        .collect();

    let mut points = vec![[0.0; D]; theta_len(m)];
    for (&k, g) in &problem.prescribed {
        points[theta_position(m, k)] = *g;
    }
    for &k in &sets.omega {
        let mut p = [0.0; D];
        for (j, &l) in sets.omega.iter().enumerate() {
            let factor = multinomial(m, l) * etable.get(k, l);
            for (pd, rd) in p.iter_mut().zip(&residuals[j]) {
                *pd += factor * rd;
            }
        }
        points[theta_position(m, k)] = p;
    }

    Ok(ApproximationResult {
        patch: PolynomialPatch::new(m, points)?,
        quadrature: integrals.report.clone(),
        wall_time: start.elapsed(),
    })
}

/// Max of `||R(x) - P(x)||` over the uniform barycentric grid
/// `{(i/G, j/G) : i + j <= G}`.
pub fn error_max<const D: usize>(
    rational: &RationalPatch<D>,
    polynomial: &PolynomialPatch<D>,
    grid: usize,
) -> Result<f64> {
    if grid < 2 {
        return Err(Error::InvalidInput(format!(
            "grid density must be >= 2, got {grid}"
        )));
    }
    let g = grid as f64;
    let mut worst = 0.0f64;
    for i in 0..=grid {
        for j in 0..=(grid - i) {
            let x = (i as f64 / g, j as f64 / g);
            let a = rational.eval(x)?;
            let b = polynomial.eval(x)?;
            let d2: f64 = a.iter().zip(&b).map(|(p, q)| (p - q) * (p - q)).sum();
            worst = worst.max(d2.sqrt());
        }
    }
    Ok(worst)
}

/// Weighted L2 distance `sqrt(<R-P, R-P>)` under the normalized weight,
/// via the adaptive triangle integrator.
pub fn weighted_l2_distance<const D: usize>(
    rational: &RationalPatch<D>,
    polynomial: &PolynomialPatch<D>,
    alpha: AlphaWeights,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let squared = weighted_integral(
        |x1, x2| {
            let a = rational.eval((x1, x2)).expect("substituted point stays in T");
            let b = polynomial.eval((x1, x2)).expect("substituted point stays in T");
            a.iter().zip(&b).map(|(p, q)| (p - q) * (p - q)).sum()
        },
        alpha,
        cfg,
    )?;
    Ok(squared.max(0.0).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jacobi::gram_entry;
    use crate::quadrature::weighted_inner_product;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use rand::{Rng, SeedableRng};

    fn unconstrained_problem<const D: usize>(
        source: RationalPatch<D>,
        m: usize,
        alpha: AlphaWeights,
    ) -> ApproximationProblem<D> {
        ApproximationProblem {
            source,
            target_degree: m,
            constraints: ConstraintVector::NONE,
            prescribed: BTreeMap::new(),
            alpha,
            quadrature: QuadratureConfig::default(),
        }
    }

    #[test]
    fn compute_v_reproduces_gram_entries() {
        let m = 4;
        let alpha = AlphaWeights::new(0.5, -0.5, 1.0);
        let sets = index_sets(m, ConstraintVector::new(1, 1, 1)).unwrap();
        for &h in &sets.gamma {
            let mut prescribed = BTreeMap::new();
            prescribed.insert(h, [1.0f64]);
            for &l in &sets.omega {
                let v = compute_v(l, &prescribed, m, alpha)[0];
                assert_abs_diff_eq!(
                    multinomial(m, l) * v,
                    gram_entry(m, alpha, h, l),
                    epsilon = 1e-13
                );
            }
        }
        // All-zero data gives zero.
        let zeros: BTreeMap<MultiIndex, [f64; 1]> =
            sets.gamma.iter().map(|&k| (k, [0.0])).collect();
        for &l in &sets.omega {
            assert_eq!(compute_v(l, &zeros, m, alpha)[0], 0.0);
        }
    }

    #[test]
    fn compute_u_single_point_source() {
        // n = 0 with unit weight: (m ch l) u_l = value * I_l.
        let value = 2.5;
        let source = RationalPatch::<1>::new(0, vec![[value]], vec![1.0]).unwrap();
        let m = 3;
        let alpha = AlphaWeights::UNIFORM;
        let iv = integral_collection(
            0,
            source.weights(),
            m,
            ConstraintVector::NONE,
            alpha,
            &QuadratureConfig::default(),
        )
        .unwrap();
        for &l in &theta(m) {
            let u = compute_u(l, &source, m, &iv)[0];
            assert_relative_eq!(multinomial(m, l) * u, value * iv.get(l), max_relative = 1e-13);
        }
    }

    #[test]
    fn compute_u_matches_inner_product_for_equal_weights() {
        // Equal weights make the source polynomial, so (m ch l) u_l equals
        // <R, B^m_l>, computable by the generic integrator.
        let mut rng = rand::rngs::StdRng::seed_from_u64(13);
        let n = 2;
        let m = 3;
        let alpha = AlphaWeights::new(0.0, 0.5, -0.25);
        let points: Vec<[f64; 1]> =
            (0..theta_len(n)).map(|_| [rng.random_range(-2.0..2.0)]).collect();
        let source = RationalPatch::new(n, points, vec![1.3; theta_len(n)]).unwrap();
        let cfg = QuadratureConfig::default();
        let iv =
            integral_collection(n, source.weights(), m, ConstraintVector::NONE, alpha, &cfg)
                .unwrap();
        for &l in &[MultiIndex::new(0, 0), MultiIndex::new(1, 1), MultiIndex::new(0, 3)] {
            let u = compute_u(l, &source, m, &iv)[0];
            let ip = weighted_inner_product(
                |x1, x2| source.eval((x1, x2)).unwrap()[0],
                |x1, x2| crate::patch::bernstein(m, l, (x1, x2)).unwrap(),
                alpha,
                &cfg,
            )
            .unwrap();
            assert_relative_eq!(multinomial(m, l) * u, ip, max_relative = 1e-10, epsilon = 1e-12);
        }
    }

    #[test]
    fn projection_returns_members_of_the_space() {
        // Equal weights and m = n: the best approximation of a polynomial
        // by itself.
        let mut rng = rand::rngs::StdRng::seed_from_u64(29);
        let n = 3;
        let points: Vec<[f64; 1]> =
            (0..theta_len(n)).map(|_| [rng.random_range(-1.0..1.0)]).collect();
        let source = RationalPatch::new(n, points.clone(), vec![0.7; theta_len(n)]).unwrap();
        let result =
            approximate(&unconstrained_problem(source, n, AlphaWeights::CHEBYSHEV)).unwrap();
        for (got, want) in result.patch.points().iter().zip(&points) {
            assert_abs_diff_eq!(got[0], want[0], epsilon = 1e-10);
        }
    }

    #[test]
    fn prescribed_points_are_copied_bit_for_bit() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(31);
        let n = 2;
        let m = 3;
        let c = ConstraintVector::new(1, 0, 1);
        let source = RationalPatch::<1>::new(
            n,
            (0..6).map(|_| [rng.random_range(-1.0..1.0)]).collect(),
            (0..6).map(|_| rng.random_range(0.5..2.0)).collect(),
        )
        .unwrap();
        let sets = index_sets(m, c).unwrap();
        let prescribed: BTreeMap<MultiIndex, [f64; 1]> = sets
            .gamma
            .iter()
            .map(|&k| (k, [rng.random_range(-1.0..1.0) * std::f64::consts::PI]))
            .collect();
        let problem = ApproximationProblem {
            source,
            target_degree: m,
            constraints: c,
            prescribed: prescribed.clone(),
            alpha: AlphaWeights::UNIFORM,
            quadrature: QuadratureConfig::default(),
        };
        let result = approximate(&problem).unwrap();
        for (&k, g) in &prescribed {
            assert_eq!(result.patch.point(k)[0].to_bits(), g[0].to_bits());
        }
    }

    #[test]
    fn vector_equals_stacked_scalars() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(37);
        let n = 2;
        let m = 3;
        let pts: Vec<[f64; 3]> = (0..theta_len(n))
            .map(|_| std::array::from_fn(|_| rng.random_range(-1.0..1.0)))
            .collect();
        let w: Vec<f64> = (0..theta_len(n)).map(|_| rng.random_range(0.2..3.0)).collect();
        let vec_res = approximate(&unconstrained_problem(
            RationalPatch::new(n, pts.clone(), w.clone()).unwrap(),
            m,
            AlphaWeights::CHEBYSHEV,
        ))
        .unwrap();
        for d in 0..3 {
            let scalar: Vec<[f64; 1]> = pts.iter().map(|p| [p[d]]).collect();
            let res = approximate(&unconstrained_problem(
                RationalPatch::new(n, scalar, w.clone()).unwrap(),
                m,
                AlphaWeights::CHEBYSHEV,
            ))
            .unwrap();
            for (v3, v1) in vec_res.patch.points().iter().zip(res.patch.points()) {
                assert_eq!(v3[d].to_bits(), v1[0].to_bits());
            }
        }
    }

    #[test]
    fn rejects_wrong_prescribed_domain() {
        let source = RationalPatch::<1>::new(1, vec![[0.0]; 3], vec![1.0; 3]).unwrap();
        let mut problem = unconstrained_problem(source, 2, AlphaWeights::UNIFORM);
        problem.constraints = ConstraintVector::new(1, 0, 0);
        // Missing the whole Gamma set.
        assert!(approximate(&problem).is_err());
        // Key outside Gamma.
        problem.prescribed.insert(MultiIndex::new(1, 0), [0.0]);
        assert!(approximate(&problem).is_err());
    }

    #[test]
    fn error_metrics_basic_values() {
        let p = PolynomialPatch::<1>::new(1, vec![[1.0], [1.0], [1.0]]).unwrap();
        let r = RationalPatch::from_polynomial(&p);
        assert_abs_diff_eq!(error_max(&r, &p, 10).unwrap(), 0.0, epsilon = 1e-14);
        let offset = PolynomialPatch::<1>::new(1, vec![[2.0], [2.0], [2.0]]).unwrap();
        assert_relative_eq!(error_max(&r, &offset, 10).unwrap(), 1.0, max_relative = 1e-15);
        assert!(error_max(&r, &p, 1).is_err());
        let cfg = QuadratureConfig::default();
        assert_relative_eq!(
            weighted_l2_distance(&r, &offset, AlphaWeights::UNIFORM, &cfg).unwrap(),
            1.0,
            max_relative = 1e-12
        );
    }
}
