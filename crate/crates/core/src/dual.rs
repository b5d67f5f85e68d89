//! Bézier-form coefficients of the constrained dual bivariate Bernstein
//! basis.
//!
//! The table `E^k_l` over `Omega^c_m x Omega^c_m` is the inverse of the
//! constrained Bernstein Gram matrix. It is built in O(M^4) from an
//! unconstrained ancestor table over `Theta_M`, `M = m - |c|`, seeded by a
//! Hahn-polynomial row and filled by two directional recurrences, then
//! rescaled entrywise.

use crate::error::{Error, Result};
use crate::gamma::{factorial, ln_gamma, ln_pochhammer, pochhammer};
use crate::hahn::{clenshaw_hahn, HahnParams};
use crate::index::{
    multinomial, omega, omega_position, theta_len, theta_position, ConstraintVector, MultiIndex,
};
use crate::jacobi::AlphaWeights;

/// Above this target degree the conversion factors of [`dual_table`] are
/// accumulated in log space; chosen so that the direct products stay well
/// inside f64 range below it.
const LOG_SPACE_DEGREE: usize = 25;

/// Dense symmetric table of the unconstrained dual-basis inner products
/// `e^k_l(mu, M)` over `Theta_M x Theta_M`.
#[derive(Debug, Clone)]
pub struct UnconstrainedDualTable {
    cap: usize,
    mu: AlphaWeights,
    entries: Vec<f64>,
}

impl UnconstrainedDualTable {
    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn mu(&self) -> AlphaWeights {
        self.mu
    }

    pub fn get(&self, k: MultiIndex, l: MultiIndex) -> f64 {
        let n = theta_len(self.cap);
        self.entries[theta_position(self.cap, k) * n + theta_position(self.cap, l)]
    }
}

/// The `C*` coefficient sequence of the seed row, built by the ratio
/// recurrence of consecutive coefficients; length `M - l1 + 1`.
pub(crate) fn seed_coefficients(cap: usize, mu: AlphaWeights, l1: usize) -> Vec<f64> {
    let m = cap as f64;
    let q = mu.a2 + mu.a3; // |mu| - mu1
    let tail = (cap - l1) as f64; // M - l1
    let len = cap - l1 + 1;
    let mut cs = Vec::with_capacity(len);
    let mut c = pochhammer(mu.a1 + 2.0, cap) / pochhammer(q + 2.0, cap - l1);
    cs.push(c);
    for i in 0..len - 1 {
        let fi = i as f64;
        let (num, den) = if i == 0 {
            // First step written with the (q+1) factor cancelled; q+1 may
            // vanish (e.g. mu2 = mu3 = -1/2).
            (
                -(q + 3.0) * (mu.total() + m + 3.0),
                (mu.a3 + 1.0) * (mu.a1 + m + 1.0) * (q + tail + 2.0),
            )
        } else {
            (
                -(2.0 * fi + q + 3.0) * (mu.total() + m + 3.0 + fi) * (q + fi + 1.0),
                (2.0 * fi + q + 1.0)
                    * (fi + 1.0)
                    * (mu.a3 + 1.0 + fi)
                    * (mu.a1 + m + 1.0 - fi)
                    * (q + fi + tail + 2.0),
            )
        };
        c *= num / den;
        cs.push(c);
    }
    cs
}

/// Seed-row entry `e^0_l` of the unconstrained table: a Hahn series of
/// length `M - l1 + 1` summed by Clenshaw's algorithm.
pub fn e_seed_row(cap: usize, mu: AlphaWeights, l: MultiIndex) -> f64 {
    debug_assert!(l.in_theta(cap));
    let cs = seed_coefficients(cap, mu, l.k1);
    let params = HahnParams::new(mu.a2, mu.a3, cap - l.k1);
    let hahn_sum = clenshaw_hahn(&cs, l.k2 as f64, &params).expect("series length within cap");
    let sign = if l.k1 % 2 == 0 { 1.0 } else { -1.0 };
    sign * pochhammer(mu.total() + 3.0, cap)
        / (factorial(cap) * pochhammer(mu.a1 + 2.0, l.k1))
        * hahn_sum
}

/// Builds the full unconstrained table over `Theta_M x Theta_M`.
///
/// Fill order: seed row `k = (0,0)` (including the `l1 = M` entry, which the
/// sweeps consume before they could produce it), then for each `k1` a
/// k2-direction sweep and a k1-direction sweep, mirroring the symmetric
/// entry after every computed one. Total work O(M^4).
pub fn e_table(cap: usize, mu: AlphaWeights) -> Result<UnconstrainedDualTable> {
    mu.validate()?;
    let size = theta_len(cap);
    let mut entries = vec![f64::NAN; size * size];
    let pos = |k: MultiIndex| theta_position(cap, k);
    let mf = cap as f64;

    // sigma/tau recurrence weights; the first factor vanishes exactly on
    // |t| = M and the second never does (mu_i > -1).
    let sigma0 = |t: MultiIndex| (t.total() as f64 - mf) * (t.k2 as f64 + mu.a2 + 1.0);
    let sigma2 = |t: MultiIndex| t.k2 as f64 * (t.total() as f64 - mu.a3 - mf - 1.0);
    let sigma1 = |t: MultiIndex| sigma0(t) + sigma2(t);
    let tau0 = |t: MultiIndex| (t.total() as f64 - mf) * (t.k1 as f64 + mu.a1 + 1.0);
    let tau2 = |t: MultiIndex| t.k1 as f64 * (t.total() as f64 - mu.a3 - mf - 1.0);
    let tau1 = |t: MultiIndex| tau0(t) + tau2(t);

    macro_rules! put {
        ($r:expr, $c:expr, $v:expr) => {{
            let v = $v;
            entries[pos($r) * size + pos($c)] = v;
            entries[pos($c) * size + pos($r)] = v;
        }};
    }
    macro_rules! get {
        ($r:expr, $c:expr) => {
            entries[pos($r) * size + pos($c)]
        };
    }

    // Seed row.
    for l1 in 0..=cap {
        for l2 in 0..=(cap - l1) {
            let l = MultiIndex::new(l1, l2);
            put!(MultiIndex::new(0, 0), l, e_seed_row(cap, mu, l));
        }
    }

    for k1 in 0..cap {
        // k2-direction sweep: row (k1, k2+1) from rows (k1, k2) and (k1, k2-1).
        for k2 in 0..(cap - k1) {
            let k = MultiIndex::new(k1, k2);
            let div = sigma0(k);
            debug_assert!(div != 0.0, "sigma0 vanished inside the sweep at {k}");
            let s1k = sigma1(k);
            let s2k = sigma2(k);
            for l1 in k1..=cap {
                for l2 in 0..=(cap - l1) {
                    let l = MultiIndex::new(l1, l2);
                    let mut num = (s1k - sigma1(l)) * get!(k, l);
                    if k2 > 0 {
                        num -= s2k * get!(MultiIndex::new(k1, k2 - 1), l);
                    }
                    if l.total() < cap {
                        num += sigma0(l) * get!(k, MultiIndex::new(l1, l2 + 1));
                    }
                    if l2 > 0 {
                        num += sigma2(l) * get!(k, MultiIndex::new(l1, l2 - 1));
                    }
                    put!(MultiIndex::new(k1, k2 + 1), l, num / div);
                }
            }
        }
        // k1-direction sweep: row (k1+1, 0) from rows (k1, 0) and (k1-1, 0).
        let k = MultiIndex::new(k1, 0);
        let div = tau0(k);
        debug_assert!(div != 0.0, "tau0 vanished inside the sweep at {k}");
        let t1k = tau1(k);
        let t2k = tau2(k);
        for l1 in (k1 + 1)..=cap {
            for l2 in 0..=(cap - l1) {
                let l = MultiIndex::new(l1, l2);
                let mut num = (t1k - tau1(l)) * get!(k, l);
                if k1 > 0 {
                    num -= t2k * get!(MultiIndex::new(k1 - 1, 0), l);
                }
                if l.total() < cap {
                    num += tau0(l) * get!(k, MultiIndex::new(l1 + 1, l2));
                }
                if l1 > 0 {
                    num += tau2(l) * get!(k, MultiIndex::new(l1 - 1, l2));
                }
                put!(MultiIndex::new(k1 + 1, 0), l, num / div);
            }
        }
    }

    debug_assert!(
        entries.iter().all(|v| v.is_finite()),
        "dual table fill left uncovered or non-finite entries"
    );
    if entries.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "dual table for M = {cap} produced non-finite entries"
        )));
    }
    Ok(UnconstrainedDualTable { cap, mu, entries })
}

/// Symmetric table of constrained dual-basis Bézier coefficients `E^k_l`
/// over `Omega^c_m x Omega^c_m`; equivalently the inverse of the constrained
/// Bernstein Gram matrix.
#[derive(Debug, Clone)]
pub struct ETable {
    m: usize,
    constraints: ConstraintVector,
    alpha: AlphaWeights,
    omega: Vec<MultiIndex>,
    entries: Vec<f64>,
}

impl ETable {
    pub fn degree(&self) -> usize {
        self.m
    }

    pub fn constraints(&self) -> ConstraintVector {
        self.constraints
    }

    pub fn alpha(&self) -> AlphaWeights {
        self.alpha
    }

    /// The index set `Omega^c_m` in lexicographic order.
    pub fn omega(&self) -> &[MultiIndex] {
        &self.omega
    }

    pub fn get(&self, k: MultiIndex, l: MultiIndex) -> f64 {
        let i = omega_position(self.m, self.constraints, k);
        let j = omega_position(self.m, self.constraints, l);
        self.entries[i * self.omega.len() + j]
    }

    /// Row-major entries over `omega() x omega()`.
    pub fn entries(&self) -> &[f64] {
        &self.entries
    }
}

/// Builds the constrained table for degree `m`, weight `alpha`, and
/// constraints `c` with `|c| < m`: `E^k_l = U V_k V_l e^(k-c')_(l-c')` with
/// `mu = alpha + 2c`, `M = m - |c|`.
pub fn dual_table(m: usize, alpha: AlphaWeights, c: ConstraintVector) -> Result<ETable> {
    alpha.validate()?;
    if c.total() >= m {
        return Err(Error::InvalidInput(format!(
            "constraints {c} require |c| < m, got |c| = {} with m = {m}",
            c.total()
        )));
    }
    let cap = m - c.total();
    let mu = AlphaWeights::new(
        alpha.a1 + 2.0 * c.c1 as f64,
        alpha.a2 + 2.0 * c.c2 as f64,
        alpha.a3 + 2.0 * c.c3 as f64,
    );
    let ancestor = e_table(cap, mu)?;
    let om = omega(m, c);
    let shifted: Vec<MultiIndex> = om
        .iter()
        .map(|k| MultiIndex::new(k.k1 - c.c1, k.k2 - c.c2))
        .collect();

    let n = om.len();
    let mut entries = vec![0.0; n * n];
    if m <= LOG_SPACE_DEGREE {
        let u = pochhammer(alpha.total() + 3.0, 2 * c.total())
            / (pochhammer(alpha.a1 + 1.0, 2 * c.c1)
                * pochhammer(alpha.a2 + 1.0, 2 * c.c2)
                * pochhammer(alpha.a3 + 1.0, 2 * c.c3));
        let v: Vec<f64> = om
            .iter()
            .zip(&shifted)
            .map(|(&h, &hs)| multinomial(cap, hs) / multinomial(m, h))
            .collect();
        for i in 0..n {
            for j in i..n {
                let val = u * v[i] * v[j] * ancestor.get(shifted[i], shifted[j]);
                entries[i * n + j] = val;
                entries[j * n + i] = val;
            }
        }
    } else {
        let ln_u = ln_pochhammer(alpha.total() + 3.0, 2 * c.total())
            - ln_pochhammer(alpha.a1 + 1.0, 2 * c.c1)
            - ln_pochhammer(alpha.a2 + 1.0, 2 * c.c2)
            - ln_pochhammer(alpha.a3 + 1.0, 2 * c.c3);
        let ln_multinomial = |deg: usize, k: MultiIndex| {
            ln_gamma(deg as f64 + 1.0)
                - ln_gamma(k.k1 as f64 + 1.0)
                - ln_gamma(k.k2 as f64 + 1.0)
                - ln_gamma((deg - k.total()) as f64 + 1.0)
        };
        let ln_v: Vec<f64> = om
            .iter()
            .zip(&shifted)
            .map(|(&h, &hs)| ln_multinomial(cap, hs) - ln_multinomial(m, h))
            .collect();
        for i in 0..n {
            for j in i..n {
                let e = ancestor.get(shifted[i], shifted[j]);
                let val = e.signum() * (ln_u + ln_v[i] + ln_v[j] + e.abs().ln()).exp();
                entries[i * n + j] = val;
                entries[j * n + i] = val;
            }
        }
    }

    Ok(ETable { m, constraints: c, alpha, omega: om, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::theta;
    use crate::jacobi::gram_entry;
    use approx::assert_relative_eq;

    /// max |T G - I| with G the Bernstein Gram matrix over the given index
    /// set; the duality identity makes this the defining check.
    fn duality_defect(
        m: usize,
        alpha: AlphaWeights,
        set: &[MultiIndex],
        table_get: impl Fn(MultiIndex, MultiIndex) -> f64,
    ) -> f64 {
        let mut worst: f64 = 0.0;
        for &k in set {
            for &h in set {
                let mut acc = 0.0;
                for &l in set {
                    acc += table_get(k, l) * gram_entry(m, alpha, l, h);
                }
                let expect = if k == h { 1.0 } else { 0.0 };
                worst = worst.max((acc - expect).abs());
            }
        }
        worst
    }

    #[test]
    fn trivial_table() {
        let t = e_table(0, AlphaWeights::UNIFORM).unwrap();
        assert_eq!(t.get(MultiIndex::new(0, 0), MultiIndex::new(0, 0)), 1.0);
    }

    #[test]
    fn seed_row_m1_hand_values() {
        // For M=1, mu=(0,0,0) the table is the inverse of (1/12)*(I + ones),
        // i.e. [[9,-3,-3],[-3,9,-3],[-3,-3,9]] in lexicographic order.
        let mu = AlphaWeights::UNIFORM;
        assert_relative_eq!(e_seed_row(1, mu, MultiIndex::new(0, 0)), 9.0, max_relative = 1e-13);
        assert_relative_eq!(e_seed_row(1, mu, MultiIndex::new(0, 1)), -3.0, max_relative = 1e-13);
        assert_relative_eq!(e_seed_row(1, mu, MultiIndex::new(1, 0)), -3.0, max_relative = 1e-13);
        let t = e_table(1, mu).unwrap();
        for &k in &theta(1) {
            for &l in &theta(1) {
                let expect = if k == l { 9.0 } else { -3.0 };
                assert_relative_eq!(t.get(k, l), expect, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn seed_coefficients_have_structural_length() {
        let mu = AlphaWeights::new(0.5, -0.25, 1.0);
        for cap in [1usize, 4, 9] {
            for l1 in 0..=cap {
                assert_eq!(seed_coefficients(cap, mu, l1).len(), cap - l1 + 1);
            }
        }
    }

    #[test]
    fn unconstrained_tables_invert_the_gram_matrix() {
        for (cap, mu, tol) in [
            (2usize, AlphaWeights::UNIFORM, 1e-10),
            (3, AlphaWeights::new(1.0, 0.0, 2.0), 1e-9),
            (5, AlphaWeights::CHEBYSHEV, 1e-9),
        ] {
            let t = e_table(cap, mu).unwrap();
            let defect = duality_defect(cap, mu, &theta(cap), |k, l| t.get(k, l));
            assert!(defect < tol, "M={cap}: defect {defect:.3e}");
        }
    }

    #[test]
    fn table_is_exactly_symmetric() {
        let t = e_table(4, AlphaWeights::new(-0.5, 1.5, 0.25)).unwrap();
        for &k in &theta(4) {
            for &l in &theta(4) {
                assert_eq!(t.get(k, l).to_bits(), t.get(l, k).to_bits());
            }
        }
    }

    #[test]
    fn constraint_free_reduction_is_exact() {
        let alpha = AlphaWeights::new(0.5, -0.5, 1.25);
        let m = 4;
        let et = dual_table(m, alpha, ConstraintVector::NONE).unwrap();
        let e = e_table(m, alpha).unwrap();
        for &k in et.omega() {
            for &l in et.omega() {
                assert_eq!(et.get(k, l), e.get(k, l));
            }
        }
    }

    #[test]
    fn constrained_tables_invert_the_constrained_gram() {
        for (m, c, alpha, tol) in [
            (3usize, ConstraintVector::new(1, 0, 1), AlphaWeights::UNIFORM, 1e-10),
            (5, ConstraintVector::new(1, 1, 1), AlphaWeights::CHEBYSHEV, 1e-9),
        ] {
            let et = dual_table(m, alpha, c).unwrap();
            let om = et.omega().to_vec();
            let defect = duality_defect(m, alpha, &om, |k, l| et.get(k, l));
            assert!(defect < tol, "m={m}, c={c}: defect {defect:.3e}");
        }
    }

    #[test]
    fn rejects_saturated_constraints() {
        assert!(dual_table(3, AlphaWeights::UNIFORM, ConstraintVector::new(2, 1, 0)).is_err());
    }

    #[test]
    fn log_space_path_matches_direct() {
        // Same instance through both code paths; values must agree to
        // rounding even though LOG_SPACE_DEGREE routes real calls by m.
        let m = 7;
        let c = ConstraintVector::new(1, 1, 1);
        let alpha = AlphaWeights::new(0.25, -0.5, 1.0);
        let direct = dual_table(m, alpha, c).unwrap();
        let cap = m - c.total();
        let mu = AlphaWeights::new(alpha.a1 + 2.0, alpha.a2 + 2.0, alpha.a3 + 2.0);
        let ancestor = e_table(cap, mu).unwrap();
        let ln_u = ln_pochhammer(alpha.total() + 3.0, 2 * c.total())
            - ln_pochhammer(alpha.a1 + 1.0, 2)
            - ln_pochhammer(alpha.a2 + 1.0, 2)
            - ln_pochhammer(alpha.a3 + 1.0, 2);
        for &k in direct.omega() {
            for &l in direct.omega() {
                let ks = MultiIndex::new(k.k1 - 1, k.k2 - 1);
                let ls = MultiIndex::new(l.k1 - 1, l.k2 - 1);
                let e = ancestor.get(ks, ls);
                let ln_v = |h: MultiIndex, hs: MultiIndex| {
                    (multinomial(cap, hs) / multinomial(m, h)).ln()
                };
                let logged = e.signum() * (ln_u + ln_v(k, ks) + ln_v(l, ls) + e.abs().ln()).exp();
                assert_relative_eq!(direct.get(k, l), logged, max_relative = 1e-10);
            }
        }
    }
}
