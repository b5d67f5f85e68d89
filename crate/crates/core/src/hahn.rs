//! Hahn orthogonal polynomials `h_l(t; a, b, M)` via their three-term
//! recurrence, and Clenshaw summation of Hahn series.

use crate::error::{Error, Result};

/// Parameters `(a, b, M)` of a Hahn family; `a, b > -1`.
#[derive(Debug, Clone, Copy)]
pub struct HahnParams {
    pub a: f64,
    pub b: f64,
    /// The discrete support size parameter `M`.
    pub cap: usize,
}

impl HahnParams {
    pub fn new(a: f64, b: f64, cap: usize) -> Self {
        debug_assert!(a > -1.0 && b > -1.0);
        Self { a, b, cap }
    }

    fn s(&self) -> f64 {
        self.a + self.b + 1.0
    }

    /// Recurrence coefficients of `h_{l+1} = A_l(t) h_l + B_l h_{l-1}` in the
    /// split form `A_l(t) = K_l t - D_l - E_l`, `B_l = -D_l E_{l-1}`.
    ///
    /// The printed closed form of `C_l = (2l+s+1)/[(l+s)(2l+s-1)]` has a
    /// removable singularity at `l = 0` when `s` is 0 or 1; the products
    /// below carry the cancelled expressions, which are polynomial
    /// identities in `s`.
    fn split_coeffs(&self, l: usize) -> (f64, f64, f64) {
        let s = self.s();
        let lf = l as f64;
        let k = if l == 0 {
            s + 1.0
        } else {
            (2.0 * lf + s + 1.0) * (2.0 * lf + s) / (lf + s)
        };
        let d = if l == 0 {
            0.0
        } else {
            lf * (2.0 * lf + s + 1.0) * (lf + self.cap as f64 + s) * (lf + self.b)
                / ((lf + s) * (2.0 * lf + s - 1.0))
        };
        let e = (lf + self.a + 1.0) * (self.cap as f64 - lf);
        (k, d, e)
    }

    /// `A_l(t)` of the recurrence.
    fn a_coeff(&self, l: usize, t: f64) -> f64 {
        let (k, d, e) = self.split_coeffs(l);
        k * t - d - e
    }

    /// `B_l` of the recurrence.
    fn b_coeff(&self, l: usize) -> f64 {
        debug_assert!(l >= 1);
        let (_, d, _) = self.split_coeffs(l);
        let (_, _, e_prev) = self.split_coeffs(l - 1);
        -d * e_prev
    }
}

/// Evaluates `h_l(t; a, b, M)` by the forward recurrence, seeded with
/// `h_0 = 1`, `h_{-1} = 0`. Requires `l <= M`.
pub fn hahn_eval(l: usize, t: f64, p: &HahnParams) -> Result<f64> {
    if l > p.cap {
        return Err(Error::InvalidInput(format!(
            "Hahn degree l = {l} exceeds M = {}",
            p.cap
        )));
    }
    let mut prev = 0.0;
    let mut cur = 1.0;
    for i in 0..l {
        let next = p.a_coeff(i, t) * cur + if i == 0 { 0.0 } else { p.b_coeff(i) * prev };
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Sums `sum_i gamma_i h_i(t; a, b, M)` by Clenshaw's backward recurrence:
/// `V_i = gamma_i + A_i(t) V_{i+1} + B_{i+1} V_{i+2}`, result `V_0`.
/// Requires `len(gamma) - 1 <= M`.
pub fn clenshaw_hahn(coeffs: &[f64], t: f64, p: &HahnParams) -> Result<f64> {
    if coeffs.is_empty() {
        return Ok(0.0);
    }
    let n = coeffs.len() - 1;
    if n > p.cap {
        return Err(Error::InvalidInput(format!(
            "Hahn series length {} exceeds M + 1 = {}",
            coeffs.len(),
            p.cap + 1
        )));
    }
    let mut v1 = 0.0; // V_{i+1}
    let mut v2 = 0.0; // V_{i+2}
    for i in (0..=n).rev() {
        let v = coeffs[i] + p.a_coeff(i, t) * v1 + p.b_coeff(i + 1) * v2;
        v2 = v1;
        v1 = v;
    }
    Ok(v1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use rand::{Rng, SeedableRng};

    /// Independent oracle: the terminating hypergeometric sum
    /// `h_l = (a+1)_l (-M)_l 3F2(-l, l+s, -t; a+1, -M; 1)` with the prefactor
    /// folded into each term so no division by a vanishing factor occurs.
    /// Also returns the sum of term magnitudes: the alternating sum loses
    /// that much relative precision, and the agreement tolerance must not
    /// pretend otherwise.
    fn hahn_hypergeometric(l: usize, t: f64, a: f64, b: f64, m: usize) -> (f64, f64) {
        let s = a + b + 1.0;
        let poch = crate::gamma::pochhammer;
        let mut sum = 0.0;
        let mut magnitude = 0.0;
        for k in 0..=l {
            let kf = k as f64;
            let term = poch(-(l as f64), k) * poch(l as f64 + s, k) * poch(-t, k)
                * poch(a + 1.0 + kf, l - k)
                * poch(-(m as f64) + kf, l - k)
                / crate::gamma::factorial(k);
            sum += term;
            magnitude += term.abs();
        }
        (sum, magnitude)
    }

    #[test]
    fn recurrence_seed_and_linear_term() {
        let p = HahnParams::new(0.0, 0.0, 2);
        assert_eq!(hahn_eval(0, 0.37, &p).unwrap(), 1.0);
        // h_1(t) = (s+1) t - (a+1) M.
        for t in [0.0, 1.0, 2.3] {
            assert_relative_eq!(
                hahn_eval(1, t, &p).unwrap(),
                2.0 * t - 2.0,
                max_relative = 1e-14
            );
        }
        assert!(hahn_eval(3, 0.0, &p).is_err());
    }

    #[test]
    fn recurrence_matches_hypergeometric_sum() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(23);
        for _ in 0..60 {
            let a = rng.random_range(-0.9..3.0);
            let b = rng.random_range(-0.9..3.0);
            let m = rng.random_range(1..=16usize);
            let p = HahnParams::new(a, b, m);
            for l in 0..=m.min(12) {
                let t = rng.random_range(0.0..m as f64);
                let rec = hahn_eval(l, t, &p).unwrap();
                let (oracle, magnitude) = hahn_hypergeometric(l, t, a, b, m);
                let scale = oracle.abs().max(magnitude.min(1e6 * oracle.abs())).max(1.0);
                assert_abs_diff_eq!(rec, oracle, epsilon = 1e-11 * scale);
            }
        }
    }

    #[test]
    fn singular_parameter_combinations() {
        // s = 0 (a = b = -1/2) and s = 1 (a = b = 0) hit the removable
        // singularities of the printed C_l.
        for (a, b) in [(-0.5, -0.5), (0.0, 0.0)] {
            let m = 6;
            let p = HahnParams::new(a, b, m);
            for l in 0..=m {
                let t = 1.25;
                let (oracle, _) = hahn_hypergeometric(l, t, a, b, m);
                assert_relative_eq!(
                    hahn_eval(l, t, &p).unwrap(),
                    oracle,
                    max_relative = 1e-11,
                    epsilon = 1e-11
                );
            }
        }
    }

    #[test]
    fn clenshaw_reproduces_single_terms() {
        let p = HahnParams::new(0.3, -0.4, 9);
        // gamma = (1, 0, ..., 0) reproduces h_0 = 1.
        assert_eq!(clenshaw_hahn(&[1.0, 0.0, 0.0], 2.0, &p).unwrap(), 1.0);
        for j in 0..=9 {
            let mut unit = vec![0.0; j + 1];
            unit[j] = 1.0;
            for t in [0.0, 1.7, 4.2] {
                assert_abs_diff_eq!(
                    clenshaw_hahn(&unit, t, &p).unwrap(),
                    hahn_eval(j, t, &p).unwrap(),
                    epsilon = 1e-12 * hahn_eval(j, t, &p).unwrap().abs().max(1.0)
                );
            }
        }
    }

    #[test]
    fn clenshaw_matches_termwise_sum() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(41);
        for _ in 0..50 {
            let a = rng.random_range(-0.9..2.0);
            let b = rng.random_range(-0.9..2.0);
            let m = rng.random_range(8..=16usize);
            let p = HahnParams::new(a, b, m);
            let coeffs: Vec<f64> = (0..9).map(|_| rng.random_range(-1.0..1.0)).collect();
            let t = rng.random_range(0.0..m as f64);
            let direct: f64 = coeffs
                .iter()
                .enumerate()
                .map(|(i, &g)| g * hahn_eval(i, t, &p).unwrap())
                .sum();
            let clenshaw = clenshaw_hahn(&coeffs, t, &p).unwrap();
            let scale = direct.abs().max(1.0);
            assert_abs_diff_eq!(clenshaw, direct, epsilon = 1e-11 * scale);
        }
    }

    #[test]
    fn rejects_overlong_series() {
        let p = HahnParams::new(0.0, 0.0, 3);
        assert!(clenshaw_hahn(&[1.0; 5], 0.0, &p).is_err());
        assert!(clenshaw_hahn(&[1.0; 4], 0.0, &p).is_ok());
    }
}
