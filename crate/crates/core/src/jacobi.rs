//! The Jacobi-type weight on the standard triangle and the closed-form Gram
//! entries of the Bernstein basis under it.

use crate::error::{Error, Result};
use crate::gamma::{ln_gamma, pochhammer};
use crate::index::{multinomial, MultiIndex};

/// Weight exponents `(alpha1, alpha2, alpha3)`, each `> -1`, of
/// `w(x) = A x1^a1 x2^a2 (1-|x|)^a3` normalized so the weight integrates to 1
/// over the triangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaWeights {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

impl AlphaWeights {
    /// The uniform weight `w = 1`.
    pub const UNIFORM: Self = Self::new(0.0, 0.0, 0.0);

    /// The Chebyshev-like weight `(-1/2, -1/2, -1/2)`.
    pub const CHEBYSHEV: Self = Self::new(-0.5, -0.5, -0.5);

    pub const fn new(a1: f64, a2: f64, a3: f64) -> Self {
        Self { a1, a2, a3 }
    }

    /// `|alpha| = a1 + a2 + a3`.
    pub fn total(self) -> f64 {
        self.a1 + self.a2 + self.a3
    }

    pub fn validate(self) -> Result<()> {
        for (name, v) in [("alpha1", self.a1), ("alpha2", self.a2), ("alpha3", self.a3)] {
            if !(v > -1.0) || !v.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "{name} must be finite and > -1, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// Normalization constant `A = Gamma(|alpha|+3) / prod Gamma(alpha_i+1)`,
/// computed via log-gamma for stability.
pub fn normalization_constant(alpha: AlphaWeights) -> f64 {
    (ln_gamma(alpha.total() + 3.0)
        - ln_gamma(alpha.a1 + 1.0)
        - ln_gamma(alpha.a2 + 1.0)
        - ln_gamma(alpha.a3 + 1.0))
    .exp()
}

/// Inner product of two degree-`m` Bernstein basis polynomials under the
/// normalized weight:
///
/// `<B_h, B_l> = (m ch h)(m ch l) (a1+1)_{h1+l1} (a2+1)_{h2+l2} (a3+1)_{2m-|h|-|l|} / (|a|+3)_{2m}`.
pub fn gram_entry(m: usize, alpha: AlphaWeights, h: MultiIndex, l: MultiIndex) -> f64 {
    debug_assert!(h.in_theta(m) && l.in_theta(m));
    multinomial(m, h) * multinomial(m, l) * pochhammer(alpha.a1 + 1.0, h.k1 + l.k1)
        * pochhammer(alpha.a2 + 1.0, h.k2 + l.k2)
        * pochhammer(alpha.a3 + 1.0, 2 * m - h.total() - l.total())
        / pochhammer(alpha.total() + 3.0, 2 * m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn normalization_known_values() {
        // Gamma(3) = 2 for the uniform weight.
        assert_relative_eq!(normalization_constant(AlphaWeights::UNIFORM), 2.0, max_relative = 1e-14);
        // Gamma(3/2)/Gamma(1/2)^3 = 1/(2 pi).
        assert_relative_eq!(
            normalization_constant(AlphaWeights::CHEBYSHEV),
            1.0 / (2.0 * PI),
            max_relative = 1e-13
        );
    }

    #[test]
    fn gram_entry_small_cases() {
        let a0 = AlphaWeights::UNIFORM;
        let z = MultiIndex::new(0, 0);
        // m=1: <B_(0,0), B_(0,0)> = 2 * integral (1-x1-x2)^2 = 1/6.
        assert_relative_eq!(gram_entry(1, a0, z, z), 1.0 / 6.0, max_relative = 1e-14);
        // m=0: the weight integrates to one.
        assert_relative_eq!(gram_entry(0, a0, z, z), 1.0, max_relative = 1e-15);
        assert_relative_eq!(
            gram_entry(0, AlphaWeights::new(0.3, -0.5, 1.7), z, z),
            1.0,
            max_relative = 1e-15
        );
    }

    #[test]
    fn gram_entry_is_symmetric() {
        let alpha = AlphaWeights::new(0.25, -0.5, 2.0);
        for m in 1..=5 {
            for &h in &crate::index::theta(m) {
                for &l in &crate::index::theta(m) {
                    assert_eq!(gram_entry(m, alpha, h, l), gram_entry(m, alpha, l, h));
                }
            }
        }
    }

    #[test]
    fn rejects_bad_exponents() {
        assert!(AlphaWeights::new(-1.0, 0.0, 0.0).validate().is_err());
        assert!(AlphaWeights::new(0.0, f64::NAN, 0.0).validate().is_err());
        assert!(AlphaWeights::CHEBYSHEV.validate().is_ok());
    }
}
