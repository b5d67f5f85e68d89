//! Multi-index combinatorics over the triangular index sets.
//!
//! Everything in this crate enumerates bivariate indices lexicographically:
//! `k1` ascending, then `k2` ascending. File formats and table layouts use
//! the same order.

use std::fmt;
use std::ops::Add;

use crate::error::{Error, Result};

/// Pair `(k1, k2)` of nonnegative integers indexing a Bernstein coefficient
/// over a triangle. `|k| = k1 + k2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex {
    pub k1: usize,
    pub k2: usize,
}

impl MultiIndex {
    pub const fn new(k1: usize, k2: usize) -> Self {
        Self { k1, k2 }
    }

    /// `|k| = k1 + k2`.
    pub const fn total(self) -> usize {
        self.k1 + self.k2
    }

    /// Membership in `Theta_n`.
    pub const fn in_theta(self, n: usize) -> bool {
        self.total() <= n
    }
}

impl Add for MultiIndex {
    type Output = MultiIndex;

    fn add(self, rhs: MultiIndex) -> MultiIndex {
        MultiIndex::new(self.k1 + rhs.k1, self.k2 + rhs.k2)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.k1, self.k2)
    }
}

/// Constraint parameter vector `(c1, c2, c3)`; `|c| < m` whenever paired with
/// a degree `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ConstraintVector {
    pub c1: usize,
    pub c2: usize,
    pub c3: usize,
}

impl ConstraintVector {
    /// The unconstrained case `(0, 0, 0)`.
    pub const NONE: Self = Self::new(0, 0, 0);

    pub const fn new(c1: usize, c2: usize, c3: usize) -> Self {
        Self { c1, c2, c3 }
    }

    /// `|c| = c1 + c2 + c3`.
    pub const fn total(self) -> usize {
        self.c1 + self.c2 + self.c3
    }

    /// Membership of `k` in `Omega^c_n = {k : k1 >= c1, k2 >= c2, |k| <= n - c3}`.
    pub fn admits(self, n: usize, k: MultiIndex) -> bool {
        k.k1 >= self.c1 && k.k2 >= self.c2 && k.total() + self.c3 <= n
    }
}

impl fmt::Display for ConstraintVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.c1, self.c2, self.c3)
    }
}

/// `|Theta_n| = (n+1)(n+2)/2`.
pub const fn theta_len(n: usize) -> usize {
    (n + 1) * (n + 2) / 2
}

/// `Theta_n` in lexicographic order.
pub fn theta(n: usize) -> Vec<MultiIndex> {
    let mut out = Vec::with_capacity(theta_len(n));
    for k1 in 0..=n {
        for k2 in 0..=(n - k1) {
            out.push(MultiIndex::new(k1, k2));
        }
    }
    out
}

/// Position of `k` in the lexicographic enumeration of `Theta_n`.
pub fn theta_position(n: usize, k: MultiIndex) -> usize {
    debug_assert!(k.in_theta(n), "{k} outside Theta_{n}");
    // Rows k1 = 0..k.k1 have lengths n+1, n, ...
    k.k1 * (n + 1) - k.k1 * (k.k1.wrapping_sub(1)) / 2 + k.k2
}

/// `|Omega^c_n|` for `|c| <= n`.
pub const fn omega_len(n: usize, c: ConstraintVector) -> usize {
    theta_len(n - c.total())
}

/// Position of `k` in the lexicographic enumeration of `Omega^c_n`.
///
/// `Omega^c_n` is `Theta_{n-|c|}` shifted by `(c1, c2)`, and the shift is
/// monotone in the lexicographic order.
pub fn omega_position(n: usize, c: ConstraintVector, k: MultiIndex) -> usize {
    debug_assert!(c.admits(n, k), "{k} outside Omega^{c}_{n}");
    theta_position(
        n - c.total(),
        MultiIndex::new(k.k1 - c.c1, k.k2 - c.c2),
    )
}

/// `Omega^c_n` in lexicographic order.
pub fn omega(n: usize, c: ConstraintVector) -> Vec<MultiIndex> {
    theta(n - c.total())
        .into_iter()
        .map(|k| MultiIndex::new(k.k1 + c.c1, k.k2 + c.c2))
        .collect()
}

/// The partition `Theta_n = Omega^c_n ∪ Gamma^c_n` with all three sets in
/// lexicographic order.
#[derive(Debug, Clone)]
pub struct IndexSets {
    pub theta: Vec<MultiIndex>,
    pub omega: Vec<MultiIndex>,
    pub gamma: Vec<MultiIndex>,
}

/// Builds the index sets for degree `n` and constraints `c`. Requires `|c| < n`.
pub fn index_sets(n: usize, c: ConstraintVector) -> Result<IndexSets> {
    if c.total() >= n {
        return Err(Error::InvalidInput(format!(
            "constraints {c} require |c| < n, got |c| = {} with n = {n}",
            c.total()
        )));
    }
    let theta = theta(n);
    let mut omega = Vec::with_capacity(omega_len(n, c));
    let mut gamma = Vec::new();
    for &k in &theta {
        if c.admits(n, k) {
            omega.push(k);
        } else {
            gamma.push(k);
        }
    }
    Ok(IndexSets { theta, omega, gamma })
}

/// Binomial coefficient as a float; exact below 2^53.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 1..=k {
        acc *= (n - k + i) as f64;
        acc /= i as f64;
    }
    acc
}

/// Trinomial coefficient `(n choose k) = n! / (k1! k2! (n-|k|)!)`.
pub fn multinomial(n: usize, k: MultiIndex) -> f64 {
    debug_assert!(k.in_theta(n));
    binomial(n, k.k1) * binomial(n - k.k1, k.k2)
}
