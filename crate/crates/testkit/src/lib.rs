//! Brute-force oracles used only by tests.
//!
//! Everything here deliberately avoids the main crate's computational paths:
//! patches are evaluated by direct basis sums instead of de Casteljau,
//! inner products by tensorized Gauss-Jacobi quadrature instead of the
//! adaptive Chebyshev scheme, and least-squares solutions by assembling and
//! factoring the normal equations. Agreement between the two routes is the
//! point of the comparison.

pub mod gauss_jacobi;
pub mod oracle;

pub use gauss_jacobi::{gauss_jacobi_rule, DenseQuadratureRule, GaussJacobiRule};
pub use oracle::{
    bernstein_direct, cholesky_solve, hahn_hypergeometric, hahn_hypergeometric_exact,
    oracle_constrained_ls, oracle_degree_elevate, oracle_inner_product, rational_eval,
};
