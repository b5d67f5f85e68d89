//! Best weighted-L2 polynomial approximation of rational triangular Bézier
//! patches with prescribed boundary control points.
//!
//! The pipeline has three legs:
//!
//! * [`dual`] builds the Bézier-form coefficient table of the constrained
//!   dual bivariate Bernstein basis by a seed-and-sweep recurrence scheme
//!   (Hahn polynomials seed the first row);
//! * [`quadrature`] computes the whole collection of weighted integrals of
//!   `B^{n+m}_j / omega` in one shared adaptive Chebyshev pass;
//! * [`approximator`] combines both into the best-approximation control
//!   net, keeping the prescribed boundary points bit for bit.
//!
//! [`constraints`] generates prescribed point sets for the two standard use
//! cases (boundary-curve reduction and C1 joins), and [`io`] owns the patch
//! file format used by the command-line front end.

pub mod approximator;
pub mod chebyshev;
pub mod constraints;
pub mod dual;
pub mod error;
pub mod gamma;
pub mod hahn;
pub mod index;
pub mod io;
pub mod jacobi;
pub mod patch;
pub mod quadrature;

pub use approximator::{
    approximate, compute_u, compute_v, error_max, weighted_l2_distance, ApproximationProblem,
    ApproximationResult,
};
pub use chebyshev::{cheb_interpolate, chebyshev_nodes, jacobi_cheb_integral, ChebyshevSeries};
pub use constraints::{
    boundary_constrained_ls, boundary_constraints, boundary_curves, c1_constraints, RationalCurve,
};
pub use dual::{dual_table, e_seed_row, e_table, ETable, UnconstrainedDualTable};
pub use error::{Error, Result};
pub use hahn::{clenshaw_hahn, hahn_eval, HahnParams};
pub use index::{
    binomial, index_sets, multinomial, omega, omega_len, omega_position, theta, theta_len,
    theta_position, ConstraintVector, IndexSets, MultiIndex,
};
pub use io::{
    format_patch, format_polynomial, format_rational, parse_patch, read_patch, write_patch_file,
    PatchData,
};
pub use jacobi::{gram_entry, normalization_constant, AlphaWeights};
pub use patch::{bernstein, PolynomialPatch, RationalPatch};
pub use quadrature::{
    integral_collection, jacobi_exponents, omega_star, omega_star_coeffs, weighted_inner_product,
    weighted_integral, IntegralCollection, JacobiExponents, QuadratureConfig, QuadratureReport,
};
