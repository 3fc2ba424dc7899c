//! Bound states of the three-parameter short-range potential
//!
//! ```text
//! 2V(r)/λ² = A[coth(λr) − 1] − B/sinh²(λr) + C cosh(λr)/sinh³(λr)
//! ```
//!
//! computed with the tridiagonal representation approach: a Jacobi-polynomial
//! basis in `x = coth(λr)`, the three-term recursion for the expansion
//! coefficients, and a Gauss-quadrature Hamiltonian matrix in an
//! energy-independent basis whose generalized eigenvalues give the spectrum.
//!
//! Module map:
//!
//! * [`special`] Jacobi polynomials on `x ≥ 1`, signed log-gamma, basis normalization.
//! * [`potential`] the potential, the `r ↔ x` map and shape classification.
//! * [`tra`] recursion coefficients `F_n, D_n, G_n` and the polynomials `H_n`.
//! * [`hmd`] quadrature rule, Hamiltonian/overlap assembly, spectra, μ-plateau scans.
//! * [`solver`] named, runtime-selectable spectrum solvers and ν rules.
//! * [`wavefunction`] the finite-series bound-state wavefunctions.
//! * [`oracle`] brute-force adaptive integration of the matrix elements.
//! * [`linalg`] the small dense/tridiagonal eigen-machinery, generic over precision.

// `!(a < b)` is the NaN-rejecting form throughout; index loops mirror the
// textbook matrix algorithms.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod error;
pub mod hmd;
pub mod linalg;
pub mod oracle;
pub mod potential;
pub mod real;
pub mod solver;
pub mod special;
pub mod tra;
pub mod wavefunction;

pub use error::{Error, Result};
pub use hmd::{BoundSpectrum, PlateauScan, QuadratureRule};
pub use potential::{PotentialParams, ShapeReport};
pub use real::{DoubleDouble, Real};
pub use solver::{NuRule, NuRuleRegistry, SolverRegistry, SpectrumSolver};
pub use tra::{BasisParams, EnergyParams, RecursionCoeffs};
