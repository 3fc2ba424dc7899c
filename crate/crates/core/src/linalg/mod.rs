//! Dense square matrices, symmetric eigen-decompositions and Cholesky
//! reduction, all generic over [`Real`](crate::Real).

mod cholesky;
mod eigen;
mod matrix;

pub use cholesky::Cholesky;
pub use eigen::{symmetric_eigen, SymTridiagonal, SymmetricEigen, MAX_SWEEPS_PER_EIGENVALUE};
pub use matrix::Matrix;
