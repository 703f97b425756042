//! Symmetric eigenproblem kernels: Sturm-sequence bisection with inverse
//! iteration for tridiagonal channel operators, a dense Jacobi solver for
//! oracle-size problems, and shift-invert Lanczos with a banded direct
//! factorization for the 2D magnetic stencil.

mod banded;
mod dense;
mod lanczos;
mod stencil;
mod tridiag;

pub use banded::BandedLu;
pub use dense::{jacobi_eigh, DenseSym};
pub use lanczos::{dense_eigh_2d, eig_sparse_window};
pub use stencil::{EigenPair2d, MagneticOperator2d};
pub use tridiag::{EigenPair, TridiagonalOperator};

/// Default residual tolerance for tridiagonal eigenpairs.
pub const TRIDIAG_RESIDUAL_TOL: f64 = 1e-9;
/// Default residual tolerance for 2D iterative eigenpairs.
pub const SPARSE_RESIDUAL_TOL: f64 = 1e-7;
