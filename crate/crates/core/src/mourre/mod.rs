//! Numerical verification of the positive-commutator (Mourre) estimates:
//! explicit constants ledger, disorder thresholds, empirical window
//! positivity on the 2D strip, the Dirichlet boundary functional and the
//! Kato-type norm bounds.

mod boundary;
mod constants;
mod cutoff;
mod kato;
mod positivity;

pub use boundary::{boundary_gamma, boundary_gamma_2d, BoundaryTrace};
pub use constants::{constants_ledger, disorder_threshold, ConstantsLedger};
pub use cutoff::CutoffSpec;
pub use kato::{kato_bounds_check, KatoRatios};
pub use positivity::{
    bounded_wall_positivity, commutator_positivity, commutator_positivity_ensemble,
    single_edge_grid, MourreConfig, MourreReport,
};
