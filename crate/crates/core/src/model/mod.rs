//! Shared model layer: units, sample geometries, edge potentials, grids and
//! spectral windows.

mod geometry;
mod grid;
mod potential;
mod units;
mod window;

pub use geometry::Geometry;
pub use grid::{Grid1d, Grid1dKind, Grid2d};
pub use potential::{DisorderSpec, EdgeProfile, PotentialSpec};
pub use units::Units;
pub use window::SpectralWindow;
