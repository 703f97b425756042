//! Numerical spectral theory of two-dimensional magnetic Schrödinger
//! operators with confining edges: cylinder, half-plane (smooth wall and
//! Dirichlet wall) and Corbino disc geometries.
//!
//! The crate computes Landau-band dispersions, spectral flow under flux
//! insertion, chiral edge currents and the flux-averaged Hall conductivity,
//! positive-commutator (Mourre) estimates with an explicit constants ledger,
//! the magnetic free-resolvent kernel and its decay envelopes, and
//! reproducible random edge-disorder ensembles.
//!
//! Units everywhere: ħ = 1, m = 1/2, e = 1, so H = (p − A)² + V, the Landau
//! levels sit at (2n+1)B, the cyclotron energy is ω_c = 2B and the magnetic
//! length is ℓ_B = B^{-1/2}.

pub mod bands;
pub mod disorder;
pub mod error;
pub mod linalg;
pub mod model;
pub mod mourre;
pub mod resolvent;
pub mod transport;

pub use error::{Error, Result};
