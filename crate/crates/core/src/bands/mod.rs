//! 1D channel Hamiltonians, band dispersions E_n(κ) and spectral flow in
//! the flux.

pub(crate) mod channel;
mod dispersion;
mod flow;

pub use channel::{channel_hamiltonian, corbino_u_substitution_channel, ChannelHamiltonian};
pub use dispersion::{dispersion, track_bands, DispersionTable};
pub use flow::{spectral_flow, FlowTable};
