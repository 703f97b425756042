//! Special functions and the magnetic free-resolvent kernel, with decay
//! envelopes, eigenfunction decay fits and the Neumann-series bookkeeping.

mod decay;
mod kernel;
mod neumann;
mod special;
mod tricomi;

pub use decay::{decay_bound_check, eigenfunction_decay_fit, envelope, DecayFit, EnvelopeFit};
pub use kernel::{free_resolvent_kernel, landau_projection_kernel, ResolventParams};
pub use neumann::{neumann_tail, NeumannTail};
pub use special::{digamma, gamma, gamma_signed, laguerre, ln_gamma, EULER_GAMMA};
pub use tricomi::tricomi_psi;
