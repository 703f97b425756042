//! Reproducible random disorder and almost-sure-spectrum checks.
//!
//! Fields are superpositions of Gaussian bumps at Poisson-sampled centers
//! with uniform amplitudes, clipped pointwise to [−δ, δ]. Regeneration from
//! (seed, parameters) is bit-identical: the generator is the documented
//! SplitMix64 stream and every draw order is fixed.

mod field;
mod inclusion;
mod rng;

pub use field::{DisorderField2d, DisorderProfile1d};
pub use inclusion::{
    first_inclusion_fraction, matched_perturbation_defect, spectrum_inclusion_check,
    InclusionReport,
};
pub use rng::SplitMix64;
