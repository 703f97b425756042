//! Unit convention and bulk Landau spectrum.
//!
//! Fixed convention ħ = 1, m = 1/2, e = 1. The only free scale is the
//! magnetic field strength B. The cyclotron energy ω_c = 2B is exposed
//! through an accessor and never stored, so the canonical Landau energies
//! are always written as (2n+1)B.

use crate::error::{Error, Result};

/// Magnetic field strength plus the fixed ħ = 1, m = 1/2, e = 1 convention.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Units {
    b: f64,
}

impl Units {
    pub fn new(b: f64) -> Result<Self> {
        if !(b > 0.0) || !b.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "magnetic field must be positive and finite, got {b}"
            )));
        }
        Ok(Units { b })
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// Magnetic length ℓ_B = B^{-1/2}.
    pub fn magnetic_length(&self) -> f64 {
        1.0 / self.b.sqrt()
    }

    /// Cyclotron energy ω_c = eB/m = 2B.
    pub fn cyclotron_energy(&self) -> f64 {
        2.0 * self.b
    }

    /// n-th Landau level (2n+1)B.
    pub fn landau_level(&self, n: usize) -> f64 {
        (2 * n + 1) as f64 * self.b
    }

    /// Same level written as (n + 1/2)ω_c; agrees bitwise with
    /// [`Units::landau_level`].
    pub fn landau_level_half_convention(&self, n: usize) -> f64 {
        (n as f64 + 0.5) * self.cyclotron_energy()
    }

    /// Distance from `e` to the bulk Landau set {(2n+1)B, n ≥ 0}.
    pub fn gap_distance(&self, e: f64) -> f64 {
        let mut best = (e - self.b).abs();
        let guess = ((e / self.b - 1.0) / 2.0).round().max(0.0) as usize;
        for n in guess.saturating_sub(1)..=guess + 1 {
            best = best.min((e - self.landau_level(n)).abs());
        }
        best
    }
}
