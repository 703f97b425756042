//! Spectral windows inside bulk gaps.

use crate::error::{Error, Result};
use crate::model::Units;

/// An energy window Δ ∋ E inside a gap of the bulk operator, together with
/// the gap distance η = dist(E, {(2n+1)B}) and the disorder bounds δ, δ', δ''.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralWindow {
    pub center: f64,
    pub half_width: f64,
    pub eta: f64,
    pub delta: f64,
    pub delta_prime: f64,
    pub delta_second: f64,
}

impl SpectralWindow {
    /// Construction fails unless η > δ, i.e. unless the window sits in a gap
    /// of the disordered bulk operator.
    pub fn new(units: &Units, center: f64, half_width: f64, delta: f64) -> Result<Self> {
        if !(half_width > 0.0) || !(delta >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "window needs half_width > 0 and delta >= 0; got {half_width}, {delta}"
            )));
        }
        let eta = units.gap_distance(center);
        if eta <= delta {
            return Err(Error::WindowNotInGap {
                lo: center - half_width,
                hi: center + half_width,
            });
        }
        Ok(SpectralWindow {
            center,
            half_width,
            eta,
            delta,
            delta_prime: 0.0,
            delta_second: 0.0,
        })
    }

    pub fn with_derivative_bounds(mut self, delta_prime: f64, delta_second: f64) -> Self {
        self.delta_prime = delta_prime;
        self.delta_second = delta_second;
        self
    }

    pub fn lo(&self) -> f64 {
        self.center - self.half_width
    }

    pub fn hi(&self) -> f64 {
        self.center + self.half_width
    }

    /// Full width |Δ|.
    pub fn width(&self) -> f64 {
        2.0 * self.half_width
    }

    pub fn contains(&self, e: f64) -> bool {
        e >= self.lo() && e <= self.hi()
    }
}
