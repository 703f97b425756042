//! Edge potential catalog and disorder parameters.
//!
//! Every catalog profile carries a closed-form first derivative; commutator
//! quantities use the analytic derivative, never a numerical difference of
//! the potential. Profiles are functions of the distance past the wall foot:
//! they vanish for t ≤ 0 and increase monotonically for t > 0.

use crate::error::{Error, Result};

/// Analytic edge wall profile V₀(t) with t measured from the wall foot.
#[derive(Clone, Debug, PartialEq)]
pub enum EdgeProfile {
    /// V₀ ≡ 0 (used with Dirichlet boundary conditions).
    Flat,
    /// strength · (t/scale)^exponent for t > 0.
    PowerLaw {
        exponent: f64,
        scale: f64,
        strength: f64,
    },
    /// strength · (e^{t/scale} − 1) for t > 0.
    Exponential { scale: f64, strength: f64 },
    /// Bounded wall: the base profile saturating smoothly toward `height`.
    /// Identical to the base below `knee · height`; above the knee the value
    /// is height-capped through v ↦ k + (E₀−k)·u/√(1+u²), which keeps
    /// V₀' ≥ 0 and sup V₀ = height.
    Saturating {
        base: Box<EdgeProfile>,
        height: f64,
        knee: f64,
    },
}

impl EdgeProfile {
    pub fn power_law(exponent: f64, scale: f64, strength: f64) -> Result<Self> {
        if !(exponent >= 1.0) || !(scale > 0.0) || !(strength > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "power-law wall needs exponent >= 1, scale > 0, strength > 0; got p={exponent}, a={scale}, s={strength}"
            )));
        }
        Ok(EdgeProfile::PowerLaw {
            exponent,
            scale,
            strength,
        })
    }

    pub fn exponential(scale: f64, strength: f64) -> Result<Self> {
        if !(scale > 0.0) || !(strength > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "exponential wall needs scale > 0 and strength > 0; got a={scale}, s={strength}"
            )));
        }
        Ok(EdgeProfile::Exponential { scale, strength })
    }

    pub fn saturating(base: EdgeProfile, height: f64, knee: f64) -> Result<Self> {
        if matches!(base, EdgeProfile::Flat | EdgeProfile::Saturating { .. }) {
            return Err(Error::InvalidParameter(
                "saturating wall needs an unbounded base profile".into(),
            ));
        }
        if !(height > 0.0) || !(0.0 < knee && knee < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "saturating wall needs height > 0 and knee in (0,1); got E0={height}, knee={knee}"
            )));
        }
        Ok(EdgeProfile::Saturating {
            base: Box::new(base),
            height,
            knee,
        })
    }

    /// Wall value at distance `t` past the foot.
    pub fn value(&self, t: f64) -> f64 {
        match self {
            EdgeProfile::Flat => 0.0,
            EdgeProfile::PowerLaw {
                exponent,
                scale,
                strength,
            } => {
                if t <= 0.0 {
                    0.0
                } else {
                    strength * (t / scale).powf(*exponent)
                }
            }
            EdgeProfile::Exponential { scale, strength } => {
                if t <= 0.0 {
                    0.0
                } else {
                    strength * ((t / scale).exp() - 1.0)
                }
            }
            EdgeProfile::Saturating { base, height, knee } => {
                let v = base.value(t);
                let k = knee * height;
                if v <= k {
                    v
                } else {
                    let u = (v - k) / (height - k);
                    k + (height - k) * u / (1.0 + u * u).sqrt()
                }
            }
        }
    }

    /// Closed-form derivative dV₀/dt.
    pub fn derivative(&self, t: f64) -> f64 {
        match self {
            EdgeProfile::Flat => 0.0,
            EdgeProfile::PowerLaw {
                exponent,
                scale,
                strength,
            } => {
                if t <= 0.0 {
                    0.0
                } else {
                    strength * exponent / scale * (t / scale).powf(exponent - 1.0)
                }
            }
            EdgeProfile::Exponential { scale, strength } => {
                if t <= 0.0 {
                    0.0
                } else {
                    strength / scale * (t / scale).exp()
                }
            }
            EdgeProfile::Saturating { base, height, knee } => {
                let v = base.value(t);
                let k = knee * height;
                if v <= k {
                    base.derivative(t)
                } else {
                    let u = (v - k) / (height - k);
                    base.derivative(t) * (1.0 + u * u).powf(-1.5)
                }
            }
        }
    }

    /// Smallest t ≥ 0 with V₀(t) = v (bisection on the monotone profile).
    /// For saturating walls `v` must stay below the height.
    pub fn inverse(&self, v: f64) -> Result<f64> {
        if v < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "wall values are nonnegative, cannot invert at {v}"
            )));
        }
        if v == 0.0 {
            return Ok(0.0);
        }
        if let Some(h) = self.height() {
            if v >= h {
                return Err(Error::WindowAboveWall {
                    energy: v,
                    height: h,
                });
            }
        }
        let mut hi = 1.0;
        while self.value(hi) < v {
            hi *= 2.0;
            if hi > 1e12 {
                return Err(Error::InvalidParameter(format!(
                    "profile never reaches {v}"
                )));
            }
        }
        let mut lo = 0.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.value(mid) < v {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// Saturation height E₀ for bounded walls.
    pub fn height(&self) -> Option<f64> {
        match self {
            EdgeProfile::Saturating { height, .. } => Some(*height),
            _ => None,
        }
    }

    /// Steepness length of the profile.
    pub fn edge_scale(&self) -> f64 {
        match self {
            EdgeProfile::Flat => f64::INFINITY,
            EdgeProfile::PowerLaw { scale, .. } | EdgeProfile::Exponential { scale, .. } => *scale,
            EdgeProfile::Saturating { base, .. } => base.edge_scale(),
        }
    }
}

/// Parameters of a reproducible random disorder field. The field itself is
/// regenerated deterministically from these values wherever it is needed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DisorderSpec {
    /// Uniform bound δ = sup|V_d| (enforced exactly by clipping).
    pub delta: f64,
    /// Correlation length of the Gaussian bumps.
    pub correlation_length: f64,
    /// Generator seed.
    pub seed: u64,
}

impl DisorderSpec {
    pub fn new(delta: f64, correlation_length: f64, seed: u64) -> Result<Self> {
        if !(delta >= 0.0) || !(correlation_length > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "disorder needs delta >= 0 and correlation length > 0; got {delta}, {correlation_length}"
            )));
        }
        Ok(DisorderSpec {
            delta,
            correlation_length,
            seed,
        })
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// Edge profile plus optional disorder.
#[derive(Clone, Debug, PartialEq)]
pub struct PotentialSpec {
    pub edge: EdgeProfile,
    pub disorder: Option<DisorderSpec>,
}

impl PotentialSpec {
    pub fn clean(edge: EdgeProfile) -> Self {
        PotentialSpec {
            edge,
            disorder: None,
        }
    }

    pub fn with_disorder(edge: EdgeProfile, disorder: DisorderSpec) -> Self {
        PotentialSpec {
            edge,
            disorder: Some(disorder),
        }
    }

    pub fn delta(&self) -> f64 {
        self.disorder.map_or(0.0, |d| d.delta)
    }
}
