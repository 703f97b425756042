//! Sample geometries.
//!
//! Flux is stored in units of the flux quantum 2π/e = 2π, so inserting one
//! quantum is `flux_quanta + 1`. The channel parameter κ = l − Φ/2π is then
//! exact for dyadic flux grids, which makes the spectral-flow relabeling an
//! identity of bit-equal operators.

use crate::error::{Error, Result};

/// Sample geometry. Lengths are in the same units as the magnetic length.
#[derive(Clone, Debug, PartialEq)]
pub enum Geometry {
    /// Laughlin cylinder of radius `radius`; two mirrored edge walls with
    /// feet at y = ±length/2 confine the gas to |y| < length/2.
    Cylinder {
        radius: f64,
        length: f64,
        flux_quanta: f64,
    },
    /// Half plane with a smooth wall: bulk at y < 0, wall rising for y > 0.
    HalfPlaneEdge,
    /// Half plane y < 0 with a Dirichlet condition ψ(x, 0) = 0.
    HalfPlaneDirichlet,
    /// Corbino disc with an edge wall rising for r > edge_radius and a flux
    /// tube at the origin.
    Corbino { edge_radius: f64, flux_quanta: f64 },
}

impl Geometry {
    pub fn cylinder(radius: f64, length: f64, flux_quanta: f64) -> Result<Self> {
        if !(radius > 0.0) || !(length > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "cylinder needs positive radius and length, got R={radius}, L={length}"
            )));
        }
        Ok(Geometry::Cylinder {
            radius,
            length,
            flux_quanta,
        })
    }

    pub fn corbino(edge_radius: f64, flux_quanta: f64) -> Result<Self> {
        if !(edge_radius > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "corbino needs positive edge radius, got R={edge_radius}"
            )));
        }
        Ok(Geometry::Corbino {
            edge_radius,
            flux_quanta,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Geometry::Cylinder { .. } => "cylinder",
            Geometry::HalfPlaneEdge => "half_plane_edge",
            Geometry::HalfPlaneDirichlet => "half_plane_dirichlet",
            Geometry::Corbino { .. } => "corbino",
        }
    }

    /// Flux through the axis in flux quanta, for the geometries that carry one.
    pub fn flux_quanta(&self) -> Option<f64> {
        match self {
            Geometry::Cylinder { flux_quanta, .. } | Geometry::Corbino { flux_quanta, .. } => {
                Some(*flux_quanta)
            }
            _ => None,
        }
    }

    /// Physical flux Φ = 2π · flux_quanta (e = 1).
    pub fn flux(&self) -> Option<f64> {
        self.flux_quanta().map(|q| 2.0 * std::f64::consts::PI * q)
    }

    pub fn with_flux_quanta(&self, q: f64) -> Result<Self> {
        match self {
            Geometry::Cylinder { radius, length, .. } => Ok(Geometry::Cylinder {
                radius: *radius,
                length: *length,
                flux_quanta: q,
            }),
            Geometry::Corbino { edge_radius, .. } => Ok(Geometry::Corbino {
                edge_radius: *edge_radius,
                flux_quanta: q,
            }),
            _ => Err(Error::InvalidParameter(format!(
                "{} geometry carries no flux tube",
                self.name()
            ))),
        }
    }

    /// Gauge-invariant channel parameter κ = l − Φ/2π for angular momentum
    /// `l`; flux enters the channel operators nowhere else.
    pub fn kappa(&self, l: i64) -> Result<f64> {
        match self.flux_quanta() {
            Some(q) => Ok(l as f64 - q),
            None => Err(Error::InvalidParameter(format!(
                "{} geometry has no angular-momentum channels",
                self.name()
            ))),
        }
    }

    /// Position of the confining wall foot: the coordinate at which the edge
    /// profile starts rising (upper cylinder edge for the cylinder).
    pub fn wall_foot(&self) -> Option<f64> {
        match self {
            Geometry::Cylinder { length, .. } => Some(0.5 * length),
            Geometry::HalfPlaneEdge => Some(0.0),
            Geometry::HalfPlaneDirichlet => None,
            Geometry::Corbino { edge_radius, .. } => Some(*edge_radius),
        }
    }

    /// Guiding-center coordinate of channel κ: the minimum of the magnetic
    /// confinement term of the 1D channel operator.
    pub fn guiding_center(&self, units: &super::Units, kappa: f64) -> f64 {
        let b = units.b();
        match self {
            Geometry::HalfPlaneEdge | Geometry::HalfPlaneDirichlet => -kappa / b,
            Geometry::Cylinder { radius, .. } => -kappa / (b * radius),
            Geometry::Corbino { .. } => (2.0 * kappa.abs() / b).sqrt(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Units;

    #[test]
    fn flux_period_relabels_channels() {
        let g = Geometry::cylinder(5.0, 10.0, 0.25).unwrap();
        let shifted = g.with_flux_quanta(1.25).unwrap();
        for l in -4..5 {
            // one quantum maps l onto l-1
            assert_eq!(shifted.kappa(l).unwrap(), g.kappa(l - 1).unwrap());
        }
    }

    #[test]
    fn guiding_centers() {
        let u = Units::new(1.0).unwrap();
        let hp = Geometry::HalfPlaneEdge;
        assert_eq!(hp.guiding_center(&u, 2.0), -2.0);
        let co = Geometry::corbino(8.0, 0.0).unwrap();
        assert!((co.guiding_center(&u, 5.0) - 10.0f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn half_plane_has_no_flux() {
        assert!(Geometry::HalfPlaneEdge.flux_quanta().is_none());
        assert!(Geometry::HalfPlaneDirichlet.with_flux_quanta(1.0).is_err());
    }
}
