//! Finite-difference grids.
//!
//! 1D line grids hold the interior nodes of [y_min, y_max] with hard
//! Dirichlet conditions at both truncation ends; the Dirichlet-wall geometry
//! is the special case y_max = 0 with the boundary node excluded. Radial
//! grids are cell-centered, r_i = (i + 1/2)h, so the zero-flux face at r = 0
//! encodes regularity at the origin.

use crate::error::{Error, Result};
use crate::model::Units;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Grid1dKind {
    Line { y_min: f64, y_max: f64 },
    Radial { r_max: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Grid1d {
    pub kind: Grid1dKind,
    pub n: usize,
    pub h: f64,
}

impl Grid1d {
    /// Interior nodes of [y_min, y_max], spacing h = span/(n+1).
    pub fn line(y_min: f64, y_max: f64, n: usize) -> Result<Self> {
        if !(y_max > y_min) || n < 2 {
            return Err(Error::InvalidParameter(format!(
                "line grid needs y_max > y_min and n >= 2; got [{y_min}, {y_max}], n={n}"
            )));
        }
        Ok(Grid1d {
            kind: Grid1dKind::Line { y_min, y_max },
            n,
            h: (y_max - y_min) / (n + 1) as f64,
        })
    }

    /// Dirichlet-wall grid: y_max = 0, the boundary node is excluded.
    pub fn dirichlet(y_min: f64, n: usize) -> Result<Self> {
        Self::line(y_min, 0.0, n)
    }

    /// Cell-centered radial grid on (0, r_max], r_i = (i + 1/2)h.
    pub fn radial(r_max: f64, n: usize) -> Result<Self> {
        if !(r_max > 0.0) || n < 2 {
            return Err(Error::InvalidParameter(format!(
                "radial grid needs r_max > 0 and n >= 2; got {r_max}, n={n}"
            )));
        }
        Ok(Grid1d {
            kind: Grid1dKind::Radial { r_max },
            n,
            h: r_max / n as f64,
        })
    }

    pub fn point(&self, i: usize) -> f64 {
        debug_assert!(i < self.n);
        match self.kind {
            Grid1dKind::Line { y_min, .. } => y_min + (i + 1) as f64 * self.h,
            Grid1dKind::Radial { .. } => (i as f64 + 0.5) * self.h,
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.point(i)).collect()
    }

    pub fn is_radial(&self) -> bool {
        matches!(self.kind, Grid1dKind::Radial { .. })
    }

    pub fn is_dirichlet_wall(&self) -> bool {
        matches!(self.kind, Grid1dKind::Line { y_max, .. } if y_max == 0.0)
    }

    pub fn y_min(&self) -> f64 {
        match self.kind {
            Grid1dKind::Line { y_min, .. } => y_min,
            Grid1dKind::Radial { .. } => 0.0,
        }
    }

    pub fn y_max(&self) -> f64 {
        match self.kind {
            Grid1dKind::Line { y_max, .. } => y_max,
            Grid1dKind::Radial { r_max } => r_max,
        }
    }

    /// Truncation-depth invariant: the lower boundary must sit at least
    /// `margin_lengths` magnetic lengths below the deepest guiding center in
    /// use, so the truncation error stays below eigensolver tolerance.
    pub fn check_depth(&self, units: &Units, deepest_center: f64, margin_lengths: f64) -> Result<()> {
        let need = deepest_center - margin_lengths * units.magnetic_length();
        if self.y_min() > need {
            return Err(Error::GridMismatch(format!(
                "lower boundary {:.3} too shallow: guiding center {:.3} needs y_min <= {:.3}",
                self.y_min(),
                deepest_center,
                need
            )));
        }
        Ok(())
    }
}

/// Periodic-strip grid for the 2D cylinder operator: x around the
/// circumference 2πR with n_x nodes, y the interior nodes of [y_min, y_max].
/// Sites are indexed x-fastest: `idx = iy * nx + ix`.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid2d {
    pub nx: usize,
    pub ny: usize,
    pub circumference: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Grid2d {
    pub fn new(nx: usize, ny: usize, circumference: f64, y_min: f64, y_max: f64) -> Result<Self> {
        if nx < 3 || ny < 3 || !(circumference > 0.0) || !(y_max > y_min) {
            return Err(Error::InvalidParameter(format!(
                "2d grid needs nx, ny >= 3, positive circumference and y_max > y_min; got {nx}x{ny}, C={circumference}, [{y_min}, {y_max}]"
            )));
        }
        Ok(Grid2d {
            nx,
            ny,
            circumference,
            y_min,
            y_max,
        })
    }

    pub fn hx(&self) -> f64 {
        self.circumference / self.nx as f64
    }

    pub fn hy(&self) -> f64 {
        (self.y_max - self.y_min) / (self.ny + 1) as f64
    }

    pub fn x(&self, ix: usize) -> f64 {
        ix as f64 * self.hx()
    }

    pub fn y(&self, iy: usize) -> f64 {
        self.y_min + (iy + 1) as f64 * self.hy()
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, ix: usize, iy: usize) -> usize {
        iy * self.nx + ix
    }

    /// The discrete x-kinetic term is periodic in y with period 2π/(B hx);
    /// a grid taller than that period aliases deep channels back into the
    /// domain and can seed spurious gap states at the lower truncation
    /// boundary. Single-edge spectral work must respect this bound.
    pub fn check_no_channel_alias(&self, units: &Units) -> Result<()> {
        let period = 2.0 * std::f64::consts::PI / (units.b() * self.hx());
        let extent = self.y_max - self.y_min;
        if extent >= period {
            return Err(Error::GridMismatch(format!(
                "y-extent {extent:.3} >= magnetic x-hopping period {period:.3}; shrink hx or the domain"
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_grid_excludes_boundaries() {
        let g = Grid1d::line(-1.0, 1.0, 3).unwrap();
        assert_eq!(g.h, 0.5);
        assert_eq!(g.points(), vec![-0.5, 0.0, 0.5]);
    }

    #[test]
    fn dirichlet_grid_ends_one_step_below_zero() {
        let g = Grid1d::dirichlet(-2.0, 19).unwrap();
        assert!(g.is_dirichlet_wall());
        assert!((g.point(18) + g.h).abs() < 1e-15);
    }

    #[test]
    fn radial_grid_is_cell_centered() {
        let g = Grid1d::radial(1.0, 4).unwrap();
        assert_eq!(g.points(), vec![0.125, 0.375, 0.625, 0.875]);
    }

    #[test]
    fn depth_check() {
        let u = Units::new(1.0).unwrap();
        let g = Grid1d::line(-10.0, 2.0, 100).unwrap();
        assert!(g.check_depth(&u, -1.0, 8.0).is_ok());
        assert!(g.check_depth(&u, -3.0, 8.0).is_err());
    }

    #[test]
    fn grid2d_indexing_is_x_fastest() {
        let g = Grid2d::new(8, 4, 8.0, -2.0, 2.0).unwrap();
        assert_eq!(g.index(3, 2), 19);
        assert_eq!(g.hx(), 1.0);
    }
}
