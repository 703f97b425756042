//! Dirichlet boundary functional Γ_ψ = ∫ |∂_y ψ(x, 0)|² dx.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::EigenPair;
use crate::model::{Grid1d, Grid2d};

#[derive(Clone, Copy, Debug, Serialize)]
pub struct BoundaryTrace {
    pub gamma: f64,
}

/// Γ for a 1D Dirichlet channel profile (x-integration is trivial for a
/// normalized channel): |u'(0)|² with the second-order one-sided stencil
/// u'(0) ≈ (u_{N−2} − 4 u_{N−1}) / (2h), using u(0) = 0.
pub fn boundary_gamma(pair: &EigenPair, grid: &Grid1d) -> Result<BoundaryTrace> {
    if !grid.is_dirichlet_wall() {
        return Err(Error::WrongGeometry {
            expected: "half_plane_dirichlet",
        });
    }
    let n = grid.n;
    // continuum samples v = u / sqrt(h)
    let norm: f64 = pair.vector.iter().map(|u| u * u).sum();
    let scale = 1.0 / (norm * grid.h).sqrt();
    let v2 = pair.vector[n - 2] * scale;
    let v1 = pair.vector[n - 1] * scale;
    let du = (v2 - 4.0 * v1) / (2.0 * grid.h);
    Ok(BoundaryTrace { gamma: du * du })
}

/// Γ for a 2D eigenvector on a Dirichlet strip grid (y_max = 0):
/// Σ_i |∂_yψ(x_i, 0)|² hx with the same one-sided stencil per column.
pub fn boundary_gamma_2d(psi: &[Complex64], grid: &Grid2d) -> Result<BoundaryTrace> {
    if grid.y_max != 0.0 {
        return Err(Error::WrongGeometry {
            expected: "half_plane_dirichlet",
        });
    }
    let (nx, ny) = (grid.nx, grid.ny);
    let hy = grid.hy();
    let hx = grid.hx();
    let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
    // continuum density: |psi_cont|^2 = |psi_disc|^2 / (hx hy)
    let scale = 1.0 / (norm * hx * hy).sqrt();
    let mut gamma = 0.0;
    for ix in 0..nx {
        let top = psi[(ny - 1) * nx + ix] * scale;
        let below = psi[(ny - 2) * nx + ix] * scale;
        let du = (below - 4.0 * top) / (2.0 * hy);
        gamma += du.norm_sqr() * hx;
    }
    Ok(BoundaryTrace { gamma })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bands::channel_hamiltonian;
    use crate::model::{EdgeProfile, Geometry, PotentialSpec, Units};

    #[test]
    fn clean_dirichlet_mode_matches_half_oscillator_derivative() {
        // kappa = 0, n = 0, B = 1: normalized half-line oscillator mode has
        // |u'(0)|^2 = 4/sqrt(pi) (the N=8000 fine-grid oracle agrees with
        // the closed form)
        let u = Units::new(1.0).unwrap();
        let grid = Grid1d::dirichlet(-12.0, 8000).unwrap();
        let ch = channel_hamiltonian(
            &Geometry::HalfPlaneDirichlet,
            &PotentialSpec::clean(EdgeProfile::Flat),
            &u,
            0.0,
            &grid,
        )
        .unwrap();
        let pair = &ch.op.eigenpairs_in_window(2.9, 3.1).unwrap()[0];
        let g = boundary_gamma(pair, &grid).unwrap().gamma;
        let want = 4.0 / std::f64::consts::PI.sqrt();
        assert!(
            (g - want).abs() / want < 2e-3,
            "gamma {g} vs closed form {want}"
        );
    }

    #[test]
    fn bulk_state_has_negligible_boundary_trace() {
        let u = Units::new(1.0).unwrap();
        let grid = Grid1d::dirichlet(-16.0, 4000).unwrap();
        let ch = channel_hamiltonian(
            &Geometry::HalfPlaneDirichlet,
            &PotentialSpec::clean(EdgeProfile::Flat),
            &u,
            8.0, // guiding center at y = -8, far from the wall
            &grid,
        )
        .unwrap();
        let pair = &ch.op.eigenpairs_in_window(0.9, 1.1).unwrap()[0];
        let g = boundary_gamma(pair, &grid).unwrap().gamma;
        assert!(g < 1e-8, "bulk boundary trace {g}");
    }

    #[test]
    fn wrong_geometry_is_rejected() {
        let grid = Grid1d::line(-4.0, 2.0, 50).unwrap();
        let pair = EigenPair {
            energy: 1.0,
            vector: vec![0.1; 50],
            residual: 0.0,
        };
        assert!(matches!(
            boundary_gamma(&pair, &grid),
            Err(Error::WrongGeometry { .. })
        ));
    }
}
