//! Edge currents, virial consistency, Hall conductivity and the Corbino
//! azimuthal current decomposition.
//!
//! Two independent routes to the azimuthal current are kept side by side:
//! the flux derivative I = −dE/dΦ and the guiding-center (commutator) form
//! I = −⟨ψ, ∂_yV ψ⟩/(2πBR); the virial theorem makes them agree for
//! eigenstates, and the discrepancy is tracked per state.

use num_complex::Complex64;
use serde::Serialize;

use crate::bands::{channel_hamiltonian, ChannelHamiltonian, FlowTable};
use crate::error::{Error, Result};
use crate::linalg::{EigenPair, EigenPair2d, MagneticOperator2d, TridiagonalOperator};
use crate::model::{Geometry, Grid1d, PotentialSpec, SpectralWindow, Units};

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Per-state current report: both routes and their discrepancy.
#[derive(Clone, Debug, Serialize)]
pub struct CurrentReport {
    pub n: usize,
    pub l: i64,
    pub phi_quanta: f64,
    pub i_flux_derivative: f64,
    pub i_commutator: f64,
    pub discrepancy: f64,
}

/// Extremal scaled flux derivatives over the edge states of a window.
#[derive(Clone, Debug, Serialize)]
pub struct HawBounds {
    pub window_lo: f64,
    pub window_hi: f64,
    /// max over edge states of R · dE/dΦ
    pub c_upper: f64,
    /// min over edge states of R · dE/dΦ
    pub c_lower: f64,
    pub n_edge_states: usize,
}

/// Flux-averaged Hall response.
#[derive(Clone, Debug, Serialize)]
pub struct HallReport {
    pub nu_estimate: f64,
    /// σ_H in units of e²/2π (same number as nu_estimate)
    pub sigma: f64,
    pub r: f64,
    pub mu_left: f64,
    pub mu_right: f64,
    pub bands_filled: usize,
    /// per band: |E at the left/right crossing − μ| at Φ = 0
    pub residuals: Vec<[f64; 2]>,
}

/// Terms of the Corbino azimuthal current identity.
#[derive(Clone, Debug, Serialize)]
pub struct CorbinoDecomposition {
    /// ⟨ψ, ∂_r V/(2πBr) ψ⟩
    pub t1: f64,
    /// (2/2πB) ‖(1/r) ∂_r ψ‖² (always ≥ 0)
    pub t2: f64,
    /// −(1/2πB) ⟨ψ, (2/r²)(p−A)²_φ ψ⟩
    pub t3: f64,
    /// direct current ⟨ψ, (2/2πr)(p−A)_φ ψ⟩
    pub direct: f64,
    pub defect: f64,
}

/// Current of state (n, l) from the flux derivative, central difference with
/// the given step (both in flux quanta): I = −dE/dΦ.
pub fn edge_current_fh(
    table: &FlowTable,
    n: usize,
    l: i64,
    phi_quanta: f64,
    step_quanta: f64,
) -> Result<f64> {
    if !(step_quanta > 0.0) {
        return Err(Error::InvalidParameter("step must be positive".into()));
    }
    if phi_quanta - step_quanta < -1e-12 || phi_quanta + step_quanta > 1.0 + 1e-12 {
        return Err(Error::OutOfTable {
            phi_quanta: phi_quanta + step_quanta,
        });
    }
    let ep = table
        .energy_at_quanta(n, l, phi_quanta + step_quanta)
        .ok_or(Error::OutOfTable {
            phi_quanta: phi_quanta + step_quanta,
        })?;
    let em = table
        .energy_at_quanta(n, l, phi_quanta - step_quanta)
        .ok_or(Error::OutOfTable {
            phi_quanta: phi_quanta - step_quanta,
        })?;
    Ok(-(ep - em) / (2.0 * step_quanta * TWO_PI))
}

/// Commutator (guiding-center) form of the azimuthal current for a cylinder
/// channel eigenstate: I = −⟨ψ, ∂_yV ψ⟩ / (2πBR).
pub fn edge_current_commutator(
    ch: &ChannelHamiltonian,
    pair: &EigenPair,
    pot: &PotentialSpec,
) -> Result<f64> {
    let Geometry::Cylinder { radius, .. } = ch.geometry else {
        return Err(Error::WrongGeometry {
            expected: "cylinder",
        });
    };
    let b = ch.units.b();
    let mut acc = 0.0;
    let mut nrm = 0.0;
    for (i, &u) in pair.vector.iter().enumerate() {
        acc += ch.potential_derivative(pot, i) * u * u;
        nrm += u * u;
    }
    Ok(-acc / nrm / (TWO_PI * b * radius))
}

/// Virial residual |⟨ψ, [H, i p_y] ψ⟩| for a 1D channel eigenpair, computed
/// through the discrete identity [T, D] with the antisymmetric central
/// difference D, so a converged eigenpair scores at the residual level.
pub fn virial_residual_1d(op: &TridiagonalOperator, pair: &EigenPair) -> f64 {
    let n = op.n();
    let u = &pair.vector;
    let du = central_difference(u);
    let mut t_du = vec![0.0; n];
    op.matvec(&du, &mut t_du);
    let mut t_u = vec![0.0; n];
    op.matvec(u, &mut t_u);
    let d_tu = central_difference(&t_u);
    let mut acc = 0.0;
    for i in 0..n {
        acc += u[i] * (t_du[i] - d_tu[i]);
    }
    acc.abs()
}

/// Same discrete-commutator virial for a 2D eigenpair, with D = central
/// difference in y.
pub fn virial_residual_2d(op: &MagneticOperator2d, pair: &EigenPair2d) -> f64 {
    let psi = &pair.vector;
    let dy = central_difference_y(op, psi);
    let mut h_dy = vec![Complex64::new(0.0, 0.0); psi.len()];
    op.matvec(&dy, &mut h_dy);
    let mut h_psi = vec![Complex64::new(0.0, 0.0); psi.len()];
    op.matvec(psi, &mut h_psi);
    let dy_h = central_difference_y(op, &h_psi);
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..psi.len() {
        acc += psi[i].conj() * (h_dy[i] - dy_h[i]);
    }
    acc.norm()
}

fn central_difference(u: &[f64]) -> Vec<f64> {
    let n = u.len();
    let mut d = vec![0.0; n];
    for i in 0..n {
        let up = if i + 1 < n { u[i + 1] } else { 0.0 };
        let um = if i > 0 { u[i - 1] } else { 0.0 };
        d[i] = 0.5 * (up - um);
    }
    d
}

fn central_difference_y(op: &MagneticOperator2d, psi: &[Complex64]) -> Vec<Complex64> {
    let (nx, ny) = (op.grid.nx, op.grid.ny);
    let mut d = vec![Complex64::new(0.0, 0.0); psi.len()];
    for iy in 0..ny {
        for ix in 0..nx {
            let idx = iy * nx + ix;
            let up = if iy + 1 < ny {
                psi[idx + nx]
            } else {
                Complex64::new(0.0, 0.0)
            };
            let dn = if iy > 0 {
                psi[idx - nx]
            } else {
                Complex64::new(0.0, 0.0)
            };
            d[idx] = 0.5 * (up - dn);
        }
    }
    d
}

/// Flux-averaged Hall conductivity in units of e²/2π.
///
/// Occupation follows the flow-table protocol: at Φ = 0 each band is filled
/// between the chemical-potential crossings at the two edges; the current of
/// every occupied state is averaged over one flux period with the requested
/// number of trapezoid nodes (the integrand is periodic, so the average
/// telescopes exactly).
pub fn hall_conductivity(
    geom: &Geometry,
    pot: &PotentialSpec,
    units: &Units,
    grid: &Grid1d,
    mu_left: f64,
    mu_right: f64,
    phi_nodes: usize,
) -> Result<HallReport> {
    let Geometry::Cylinder { radius, .. } = geom else {
        return Err(Error::WrongGeometry {
            expected: "cylinder",
        });
    };
    if !(mu_left < mu_right) {
        return Err(Error::InvalidParameter(
            "need mu_left < mu_right".into(),
        ));
    }
    let b = units.b();
    // both chemical potentials must lie in the same bulk gap
    let gap_index = |e: f64| -> Result<usize> {
        let m = ((e / b - 1.0) / 2.0).floor();
        if m < 0.0 || units.gap_distance(e) < 0.02 * b {
            return Err(Error::WindowNotInGap { lo: e, hi: e });
        }
        Ok(m as usize)
    };
    let gl = gap_index(mu_left)?;
    let gr = gap_index(mu_right)?;
    if gl != gr {
        return Err(Error::WindowNotInGap {
            lo: mu_left,
            hi: mu_right,
        });
    }
    let nu = gl + 1; // Landau levels below the Fermi window

    let solve = |kappa: f64, n_ev: usize| -> Result<Vec<f64>> {
        let ch = channel_hamiltonian(geom, pot, units, kappa, grid)?;
        Ok(ch.op.lowest_eigenvalues(n_ev))
    };

    let m_nodes = phi_nodes.max(2);
    let mut total_current = 0.0;
    let mut residuals = Vec::with_capacity(nu);

    for n in 0..nu {
        // locate the occupied l-range at Phi = 0: E_n(kappa = l)
        let e_at = |l: i64| -> Result<f64> { Ok(solve(l as f64, n + 1)?[n]) };
        let e0 = e_at(0)?;
        if e0 > mu_left {
            return Err(Error::InvalidParameter(format!(
                "band {n} is above mu_left at the band center; grid or potential misconfigured"
            )));
        }
        // large positive l: guiding center toward the lower wall (left edge)
        let mut l_max = 0i64;
        while e_at(l_max + 1)? <= mu_left {
            l_max += 1;
            if l_max > 1_000_000 {
                return Err(Error::NonConvergence { index: n });
            }
        }
        let mut l_min = 0i64;
        while e_at(l_min - 1)? <= mu_right {
            l_min -= 1;
            if l_min < -1_000_000 {
                return Err(Error::NonConvergence { index: n });
            }
        }
        l_min -= 1; // first excluded channel on the right edge
        residuals.push([
            (e_at(l_max)? - mu_left).abs(),
            (e_at(l_min)? - mu_right).abs(),
        ]);

        // flux-averaged current of the occupied block, trapezoid over one
        // period: solve E_n on the kappa grid {l - m/M}
        use rayon::prelude::*;
        let kappas: Vec<f64> = ((l_min)..=(l_max + 1))
            .flat_map(|l| (0..m_nodes).map(move |m| l as f64 - m as f64 / m_nodes as f64))
            .collect();
        let energies: Vec<f64> = kappas
            .par_iter()
            .map(|&k| -> Result<f64> { Ok(solve(k, n + 1)?[n]) })
            .collect::<Result<Vec<_>>>()?;
        let lookup = |l: i64, m: i64| -> f64 {
            // E_n at kappa = l - m/M with m possibly outside 0..M
            let (mut l, mut m) = (l, m);
            while m < 0 {
                m += m_nodes as i64;
                l -= 1;
            }
            while m >= m_nodes as i64 {
                m -= m_nodes as i64;
                l += 1;
            }
            let il = (l - l_min) as usize;
            energies[il * m_nodes + m as usize]
        };
        let dphi = TWO_PI / m_nodes as f64;
        for l in (l_min + 1)..=l_max {
            let mut avg = 0.0;
            for m in 0..m_nodes as i64 {
                let de = (lookup(l, m + 1) - lookup(l, m - 1)) / (2.0 * dphi);
                avg += -de;
            }
            total_current += avg / m_nodes as f64;
        }
    }

    let v_h = mu_right - mu_left;
    let sigma_units = (total_current / v_h).abs() * TWO_PI;
    Ok(HallReport {
        nu_estimate: sigma_units,
        sigma: sigma_units,
        r: *radius,
        mu_left,
        mu_right,
        bands_filled: nu,
        residuals,
    })
}

/// Extremal R·dE/dΦ over edge states in the window (flow-table node Φ = 0).
/// A state is classified as "edge" when more than `mass_fraction` of its
/// probability mass lies within `within_lengths` magnetic lengths of the
/// wall foot.
pub fn haw_bounds(
    table: &FlowTable,
    window: &SpectralWindow,
    mass_fraction: f64,
    within_lengths: f64,
) -> Result<HawBounds> {
    let Geometry::Cylinder { radius, .. } = table.geometry else {
        return Err(Error::WrongGeometry {
            expected: "cylinder",
        });
    };
    let foot = table.geometry.wall_foot().unwrap();
    let ell = table.units.magnetic_length();
    let mut c_upper = f64::MIN;
    let mut c_lower = f64::MAX;
    let mut count = 0usize;
    for &l in &table.l_values {
        for n in 0..table.n_max {
            let Some(e) = table.energy(n, l, 0) else { continue };
            if !window.contains(e) {
                continue;
            }
            // classify by eigenvector mass near the upper wall foot
            let ch = channel_hamiltonian(
                &table.geometry,
                &table.pot,
                &table.units,
                table.geometry.kappa(l)?,
                &table.grid,
            )?;
            let pairs = ch.op.eigenpairs_in_window(e - 1e-6, e + 1e-6)?;
            let Some(pair) = pairs.first() else { continue };
            let mut near = 0.0;
            let mut tot = 0.0;
            for (i, &u) in pair.vector.iter().enumerate() {
                let y = table.grid.point(i);
                tot += u * u;
                if (y - foot).abs() <= within_lengths * ell {
                    near += u * u;
                }
            }
            if near / tot <= mass_fraction {
                continue;
            }
            count += 1;
            // dE/dPhi by central difference on the dyadic flux grid
            let s = 1.0 / table.phi_nodes as f64;
            let ep = table.energy_at_quanta(n, l, s).ok_or(Error::OutOfTable { phi_quanta: s })?;
            let em = table
                .energy_at_quanta(n, l + 1, 1.0 - s)
                .ok_or(Error::OutOfTable { phi_quanta: -s })?;
            let de_dphi = (ep - em) / (2.0 * s * TWO_PI);
            let scaled = radius * de_dphi;
            c_upper = c_upper.max(scaled);
            c_lower = c_lower.min(scaled);
        }
    }
    if count == 0 {
        return Err(Error::NoEdgeStatesInWindow {
            lo: window.lo(),
            hi: window.hi(),
        });
    }
    Ok(HawBounds {
        window_lo: window.lo(),
        window_hi: window.hi(),
        c_upper,
        c_lower,
        n_edge_states: count,
    })
}

/// Azimuthal current decomposition for a Corbino channel eigenstate.
pub fn corbino_current_decomposition(
    ch: &ChannelHamiltonian,
    pair: &EigenPair,
    pot: &PotentialSpec,
) -> Result<CorbinoDecomposition> {
    let Geometry::Corbino { .. } = ch.geometry else {
        return Err(Error::WrongGeometry { expected: "corbino" });
    };
    let b = ch.units.b();
    let h = ch.grid.h;
    let n = ch.grid.n;
    let kappa = ch.kappa;
    // continuum samples v = u / sqrt(h), sum v^2 h = 1
    let norm: f64 = pair.vector.iter().map(|u| u * u).sum();
    let v: Vec<f64> = pair.vector.iter().map(|u| u / (norm * h).sqrt()).collect();

    let mut t1 = 0.0;
    let mut t2 = 0.0;
    let mut t3 = 0.0;
    let mut direct = 0.0;
    for i in 0..n {
        let r = ch.grid.point(i);
        let w = v[i] * v[i] * h;
        let pphi = kappa / r - 0.5 * b * r;
        // full radial potential derivative (wall + disorder)
        let dv = ch.potential_derivative(pot, i);
        t1 += dv / (TWO_PI * b * r) * w;
        let vp = if i == 0 {
            (v[1] - 0.0) / (2.0 * h)
        } else if i + 1 == n {
            (0.0 - v[i - 1]) / (2.0 * h)
        } else {
            (v[i + 1] - v[i - 1]) / (2.0 * h)
        };
        // radial derivative of psi = v/sqrt(r): psi' = (v' - v/2r)/sqrt(r)
        let dpsi = vp - v[i] / (2.0 * r);
        t2 += 2.0 / (TWO_PI * b) * (dpsi * dpsi) / (r * r) * h;
        t3 += -(1.0 / (TWO_PI * b)) * (2.0 / (r * r)) * pphi * pphi * w;
        direct += 2.0 / (TWO_PI * r) * pphi * w;
    }
    let defect = (t1 + t2 + t3 - direct).abs();
    Ok(CorbinoDecomposition {
        t1,
        t2,
        t3,
        direct,
        defect,
    })
}
