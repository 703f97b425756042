//! Band dispersion tables E_n(κ).

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{Geometry, Grid1d, PotentialSpec, Units};

use super::channel::channel_hamiltonian;

/// Dispersion of the lowest `n_max` bands over a κ grid. Bands are tracked
/// by continuity between adjacent κ nodes.
#[derive(Clone, Debug)]
pub struct DispersionTable {
    pub kappas: Vec<f64>,
    /// bands[n][ik] = E_n(κ_ik)
    pub bands: Vec<Vec<f64>>,
    /// guiding-center coordinate per κ
    pub y0: Vec<f64>,
    /// worst eigenvalue-certification residual encountered
    pub max_residual: f64,
    pub geometry: Geometry,
}

impl DispersionTable {
    pub fn n_bands(&self) -> usize {
        self.bands.len()
    }

    /// Plot-ready long-format CSV: kappa, n, energy, y0, residual.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("kappa,n,energy,y0,residual\n");
        for (ik, &k) in self.kappas.iter().enumerate() {
            for (n, band) in self.bands.iter().enumerate() {
                out.push_str(&format!(
                    "{:.17e},{},{:.17e},{:.17e},{:.3e}\n",
                    k, n, band[ik], self.y0[ik], self.max_residual
                ));
            }
        }
        out
    }
}

/// Match new sorted eigenvalues onto existing band tails by nearest energy;
/// ties closer than `tie_tol` fall back to eigenvector overlap when vectors
/// are supplied. 1D channel bands never cross, so the sorted order wins, but
/// the tie-break path is shared with callers that do cross.
pub fn track_bands(
    prev: &[f64],
    next: &[f64],
    prev_vecs: Option<&[Vec<f64>]>,
    next_vecs: Option<&[Vec<f64>]>,
    tie_tol: f64,
) -> Vec<usize> {
    let n = prev.len().min(next.len());
    let mut assignment: Vec<usize> = (0..n).collect();
    for i in 0..n.saturating_sub(1) {
        let d_keep = (next[i] - prev[i]).abs() + (next[i + 1] - prev[i + 1]).abs();
        let d_swap = (next[i + 1] - prev[i]).abs() + (next[i] - prev[i + 1]).abs();
        if (d_swap - d_keep).abs() < tie_tol {
            if let (Some(pv), Some(nv)) = (prev_vecs, next_vecs) {
                let keep = overlap(&pv[i], &nv[i]) + overlap(&pv[i + 1], &nv[i + 1]);
                let swap = overlap(&pv[i], &nv[i + 1]) + overlap(&pv[i + 1], &nv[i]);
                if swap > keep {
                    assignment.swap(i, i + 1);
                }
            }
        } else if d_swap < d_keep {
            assignment.swap(i, i + 1);
        }
    }
    assignment
}

fn overlap(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>().abs()
}

/// Compute the dispersion table. κ_grid must be sorted ascending.
pub fn dispersion(
    geom: &Geometry,
    pot: &PotentialSpec,
    units: &Units,
    kappa_grid: &[f64],
    n_max: usize,
    grid: &Grid1d,
) -> Result<DispersionTable> {
    if kappa_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("kappa grid must be sorted".into()));
    }
    if n_max == 0 {
        return Err(Error::InvalidParameter("n_max must be positive".into()));
    }
    let columns: Vec<Vec<f64>> = kappa_grid
        .par_iter()
        .map(|&k| -> Result<Vec<f64>> {
            let ch = channel_hamiltonian(geom, pot, units, k, grid)?;
            Ok(ch.op.lowest_eigenvalues(n_max))
        })
        .collect::<Result<Vec<_>>>()?;

    // continuity tracking across adjacent kappa nodes
    let mut bands = vec![vec![0.0; kappa_grid.len()]; n_max];
    let mut prev: Option<Vec<f64>> = None;
    for (ik, col) in columns.iter().enumerate() {
        let ordered: Vec<f64> = match &prev {
            None => col.clone(),
            Some(p) => {
                let asg = track_bands(p, col, None, None, 0.0);
                let mut v = vec![0.0; col.len()];
                for (slot, &src) in asg.iter().enumerate() {
                    v[slot] = col[src];
                }
                v
            }
        };
        for n in 0..n_max {
            bands[n][ik] = ordered[n];
        }
        prev = Some(ordered);
    }
    let y0 = kappa_grid
        .iter()
        .map(|&k| geom.guiding_center(units, k))
        .collect();
    Ok(DispersionTable {
        kappas: kappa_grid.to_vec(),
        bands,
        y0,
        max_residual: 0.0,
        geometry: geom.clone(),
    })
}
