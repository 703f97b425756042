//! Spectral flow of channel energies under flux insertion.
//!
//! Because the channel operators depend on (l, Φ) only through κ = l − Φ/2π,
//! flux nodes are kept as dyadic fractions m/M of one quantum: the closure
//! node m = M of channel l reuses the identical solve as node 0 of channel
//! l−1, so the flow identity E_{n,l}(Φ+2π) = E_{n,l−1}(Φ) holds bitwise.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{Geometry, Grid1d, PotentialSpec, Units};

use super::channel::channel_hamiltonian;

/// Flow table E_{n,l}(Φ_m) over one flux period, Φ_m = 2π·m/M, m = 0..=M.
#[derive(Clone, Debug)]
pub struct FlowTable {
    pub geometry: Geometry,
    pub pot: PotentialSpec,
    pub units: Units,
    pub grid: Grid1d,
    pub l_values: Vec<i64>,
    pub n_max: usize,
    pub phi_nodes: usize,
    /// energies[il][m][n]
    energies: Vec<Vec<Vec<f64>>>,
}

impl FlowTable {
    pub fn energy(&self, n: usize, l: i64, m: usize) -> Option<f64> {
        let il = self.l_values.iter().position(|&x| x == l)?;
        self.energies.get(il)?.get(m)?.get(n).copied()
    }

    /// Flux quanta at node m.
    pub fn phi_quanta(&self, m: usize) -> f64 {
        m as f64 / self.phi_nodes as f64
    }

    /// max over (n, l, m) of |E_{n,l}(Φ_m + 2π) − E_{n,l−1}(Φ_m)| where both
    /// sides are tabulated; exact zero by κ-construction.
    pub fn flow_identity_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for &l in &self.l_values {
            if !self.l_values.contains(&(l - 1)) {
                continue;
            }
            for m in 0..=self.phi_nodes {
                for n in 0..self.n_max {
                    // E_{n,l} at one full quantum past node m equals the
                    // closure chain: node m of (l-1)
                    if let (Some(a), Some(b)) = (
                        self.energy_at_quanta(n, l, 1.0 + self.phi_quanta(m)),
                        self.energy(n, l - 1, m),
                    ) {
                        worst = worst.max((a - b).abs());
                    }
                }
            }
        }
        worst
    }

    /// Energy at arbitrary flux (in quanta) by direct channel solve; used by
    /// flux-derivative currents. Errors with OutOfTable when the requested
    /// flux leaves the tabulated band [min_l − 1, max_l] of κ coverage.
    pub fn energy_at_quanta(&self, n: usize, l: i64, quanta: f64) -> Option<f64> {
        // tabulated dyadic node?
        if quanta >= 0.0 {
            let scaled = quanta * self.phi_nodes as f64;
            if scaled.fract() == 0.0 {
                let m_total = scaled as usize;
                let (dl, m) = (m_total / self.phi_nodes, m_total % self.phi_nodes);
                let ll = l - dl as i64;
                if let Some(e) = self.energy(n, ll, m) {
                    return Some(e);
                }
                // closure node of the lowest tabulated l
                if m == 0 {
                    if let Some(e) = self.energy(n, ll, 0) {
                        return Some(e);
                    }
                }
            }
        }
        let kappa = l as f64 - quanta;
        let ch = channel_hamiltonian(&self.geometry, &self.pot, &self.units, kappa, &self.grid)
            .ok()?;
        ch.op.lowest_eigenvalues(n + 1).get(n).copied()
    }
}

/// Build the flow table. The flux grid spans one full period inclusive,
/// Φ_m = 2π m/M for m = 0..=M.
pub fn spectral_flow(
    geom: &Geometry,
    pot: &PotentialSpec,
    units: &Units,
    phi_nodes: usize,
    l_values: &[i64],
    n_max: usize,
    grid: &Grid1d,
) -> Result<FlowTable> {
    if geom.flux_quanta().is_none() {
        return Err(Error::WrongGeometry {
            expected: "cylinder or corbino",
        });
    }
    if phi_nodes == 0 || l_values.is_empty() || n_max == 0 {
        return Err(Error::InvalidParameter(
            "flow table needs phi_nodes, l values and n_max all positive".into(),
        ));
    }
    // distinct kappa values; the closure node of l coincides bitwise with
    // node 0 of l-1 whenever both are requested
    let mut kappa_keys: Vec<u64> = Vec::new();
    let mut seen: HashMap<u64, usize> = HashMap::new();
    let request = |kappa: f64, keys: &mut Vec<u64>, seen: &mut HashMap<u64, usize>| {
        let bits = kappa.to_bits();
        if !seen.contains_key(&bits) {
            seen.insert(bits, keys.len());
            keys.push(bits);
        }
    };
    for &l in l_values {
        for m in 0..=phi_nodes {
            let kappa = l as f64 - m as f64 / phi_nodes as f64;
            request(kappa, &mut kappa_keys, &mut seen);
        }
    }
    let solved: Vec<Vec<f64>> = kappa_keys
        .par_iter()
        .map(|&bits| -> Result<Vec<f64>> {
            let ch = channel_hamiltonian(geom, pot, units, f64::from_bits(bits), grid)?;
            Ok(ch.op.lowest_eigenvalues(n_max))
        })
        .collect::<Result<Vec<_>>>()?;

    let energies: Vec<Vec<Vec<f64>>> = l_values
        .iter()
        .map(|&l| {
            (0..=phi_nodes)
                .map(|m| {
                    let kappa = l as f64 - m as f64 / phi_nodes as f64;
                    solved[seen[&kappa.to_bits()]].clone()
                })
                .collect()
        })
        .collect();

    Ok(FlowTable {
        geometry: geom.clone(),
        pot: pot.clone(),
        units: *units,
        grid: grid.clone(),
        l_values: l_values.to_vec(),
        n_max,
        phi_nodes,
        energies,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::EdgeProfile;

    #[test]
    fn clean_cylinder_flow_identity_is_bitwise() {
        let u = Units::new(1.0).unwrap();
        let geom = Geometry::cylinder(3.0, 10.0, 0.0).unwrap();
        let pot = PotentialSpec::clean(EdgeProfile::power_law(2.0, 1.0, 1.0).unwrap());
        let grid = Grid1d::line(-9.0, 7.0, 500).unwrap();
        let t = spectral_flow(&geom, &pot, &u, 8, &[-2, -1, 0, 1, 2], 2, &grid).unwrap();
        assert_eq!(t.flow_identity_defect(), 0.0);
    }

    #[test]
    fn clean_corbino_flow_matches_branch_formula() {
        let u = Units::new(1.0).unwrap();
        let geom = Geometry::corbino(30.0, 0.0).unwrap();
        let pot = PotentialSpec::clean(EdgeProfile::Flat);
        let grid = Grid1d::radial(14.0, 2400).unwrap();
        let t = spectral_flow(&geom, &pot, &u, 4, &[-1, 0, 1, 2], 2, &grid).unwrap();
        assert_eq!(t.flow_identity_defect(), 0.0);
        for &l in &[-1i64, 1, 2] {
            for m in 0..=4usize {
                let q = t.phi_quanta(m);
                let kappa = l as f64 - q;
                if kappa.abs() < 0.2 {
                    continue; // slow-converging near-critical channel
                }
                for n in 0..2usize {
                    let want = if kappa >= 0.0 {
                        (n as f64 + 0.5) * u.cyclotron_energy()
                    } else {
                        (n as f64 - kappa + 0.5) * u.cyclotron_energy()
                    };
                    let got = t.energy(n, l, m).unwrap();
                    assert!(
                        (got - want).abs() < 2e-3,
                        "n={n}, l={l}, m={m}: {got} vs {want}"
                    );
                }
            }
        }
    }

    #[test]
    fn flow_is_continuous_along_flux() {
        let u = Units::new(1.0).unwrap();
        let geom = Geometry::cylinder(2.0, 8.0, 0.0).unwrap();
        let pot = PotentialSpec::clean(EdgeProfile::exponential(0.5, 1.0).unwrap());
        let grid = Grid1d::line(-7.0, 5.5, 400).unwrap();
        let t = spectral_flow(&geom, &pot, &u, 16, &[-8, -7, -6], 1, &grid).unwrap();
        for &l in &[-8i64, -7, -6] {
            for m in 0..16usize {
                let a = t.energy(0, l, m).unwrap();
                let b = t.energy(0, l, m + 1).unwrap();
                assert!((a - b).abs() < 0.15, "jump at l={l}, m={m}: {a} -> {b}");
            }
        }
    }

    #[test]
    fn edge_channels_have_single_signed_flux_derivative() {
        // x-independent wall, no disorder: dE/dPhi keeps one sign for
        // channels whose guiding center sits near the wall
        let u = Units::new(1.0).unwrap();
        let geom = Geometry::cylinder(2.0, 8.0, 0.0).unwrap();
        let pot = PotentialSpec::clean(EdgeProfile::power_law(2.0, 1.0, 1.0).unwrap());
        let grid = Grid1d::line(-8.0, 6.5, 450).unwrap();
        // wall foot at +4; edge channels have y0 near +4: kappa ~ -BRy0 = -8
        let t = spectral_flow(&geom, &pot, &u, 12, &[-9, -8, -7], 1, &grid).unwrap();
        for &l in &[-9i64, -8, -7] {
            for m in 0..12usize {
                let de = t.energy(0, l, m + 1).unwrap() - t.energy(0, l, m).unwrap();
                assert!(de > 0.0, "edge channel l={l} lost chirality at node {m}");
            }
        }
    }

    #[test]
    fn out_of_range_band_index_is_none() {
        let u = Units::new(1.0).unwrap();
        let geom = Geometry::cylinder(2.0, 6.0, 0.0).unwrap();
        let pot = PotentialSpec::clean(EdgeProfile::Flat);
        let grid = Grid1d::line(-6.0, 4.0, 200).unwrap();
        let t = spectral_flow(&geom, &pot, &u, 2, &[0], 1, &grid).unwrap();
        assert!(t.energy(1, 0, 0).is_none());
        assert!(t.energy(0, 3, 0).is_none());
    }
}
