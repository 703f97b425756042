//! Spectrum-inclusion checks for disordered operators.
//!
//! The deterministic second inclusion — every disordered eigenvalue lies
//! within δ of the clean spectrum — is asserted per seed. The almost-sure
//! first inclusion has no finite-volume content, so a proxy statistic is
//! reported instead: the fraction of clean eigenvalues approximated by some
//! disordered eigenvalue, expected to grow with domain size.

use serde::Serialize;

/// Result of the second-inclusion check for one seed.
#[derive(Clone, Debug, Serialize)]
pub struct InclusionReport {
    pub seed: u64,
    pub delta: f64,
    /// max over disordered eigenvalues of dist(E, clean spectrum)
    pub max_distance: f64,
    /// count of disordered eigenvalues violating dist <= delta + slack
    pub violations: usize,
    pub n_clean: usize,
    pub n_disordered: usize,
}

/// Distance of each disordered eigenvalue to the clean spectrum; violation
/// when it exceeds delta + slack (slack covers solver residuals).
pub fn spectrum_inclusion_check(
    clean: &[f64],
    disordered: &[f64],
    delta: f64,
    slack: f64,
    seed: u64,
) -> InclusionReport {
    let mut sorted = clean.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut max_distance: f64 = 0.0;
    let mut violations = 0usize;
    for &e in disordered {
        let d = dist_to_sorted(&sorted, e);
        max_distance = max_distance.max(d);
        if d > delta + slack {
            violations += 1;
        }
    }
    InclusionReport {
        seed,
        delta,
        max_distance,
        violations,
        n_clean: clean.len(),
        n_disordered: disordered.len(),
    }
}

/// Weyl-type matched perturbation defect: with both full spectra sorted,
/// the minimal-weight matching of equal-length lists is the sorted pairing;
/// returns max_i |clean_i − disordered_i|. Bounded by δ in exact arithmetic.
pub fn matched_perturbation_defect(clean: &[f64], disordered: &[f64]) -> Option<f64> {
    if clean.len() != disordered.len() {
        return None;
    }
    let mut a = clean.to_vec();
    let mut b = disordered.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    Some(
        a.iter()
            .zip(&b)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max),
    )
}

/// First-inclusion proxy: fraction of clean eigenvalues within `eps` of
/// some disordered eigenvalue.
pub fn first_inclusion_fraction(clean: &[f64], disordered: &[f64], eps: f64) -> f64 {
    if clean.is_empty() {
        return 1.0;
    }
    let mut sorted = disordered.to_vec();
    sorted.sort_by(f64::total_cmp);
    let hits = clean
        .iter()
        .filter(|&&e| dist_to_sorted(&sorted, e) <= eps)
        .count();
    hits as f64 / clean.len() as f64
}

fn dist_to_sorted(sorted: &[f64], e: f64) -> f64 {
    if sorted.is_empty() {
        return f64::INFINITY;
    }
    let idx = sorted.partition_point(|&x| x < e);
    let mut d = f64::INFINITY;
    if idx < sorted.len() {
        d = d.min((sorted[idx] - e).abs());
    }
    if idx > 0 {
        d = d.min((sorted[idx - 1] - e).abs());
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inclusion_detects_violation() {
        let clean = [1.0, 3.0, 5.0];
        let ok = [1.05, 2.96];
        let r = spectrum_inclusion_check(&clean, &ok, 0.1, 0.0, 0);
        assert_eq!(r.violations, 0);
        assert!((r.max_distance - 0.05).abs() < 1e-15);
        let bad = [1.5];
        let r = spectrum_inclusion_check(&clean, &bad, 0.1, 0.0, 0);
        assert_eq!(r.violations, 1);
    }

    #[test]
    fn matched_defect_is_sorted_pairing() {
        let clean = [0.0, 1.0, 2.0];
        let dis = [2.1, 0.05, 0.9];
        let d = matched_perturbation_defect(&clean, &dis).unwrap();
        assert!((d - 0.1).abs() < 1e-15);
        assert!(matched_perturbation_defect(&clean, &dis[..2]).is_none());
    }

    #[test]
    fn proxy_fraction() {
        let clean = [1.0, 2.0, 3.0, 4.0];
        let dis = [1.01, 2.5];
        let f = first_inclusion_fraction(&clean, &dis, 0.1);
        assert!((f - 0.25).abs() < 1e-15);
    }
}
