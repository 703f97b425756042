//! Neumann-series convergence bookkeeping for the disordered resolvent.
//!
//! Each order of the expansion contributes a factor C̃ δ with
//! C̃ = C ∫ e^{−2|w|/3ξ} |ln(|w|/ξ)|² d²w; the series converges iff C̃ δ < 1.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Serialize)]
pub struct NeumannTail {
    /// per-order factor C̃ δ
    pub ratio: f64,
    pub converges: bool,
    /// value of the 2D integral ∫ e^{−2|w|/3ξ} ln²(|w|/ξ) d²w
    pub integral: f64,
    /// geometric sum 1/(1 − ratio) when convergent
    pub geometric_sum: Option<f64>,
}

/// Compute the per-order factor for disorder bound `delta`, decay scale `xi`
/// and envelope prefactor `c_envelope`.
pub fn neumann_tail(delta: f64, xi: f64, c_envelope: f64) -> Result<NeumannTail> {
    if !(xi > 0.0) || !(delta >= 0.0) || !(c_envelope >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "neumann_tail needs xi > 0, delta >= 0, c >= 0; got {xi}, {delta}, {c_envelope}"
        )));
    }
    // radial reduction: 2π ξ² ∫_0^∞ s e^{−2s/3} ln²s ds, composite
    // Gauss–Legendre with panels refined near the log singularity
    let integral = xi * xi * radial_log2_integral();
    let ratio = c_envelope * integral * delta;
    let converges = ratio < 1.0;
    Ok(NeumannTail {
        ratio,
        converges,
        integral,
        geometric_sum: converges.then(|| 1.0 / (1.0 - ratio)),
    })
}

/// 2π ∫_0^∞ s e^{−2s/3} ln²(s) ds by panel quadrature. The logarithmic
/// branch point at s = 0 is handled by geometric panel grading (each panel
/// keeps the singularity a fixed relative distance away); truncation at
/// s = 80 is below 1e−18.
fn radial_log2_integral() -> f64 {
    const PANELS: [f64; 17] = [
        0.0, 1e-10, 1e-8, 1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 0.05, 0.25, 1.0, 3.0, 8.0, 20.0, 45.0,
        65.0, 80.0,
    ];
    let f = |s: f64| {
        if s <= 0.0 {
            0.0
        } else {
            s * (-2.0 * s / 3.0).exp() * s.ln() * s.ln()
        }
    };
    let mut total = 0.0;
    for w in PANELS.windows(2) {
        total += gauss40(&f, w[0], w[1]);
    }
    2.0 * std::f64::consts::PI * total
}

/// 40-point composite Gauss–Legendre built from the 20-point rule applied to
/// two half panels.
fn gauss40<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> f64 {
    let mid = 0.5 * (lo + hi);
    gauss20(f, lo, mid) + gauss20(f, mid, hi)
}

fn gauss20<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> f64 {
    // 20-point Gauss–Legendre nodes/weights on [-1, 1] (symmetric half)
    const X: [f64; 10] = [
        0.076526521133497333,
        0.227785851141645078,
        0.373706088715419561,
        0.510867001950827098,
        0.636053680726515025,
        0.746331906460150793,
        0.839116971822218823,
        0.912234428251325906,
        0.963971927277913791,
        0.993128599185094925,
    ];
    const W: [f64; 10] = [
        0.152753387130725851,
        0.149172986472603747,
        0.142096109318382051,
        0.131688638449176627,
        0.118194531961518417,
        0.101930119817240435,
        0.083276741576704749,
        0.062672048334109064,
        0.040601429800386941,
        0.017614007139152118,
    ];
    let c = 0.5 * (hi - lo);
    let m = 0.5 * (hi + lo);
    let mut s = 0.0;
    for i in 0..10 {
        s += W[i] * (f(m + c * X[i]) + f(m - c * X[i]));
    }
    c * s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_disorder_always_converges() {
        let t = neumann_tail(0.0, 1.0, 1.0).unwrap();
        assert_eq!(t.ratio, 0.0);
        assert!(t.converges);
        assert_eq!(t.geometric_sum, Some(1.0));
    }

    #[test]
    fn ratio_is_linear_in_delta() {
        let deltas = [0.01, 0.02, 0.04];
        let rs: Vec<f64> = deltas
            .iter()
            .map(|&d| neumann_tail(d, 1.0, 1.0).unwrap().ratio)
            .collect();
        let s1 = rs[1] / rs[0];
        let s2 = rs[2] / rs[1];
        assert!((s1 - 2.0).abs() < 1e-6 && (s2 - 2.0).abs() < 1e-6);
    }

    #[test]
    fn integral_matches_adaptive_oracle() {
        // adaptive Simpson oracle for 2π ∫ s e^{−2s/3} ln² s ds, frozen value
        // 18.815596660837931 cross-checked against the closed form
        // 2π/a² [Γ''(2) − 2 ln a Γ'(2) + ln² a] at a = 2/3
        fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fb: f64, fm: f64, eps: f64, depth: usize) -> f64 {
            let m = 0.5 * (a + b);
            let lm = 0.5 * (a + m);
            let rm = 0.5 * (m + b);
            let flm = f(lm);
            let frm = f(rm);
            let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
            let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            if depth == 0 || (left + right - whole).abs() < 15.0 * eps {
                left + right + (left + right - whole) / 15.0
            } else {
                simpson(f, a, m, fa, fm, flm, eps / 2.0, depth - 1)
                    + simpson(f, m, b, fm, fb, frm, eps / 2.0, depth - 1)
            }
        }
        let f = |s: f64| {
            if s <= 0.0 {
                0.0
            } else {
                s * (-2.0 * s / 3.0).exp() * s.ln() * s.ln()
            }
        };
        let mut oracle = 0.0;
        for w in [0.0, 0.1, 1.0, 10.0, 80.0].windows(2) {
            let (a, b) = (w[0], w[1]);
            oracle += simpson(&f, a, b, f(a), f(b), f(0.5 * (a + b)), 1e-13, 40);
        }
        oracle *= 2.0 * std::f64::consts::PI;
        assert!(
            (oracle - 18.815596660837931).abs() < 1e-9,
            "oracle drifted: {oracle}"
        );
        let t = neumann_tail(0.1, 1.0, 1.0).unwrap();
        assert!(
            (t.integral - oracle).abs() < 1e-10,
            "quadrature {} vs oracle {oracle}",
            t.integral
        );
    }

    #[test]
    fn divergence_flag_above_threshold() {
        let t = neumann_tail(0.1, 1.0, 1.0).unwrap();
        assert!(!t.converges); // 18.8 * 0.1 > 1
        assert!(t.geometric_sum.is_none());
        let t2 = neumann_tail(0.01, 1.0, 1.0).unwrap();
        assert!(t2.converges);
    }
}
