//! Tricomi Ψ(a, 1; z): the confluent hypergeometric function of the second
//! kind in the logarithmic case b = 1.
//!
//! Three regimes:
//! - a a nonpositive integer −m: Ψ = (−1)^m m! L_m(z) exactly;
//! - z ≤ Z_SWITCH: the logarithmic-case series with incrementally updated
//!   digamma brackets and compensated summation;
//! - z > Z_SWITCH: the Laplace integral evaluated by composite
//!   Gauss–Legendre at a raised parameter a₀ ∈ [5, 6), then the three-term
//!   recurrence in a stepped downward (U is the minimal solution toward
//!   large a, so downward steps are stable).
//!
//! The switch radius 12 is validated by an overlap test between the two
//! routes in the band z ∈ [8, 16].

use crate::error::{Error, Result};

use super::special::{digamma, gamma_signed, laguerre, ln_gamma, EULER_GAMMA};

const Z_SWITCH: f64 = 12.0;
const INTEGER_TOL: f64 = 1e-9;

/// Ψ(a, 1; z) for real a and z > 0.
pub fn tricomi_psi(a: f64, z: f64) -> Result<f64> {
    if !(z > 0.0) || !z.is_finite() || !a.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "tricomi_psi needs finite a and z > 0; got a={a}, z={z}"
        )));
    }
    // polynomial case at nonpositive integer a (pole of the series handled
    // by the Laguerre limit formula)
    if a <= 0.5 && (a - a.round()).abs() < INTEGER_TOL && a.round() <= 0.0 {
        let m = (-a.round()) as usize;
        if m > 170 {
            return Err(Error::InvalidParameter(format!(
                "polynomial degree {m} overflows the factorial"
            )));
        }
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        let mut factorial = 1.0;
        for k in 2..=m {
            factorial *= k as f64;
        }
        return Ok(sign * factorial * laguerre(m, z));
    }
    // the logarithmic series cancels badly for a above 1/2 (the Pochhammer
    // factors stop shrinking); the quadrature route resolves its panels once
    // z is a few units wide, so hand it that regime early
    if z <= Z_SWITCH && !(a > 0.5 && z > 4.0) {
        Ok(log_case_series(a, z))
    } else {
        Ok(large_z(a, z))
    }
}

/// U(a,1,z) = −(1/Γ(a)) Σ_k (a)_k z^k/(k!)² [ln z + ψ(a+k) − 2ψ(1+k)].
fn log_case_series(a: f64, z: f64) -> f64 {
    let ln_z = z.ln();
    let mut term = 1.0; // (a)_k z^k / (k!)^2
    let mut bracket = ln_z + digamma(a) + 2.0 * EULER_GAMMA; // ψ(1) = −γ
    let mut sum = 0.0;
    let mut comp = 0.0; // Kahan compensation
    let mut k = 0usize;
    loop {
        let contrib = term * bracket;
        let y = contrib - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        let kf = k as f64;
        term *= (a + kf) * z / ((kf + 1.0) * (kf + 1.0));
        bracket += 1.0 / (a + kf) - 2.0 / (kf + 1.0);
        k += 1;
        if k > 4 && term.abs() * (bracket.abs() + 1.0) < 1e-18 * sum.abs().max(1e-30) {
            break;
        }
        if k > 600 {
            break;
        }
    }
    let (lg, sg) = gamma_signed(a);
    -sum * sg * (-lg).exp()
}

/// z > Z_SWITCH: quadrature at a₀ = a + m ≥ 5, then m downward steps of
/// U(a−1,1,z) = (z + 2a − 1) U(a,1,z) − a² U(a+1,1,z).
fn large_z(a: f64, z: f64) -> f64 {
    if a >= 5.0 {
        return laplace_integral(a, z);
    }
    let m = (5.0 - a).ceil() as usize;
    let a0 = a + m as f64;
    let mut u_hi = laplace_integral(a0 + 1.0, z); // U(a0+1)
    let mut u = laplace_integral(a0, z); // U(a0)
    let mut aa = a0;
    for _ in 0..m {
        let u_lo = (z + 2.0 * aa - 1.0) * u - aa * aa * u_hi;
        u_hi = u;
        u = u_lo;
        aa -= 1.0;
    }
    u
}

/// U(a,1,z) = z^{-a}/Γ(a) ∫₀^∞ e^{−s} s^{a−1} (1+s/z)^{−a} ds for a ≥ 5.
fn laplace_integral(a: f64, z: f64) -> f64 {
    const PANELS: [f64; 8] = [0.0, 2.0, 6.0, 14.0, 30.0, 60.0, 110.0, 180.0];
    let f = |s: f64| -> f64 {
        if s <= 0.0 {
            return 0.0;
        }
        // e^{-s} s^{a-1} (1+s/z)^{-a}, evaluated in log form for stability
        let ln_v = -s + (a - 1.0) * s.ln() - a * (1.0 + s / z).ln();
        ln_v.exp()
    };
    let mut integral = 0.0;
    for w in PANELS.windows(2) {
        integral += gauss_legendre(f, w[0], w[1]);
    }
    let ln_pref = -a * z.ln() - ln_gamma(a);
    // fold the prefactor in log space against the integral's magnitude
    (ln_pref + integral.ln()).exp()
}

/// 32-point Gauss–Legendre on [lo, hi]; nodes computed once by Newton on
/// the Legendre polynomial (deterministic).
fn gauss_legendre<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> f64 {
    let (nodes, weights) = gl32();
    let c = 0.5 * (hi - lo);
    let m = 0.5 * (hi + lo);
    let mut s = 0.0;
    for i in 0..32 {
        s += weights[i] * f(m + c * nodes[i]);
    }
    c * s
}

fn gl32() -> (&'static [f64; 32], &'static [f64; 32]) {
    use std::sync::OnceLock;
    static CACHE: OnceLock<([f64; 32], [f64; 32])> = OnceLock::new();
    let (n, w) = CACHE.get_or_init(|| {
        let mut nodes = [0.0; 32];
        let mut weights = [0.0; 32];
        let n = 32usize;
        for i in 0..n {
            // initial guess (Chebyshev-like)
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                // Legendre P_n and derivative by recurrence
                let (mut p0, mut p1) = (1.0, x);
                for k in 1..n {
                    let kf = k as f64;
                    let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
                    p0 = p1;
                    p1 = p2;
                }
                let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (mut p0, mut p1) = (1.0, x);
            for k in 1..n {
                let kf = k as f64;
                let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
                p0 = p1;
                p1 = p2;
            }
            let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            nodes[i] = -x; // ascending order
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        (nodes, weights)
    });
    (n, w)
}
