//! Log-gamma, digamma and Laguerre polynomials.

pub const EULER_GAMMA: f64 = 0.5772156649015328606;

/// Lanczos coefficients, g = 7, n = 9 (relative accuracy ~1e-14 on the real
/// axis for x > 0.5).
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
];

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    assert!(x > 0.0, "ln_gamma needs x > 0, got {x}");
    if x < 0.5 {
        // reflection keeps the Lanczos argument away from 0
        let s = (std::f64::consts::PI * x).sin();
        return std::f64::consts::PI.ln() - s.ln() - ln_gamma(1.0 - x);
    }
    let xx = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (xx + i as f64);
    }
    let t = xx + LANCZOS_G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (xx + 0.5) * t.ln() - t + acc.ln()
}

/// (ln|Γ(x)|, sign of Γ(x)) for any non-pole real x.
pub fn gamma_signed(x: f64) -> (f64, f64) {
    if x > 0.0 {
        return (ln_gamma(x), 1.0);
    }
    assert!(
        x != x.floor() || x > 0.0,
        "gamma pole at nonpositive integer {x}"
    );
    // reflection: Γ(x)Γ(1−x) = π / sin(πx)
    let s = (std::f64::consts::PI * x).sin();
    let ln_abs = std::f64::consts::PI.ln() - s.abs().ln() - ln_gamma(1.0 - x);
    (ln_abs, s.signum())
}

/// Γ(x) with sign, for moderate |x| (overflows past x ≈ 171).
pub fn gamma(x: f64) -> f64 {
    let (l, s) = gamma_signed(x);
    s * l.exp()
}

/// Digamma ψ(x) for real non-pole x.
pub fn digamma(x: f64) -> f64 {
    if x <= 0.0 {
        assert!(
            x != x.floor(),
            "digamma pole at nonpositive integer {x}"
        );
        // reflection: ψ(1−x) − ψ(x) = π cot(πx)
        return digamma(1.0 - x) - std::f64::consts::PI / (std::f64::consts::PI * x).tan();
    }
    let mut acc = 0.0;
    let mut xx = x;
    while xx < 12.0 {
        acc -= 1.0 / xx;
        xx += 1.0;
    }
    // asymptotic series with Bernoulli coefficients, truncated past x^{-12}
    let inv = 1.0 / xx;
    let inv2 = inv * inv;
    acc + xx.ln()
        - 0.5 * inv
        - inv2
            * (1.0 / 12.0
                - inv2
                    * (1.0 / 120.0
                        - inv2
                            * (1.0 / 252.0
                                - inv2
                                    * (1.0 / 240.0
                                        - inv2 * (1.0 / 132.0 - inv2 * 691.0 / 32760.0)))))
}

/// Laguerre polynomial L_n(x) by the three-term recurrence.
pub fn laguerre(n: usize, x: f64) -> f64 {
    match n {
        0 => 1.0,
        1 => 1.0 - x,
        _ => {
            let mut lm = 1.0;
            let mut l = 1.0 - x;
            for k in 1..n {
                let kf = k as f64;
                let next = ((2.0 * kf + 1.0 - x) * l - kf * lm) / (kf + 1.0);
                lm = l;
                l = next;
            }
            l
        }
    }
}
