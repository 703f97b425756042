//! SplitMix64: the fixed-width counter generator used for all disorder
//! draws. The algorithm is fully specified here so any implementation in
//! any language reproduces identical fields bit for bit:
//!
//!   state += 0x9E3779B97F4A7C15
//!   z = state
//!   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//!   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//!   output = z ^ (z >> 31)
//!
//! Uniform doubles take the top 53 bits: u53 = output >> 11, value =
//! u53 · 2⁻⁵³ ∈ [0, 1). Poisson counts use chunked product inversion with
//! chunk mean ≤ 16, consuming one uniform per trial in a fixed order.

#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in [lo, hi).
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Poisson count with the given mean, by product inversion over chunks
    /// of mean at most 16 (Poisson additivity keeps this exact).
    pub fn poisson(&mut self, mean: f64) -> usize {
        assert!(mean >= 0.0 && mean.is_finite());
        let mut remaining = mean;
        let mut total = 0usize;
        while remaining > 0.0 {
            let chunk = remaining.min(16.0);
            remaining -= chunk;
            let limit = (-chunk).exp();
            let mut prod = 1.0;
            let mut k = 0usize;
            loop {
                prod *= self.next_f64();
                if prod <= limit {
                    break;
                }
                k += 1;
                if k > 4096 {
                    break; // unreachable for chunk <= 16
                }
            }
            total += k;
        }
        total
    }
}
