//! Smooth cutoff j(y) for the commutator estimate: j ≡ 1 below b, quintic
//! smoothstep down to 0 at c, with closed-form j' and j''. The transition
//! end c is placed where the wall reaches ε − δ, so sup |j(V₀+V_d)| ≤ ε
//! holds by monotonicity.

use crate::error::{Error, Result};
use crate::model::EdgeProfile;

/// Cutoff profile in absolute coordinates (wall foot included).
#[derive(Clone, Copy, Debug)]
pub struct CutoffSpec {
    /// j = 1 for y ≤ b
    pub b: f64,
    /// j = 0 for y ≥ c
    pub c: f64,
    /// wall foot position the profile was built against
    pub foot: f64,
}

impl CutoffSpec {
    /// Build from the wall profile: c = foot + V₀⁻¹(ε − δ), b splits the
    /// transition at `width_fraction` of the distance from the foot to c.
    pub fn from_wall(
        edge: &EdgeProfile,
        foot: f64,
        epsilon: f64,
        delta: f64,
        width_fraction: f64,
    ) -> Result<Self> {
        if !(epsilon > delta) {
            return Err(Error::InvalidParameter(format!(
                "cutoff needs epsilon > delta; got {epsilon} <= {delta}"
            )));
        }
        if !(0.0 < width_fraction && width_fraction < 1.0) {
            return Err(Error::InvalidParameter(
                "width_fraction must lie in (0, 1)".into(),
            ));
        }
        let t_c = edge.inverse(epsilon - delta)?;
        if !(t_c > 0.0) {
            return Err(Error::DegenerateWall { y: foot });
        }
        let b = foot + (1.0 - width_fraction) * t_c;
        let c = foot + t_c;
        Ok(CutoffSpec { b, c, foot })
    }

    pub fn j(&self, y: f64) -> f64 {
        if y <= self.b {
            1.0
        } else if y >= self.c {
            0.0
        } else {
            let t = (y - self.b) / (self.c - self.b);
            1.0 - t * t * t * (10.0 - 15.0 * t + 6.0 * t * t)
        }
    }

    pub fn j_prime(&self, y: f64) -> f64 {
        if y <= self.b || y >= self.c {
            0.0
        } else {
            let w = self.c - self.b;
            let t = (y - self.b) / w;
            -30.0 * t * t * (1.0 - t) * (1.0 - t) / w
        }
    }

    pub fn j_second(&self, y: f64) -> f64 {
        if y <= self.b || y >= self.c {
            0.0
        } else {
            let w = self.c - self.b;
            let t = (y - self.b) / w;
            -60.0 * t * (1.0 - t) * (1.0 - 2.0 * t) / (w * w)
        }
    }

    /// Validate sup |j · (V₀ + V_d)| ≤ ε by dense sampling over [lo, hi].
    pub fn validate<V>(&self, total_potential: V, lo: f64, hi: f64, epsilon: f64) -> Result<()>
    where
        V: Fn(f64) -> f64,
    {
        let n = 4000;
        let mut sup: f64 = 0.0;
        for i in 0..=n {
            let y = lo + (hi - lo) * i as f64 / n as f64;
            sup = sup.max((self.j(y) * total_potential(y)).abs());
        }
        if sup > epsilon * (1.0 + 1e-9) {
            return Err(Error::InvalidCutoff { sup, epsilon });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_and_range() {
        let edge = EdgeProfile::power_law(2.0, 1.0, 1.0).unwrap();
        let j = CutoffSpec::from_wall(&edge, 0.0, 0.3, 0.0, 0.5).unwrap();
        assert!((j.c - 0.3f64.sqrt()).abs() < 1e-9);
        assert_eq!(j.j(j.b - 1.0), 1.0);
        assert_eq!(j.j(j.c + 0.1), 0.0);
        for i in 0..=100 {
            let y = j.b + (j.c - j.b) * i as f64 / 100.0;
            let v = j.j(y);
            assert!((0.0..=1.0).contains(&v));
            assert!(j.j_prime(y) <= 0.0);
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let edge = EdgeProfile::exponential(0.5, 1.0).unwrap();
        let j = CutoffSpec::from_wall(&edge, 2.0, 0.4, 0.05, 0.5).unwrap();
        let w = j.c - j.b;
        let h = 1e-5;
        let scale1 = 1.0 / w; // |j'| scale
        let scale2 = 60.0 / (w * w); // |j''| scale
        for i in 1..100 {
            let y = j.b - 0.2 + (j.c - j.b + 0.4) * i as f64 / 100.0;
            if (y - j.b).abs() < 2.0 * h || (y - j.c).abs() < 2.0 * h {
                continue;
            }
            let fd1 = (j.j(y + h) - j.j(y - h)) / (2.0 * h);
            assert!((fd1 - j.j_prime(y)).abs() < 1e-6 * scale1.max(1.0), "j' at {y}");
            let fd2 = (j.j(y + h) - 2.0 * j.j(y) + j.j(y - h)) / (h * h);
            assert!(
                (fd2 - j.j_second(y)).abs() < 1e-4 * scale2.max(1.0),
                "j'' at {y}: fd {fd2} vs {}",
                j.j_second(y)
            );
        }
    }

    #[test]
    fn validation_catches_oversized_cutoff() {
        let edge = EdgeProfile::power_law(2.0, 1.0, 1.0).unwrap();
        let j = CutoffSpec::from_wall(&edge, 0.0, 0.3, 0.0, 0.5).unwrap();
        // correct wall passes
        j.validate(|y| edge.value(y), -3.0, 4.0, 0.3).unwrap();
        // a taller wall under the same cutoff fails
        let tall = EdgeProfile::power_law(2.0, 0.5, 1.0).unwrap();
        assert!(matches!(
            j.validate(|y| tall.value(y), -3.0, 4.0, 0.3),
            Err(Error::InvalidCutoff { .. })
        ));
    }
}
