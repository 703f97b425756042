//! Complex banded LU with partial pivoting (LAPACK zgbtrf-style storage),
//! used by the shift-invert transformation of the 2D solver.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// LU factorization of a banded matrix with `kl` subdiagonals and `ku`
/// superdiagonals. Storage holds `2*kl + ku + 1` bands (extra `kl` rows of
/// fill-in from pivoting): entry (i, j) lives at band row `kl + ku + i - j`.
pub struct BandedLu {
    n: usize,
    kl: usize,
    ku: usize,
    /// column-major band storage: data[j * rows + r]
    data: Vec<Complex64>,
    ipiv: Vec<usize>,
}

impl BandedLu {
    fn rows(kl: usize, ku: usize) -> usize {
        2 * kl + ku + 1
    }

    /// Factor the banded matrix given by `entry(i, j)` for |i-j| within the
    /// bands. Returns FactorizationSingular when a pivot collapses.
    pub fn factor<F>(n: usize, kl: usize, ku: usize, entry: F) -> Result<Self>
    where
        F: Fn(usize, usize) -> Complex64,
    {
        let rows = Self::rows(kl, ku);
        let mut data = vec![Complex64::new(0.0, 0.0); rows * n];
        for j in 0..n {
            let ilo = j.saturating_sub(ku);
            let ihi = (j + kl).min(n - 1);
            for i in ilo..=ihi {
                data[j * rows + (kl + ku + i - j)] = entry(i, j);
            }
        }
        let mut ipiv = vec![0usize; n];
        let kv = kl + ku; // index of the diagonal row before pivoting offsets

        // scale reference for singularity detection
        let scale: f64 = data.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-300);

        for j in 0..n {
            // find pivot among rows j..=min(j+kl, n-1)
            let reach = (j + kl).min(n - 1);
            let mut piv_row = j;
            let mut piv_mag = band_get(&data, rows, kv, j, j).norm();
            for i in (j + 1)..=reach {
                let m = band_get(&data, rows, kv, i, j).norm();
                if m > piv_mag {
                    piv_mag = m;
                    piv_row = i;
                }
            }
            if piv_mag < 1e-14 * scale {
                return Err(Error::FactorizationSingular { shift: f64::NAN });
            }
            ipiv[j] = piv_row;
            if piv_row != j {
                // swap rows j and piv_row across the accessible columns
                // (U fills in up to kv = kl + ku superdiagonals)
                let jhi = (j + kv).min(n - 1);
                for col in j..=jhi {
                    let a = band_get(&data, rows, kv, j, col);
                    let b = band_get(&data, rows, kv, piv_row, col);
                    band_set(&mut data, rows, kv, j, col, b);
                    band_set(&mut data, rows, kv, piv_row, col, a);
                }
            }
            let piv = band_get(&data, rows, kv, j, j);
            for i in (j + 1)..=reach {
                let m = band_get(&data, rows, kv, i, j) / piv;
                band_set(&mut data, rows, kv, i, j, m);
                if m.norm() > 0.0 {
                    let jhi = (j + kv).min(n - 1);
                    for col in (j + 1)..=jhi {
                        let ujc = band_get(&data, rows, kv, j, col);
                        if ujc.norm() != 0.0 {
                            let cur = band_get(&data, rows, kv, i, col);
                            band_set(&mut data, rows, kv, i, col, cur - m * ujc);
                        }
                    }
                }
            }
        }
        Ok(BandedLu {
            n,
            kl,
            ku,
            data,
            ipiv,
        })
    }

    /// Solve A x = b in place.
    pub fn solve(&self, b: &mut [Complex64]) {
        let rows = Self::rows(self.kl, self.ku);
        let kv = self.kl + self.ku;
        let n = self.n;
        // forward: apply L (with pivoting)
        for j in 0..n {
            let p = self.ipiv[j];
            if p != j {
                b.swap(j, p);
            }
            let reach = (j + self.kl).min(n - 1);
            let bj = b[j];
            for i in (j + 1)..=reach {
                let m = band_get(&self.data, rows, kv, i, j);
                if m.norm() != 0.0 {
                    b[i] -= m * bj;
                }
            }
        }
        // backward: solve U x = y
        for j in (0..n).rev() {
            let jhi = (j + kv).min(n - 1);
            let mut v = b[j];
            for col in (j + 1)..=jhi {
                let u = band_get(&self.data, rows, kv, j, col);
                if u.norm() != 0.0 {
                    v -= u * b[col];
                }
            }
            b[j] = v / band_get(&self.data, rows, kv, j, j);
        }
    }
}

#[inline]
fn band_get(data: &[Complex64], rows: usize, kv: usize, i: usize, j: usize) -> Complex64 {
    // valid when kv + i - j in [0, rows)
    let r = kv + i - j;
    debug_assert!(r < rows, "band access out of range: i={i}, j={j}");
    data[j * rows + r]
}

#[inline]
fn band_set(data: &mut [Complex64], rows: usize, kv: usize, i: usize, j: usize, v: Complex64) {
    let r = kv + i - j;
    debug_assert!(r < rows);
    data[j * rows + r] = v;
}
