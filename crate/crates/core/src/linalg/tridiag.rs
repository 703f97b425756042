//! Symmetric tridiagonal eigensolver: Sturm-sequence bisection for
//! eigenvalues, inverse iteration with Rayleigh refinement for vectors,
//! block inverse iteration for near-degenerate clusters.

use crate::error::{Error, Result};

use super::TRIDIAG_RESIDUAL_TOL;

/// Eigenvalue/eigenvector pair on a 1D grid. The vector is normalized in the
/// plain ℓ² sense and `residual` is ‖(H−E)ψ‖/‖ψ‖ of the discrete operator.
#[derive(Clone, Debug)]
pub struct EigenPair {
    pub energy: f64,
    pub vector: Vec<f64>,
    pub residual: f64,
}

/// Real symmetric tridiagonal operator: diagonal d[0..n), off-diagonal
/// e[0..n-1).
#[derive(Clone, Debug, PartialEq)]
pub struct TridiagonalOperator {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

const PIVOT_GUARD: f64 = 1e-300;

impl TridiagonalOperator {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diag.len() < 2 || off.len() + 1 != diag.len() {
            return Err(Error::InvalidParameter(format!(
                "tridiagonal needs n >= 2 and |off| = n-1; got {} and {}",
                diag.len(),
                off.len()
            )));
        }
        Ok(TridiagonalOperator { diag, off })
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    pub fn matvec(&self, x: &[f64], out: &mut [f64]) {
        let n = self.n();
        for i in 0..n {
            let mut v = self.diag[i] * x[i];
            if i > 0 {
                v += self.off[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                v += self.off[i] * x[i + 1];
            }
            out[i] = v;
        }
    }

    /// ⟨x, T x⟩.
    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        let n = self.n();
        let mut s = 0.0;
        for i in 0..n {
            s += self.diag[i] * x[i] * x[i];
            if i + 1 < n {
                s += 2.0 * self.off[i] * x[i] * x[i + 1];
            }
        }
        s
    }

    pub fn residual(&self, energy: f64, x: &[f64]) -> f64 {
        let mut hx = vec![0.0; self.n()];
        self.matvec(x, &mut hx);
        let mut num = 0.0;
        let mut den = 0.0;
        for i in 0..self.n() {
            num += (hx[i] - energy * x[i]).powi(2);
            den += x[i] * x[i];
        }
        (num / den).sqrt()
    }

    /// Number of eigenvalues strictly below λ (count of negative pivots of
    /// the LDLᵀ factorization of T − λI).
    pub fn sturm_count(&self, lambda: f64) -> usize {
        let n = self.n();
        let mut count = 0usize;
        let mut q = self.diag[0] - lambda;
        if q < 0.0 {
            count += 1;
        }
        for i in 1..n {
            let q_safe = if q.abs() < PIVOT_GUARD {
                if q >= 0.0 {
                    PIVOT_GUARD
                } else {
                    -PIVOT_GUARD
                }
            } else {
                q
            };
            q = (self.diag[i] - lambda) - self.off[i - 1] * self.off[i - 1] / q_safe;
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Gershgorin enclosure of the spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.n();
        let mut lo = f64::MAX;
        let mut hi = f64::MIN;
        for i in 0..n {
            let el = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
            let er = if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - el - er);
            hi = hi.max(self.diag[i] + el + er);
        }
        (lo, hi)
    }

    fn bisect_index(&self, k: usize, mut lo: f64, mut hi: f64) -> f64 {
        for _ in 0..240 {
            let mid = 0.5 * (lo + hi);
            if hi - lo < 2.0 * f64::EPSILON * mid.abs().max(1.0) {
                break;
            }
            if self.sturm_count(mid) <= k {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// All eigenvalues in [lo, hi], ascending. Sturm counts certify
    /// completeness: exactly count(hi) - count(lo) values are returned.
    pub fn eigenvalues_in_window(&self, lo: f64, hi: f64) -> Vec<f64> {
        let k0 = self.sturm_count(lo);
        let k1 = self.sturm_count(hi);
        let (glo, ghi) = self.gershgorin();
        (k0..k1)
            .map(|k| self.bisect_index(k, glo.min(lo) - 1.0, ghi.max(hi) + 1.0))
            .collect()
    }

    /// The m lowest eigenvalues.
    pub fn lowest_eigenvalues(&self, m: usize) -> Vec<f64> {
        let m = m.min(self.n());
        let (glo, ghi) = self.gershgorin();
        (0..m).map(|k| self.bisect_index(k, glo - 1.0, ghi + 1.0)).collect()
    }

    /// Solve (T - λ) x = rhs by LU with partial pivoting (stores into x).
    fn solve_shifted(&self, lambda: f64, rhs: &[f64], x: &mut [f64]) {
        let n = self.n();
        // Banded elimination with row swaps; second superdiagonal fill-in.
        let mut d = vec![0.0; n]; // main diagonal of U
        let mut u1 = vec![0.0; n]; // first superdiagonal
        let mut u2 = vec![0.0; n]; // second superdiagonal (fill-in)
        let mut b = rhs.to_vec();
        let mut sub = vec![0.0; n]; // current subdiagonal entry below the pivot

        for i in 0..n {
            d[i] = self.diag[i] - lambda;
            if i + 1 < n {
                u1[i] = self.off[i];
                sub[i] = self.off[i];
            }
        }
        for i in 0..n - 1 {
            if sub[i].abs() > d[i].abs() {
                // swap rows i and i+1
                let (a1, a2, a3) = (sub[i], d[i + 1], u1[i + 1]);
                sub[i] = d[i];
                d[i + 1] = u1[i];
                u1[i + 1] = 0.0;
                d[i] = a1;
                u1[i] = a2;
                u2[i] = a3;
                b.swap(i, i + 1);
            } else {
                u2[i] = 0.0;
            }
            let piv = if d[i].abs() < PIVOT_GUARD {
                PIVOT_GUARD.copysign(d[i])
            } else {
                d[i]
            };
            let m = sub[i] / piv;
            d[i + 1] -= m * u1[i];
            if i + 2 <= n - 1 {
                u1[i + 1] -= m * u2[i];
            }
            b[i + 1] -= m * b[i];
        }
        for i in (0..n).rev() {
            let mut v = b[i];
            if i + 1 < n {
                v -= u1[i] * x[i + 1];
            }
            if i + 2 < n {
                v -= u2[i] * x[i + 2];
            }
            let piv = if d[i].abs() < PIVOT_GUARD {
                PIVOT_GUARD.copysign(d[i])
            } else {
                d[i]
            };
            x[i] = v / piv;
        }
    }

    /// Eigenpairs for all eigenvalues in [lo, hi]. Near-degenerate clusters
    /// (gaps below 1e-10 · scale) are resolved by block inverse iteration
    /// with in-cluster orthogonalization.
    pub fn eigenpairs_in_window(&self, lo: f64, hi: f64) -> Result<Vec<EigenPair>> {
        let evals = self.eigenvalues_in_window(lo, hi);
        self.eigenpairs_for(&evals)
    }

    /// Eigenpairs for previously computed eigenvalues.
    pub fn eigenpairs_for(&self, evals: &[f64]) -> Result<Vec<EigenPair>> {
        let n = self.n();
        let scale = {
            let (g0, g1) = self.gershgorin();
            g0.abs().max(g1.abs()).max(1.0)
        };
        let cluster_tol = 1e-8 * scale;
        let mut pairs: Vec<EigenPair> = Vec::with_capacity(evals.len());
        let mut i = 0usize;
        while i < evals.len() {
            let mut j = i + 1;
            while j < evals.len() && evals[j] - evals[j - 1] < cluster_tol {
                j += 1;
            }
            // cluster indices [i, j)
            let mut block: Vec<Vec<f64>> = Vec::with_capacity(j - i);
            for (ki, &ev) in evals[i..j].iter().enumerate() {
                let res_tol = TRIDIAG_RESIDUAL_TOL * ev.abs().max(1.0);
                // deterministic pseudo-random start
                let mut v: Vec<f64> = (0..n)
                    .map(|t| {
                        let s = (t as u64)
                            .wrapping_mul(6364136223846793005)
                            .wrapping_add(1442695040888963407 ^ (ki as u64 + 1));
                        ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
                    })
                    .collect();
                normalize(&mut v);
                let mut lam = ev;
                let mut converged = false;
                for it in 0..60 {
                    let mut w = vec![0.0; n];
                    self.solve_shifted(lam, &v, &mut w);
                    // orthogonalize within the cluster
                    for prev in &block {
                        let c = dot(&w, prev);
                        for (wi, pi) in w.iter_mut().zip(prev.iter()) {
                            *wi -= c * pi;
                        }
                    }
                    let nrm = norm(&w);
                    if nrm == 0.0 || !nrm.is_finite() {
                        return Err(Error::NonConvergence { index: i + ki });
                    }
                    for wi in w.iter_mut() {
                        *wi /= nrm;
                    }
                    v = w;
                    // Rayleigh refinement after the first few fixed-shift steps
                    if it >= 2 {
                        lam = self.quadratic_form(&v);
                    }
                    let res = self.residual(lam, &v);
                    if res < res_tol {
                        converged = true;
                        break;
                    }
                }
                if !converged {
                    let res = self.residual(lam, &v);
                    if res >= res_tol {
                        return Err(Error::NonConvergence { index: i + ki });
                    }
                }
                block.push(v);
            }
            for (ki, v) in block.into_iter().enumerate() {
                let lam = self.quadratic_form(&v);
                let res = self.residual(lam, &v);
                pairs.push(EigenPair {
                    energy: lam,
                    vector: v,
                    residual: res,
                });
                let _ = ki;
            }
            i = j;
        }
        pairs.sort_by(|a, b| a.energy.total_cmp(&b.energy));
        Ok(pairs)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn normalize(a: &mut [f64]) {
    let n = norm(a);
    for x in a.iter_mut() {
        *x /= n;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplacian_dirichlet(n: usize, span: f64) -> TridiagonalOperator {
        let h = span / (n + 1) as f64;
        TridiagonalOperator::new(vec![2.0 / (h * h); n], vec![-1.0 / (h * h); n - 1]).unwrap()
    }

    #[test]
    fn laplacian_on_interval_has_squared_integer_spectrum() {
        // -psi'' on [0, pi], Dirichlet: eigenvalues n^2
        let t = laplacian_dirichlet(2000, std::f64::consts::PI);
        let evals = t.eigenvalues_in_window(0.5, 4.5);
        assert_eq!(evals.len(), 2);
        assert!((evals[0] - 1.0).abs() < 1e-5);
        assert!((evals[1] - 4.0).abs() / 4.0 < 1e-5);
    }

    #[test]
    fn harmonic_channel_reproduces_lowest_landau_level() {
        // d = 2/h^2 + (B y)^2, e = -1/h^2 with B = 1: lowest eigenvalue 1
        let n = 4000;
        let (ymin, ymax) = (-12.0, 12.0);
        let h = (ymax - ymin) / (n + 1) as f64;
        let diag: Vec<f64> = (0..n)
            .map(|i| {
                let y: f64 = ymin + (i + 1) as f64 * h;
                2.0 / (h * h) + y * y
            })
            .collect();
        let t = TridiagonalOperator::new(diag, vec![-1.0 / (h * h); n - 1]).unwrap();
        let evals = t.eigenvalues_in_window(0.9, 1.1);
        assert_eq!(evals.len(), 1);
        assert!((evals[0] - 1.0).abs() < 1e-5, "got {}", evals[0]);
    }

    #[test]
    fn window_solve_matches_dense_jacobi_oracle() {
        // random 50x50 tridiagonal vs the dense Jacobi oracle
        let n = 50;
        let mut s = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let diag: Vec<f64> = (0..n).map(|_| 4.0 * next()).collect();
        let off: Vec<f64> = (0..n - 1).map(|_| 2.0 * next()).collect();
        let t = TridiagonalOperator::new(diag.clone(), off.clone()).unwrap();

        let mut a = vec![vec![0.0; n]; n];
        for i in 0..n {
            a[i][i] = diag[i];
            if i + 1 < n {
                a[i][i + 1] = off[i];
                a[i + 1][i] = off[i];
            }
        }
        let (mut dense, _) = crate::linalg::jacobi_eigh(a);
        dense.sort_by(f64::total_cmp);

        let (lo, hi) = t.gershgorin();
        let evals = t.eigenvalues_in_window(lo - 1.0, hi + 1.0);
        assert_eq!(evals.len(), n);
        for (a, b) in evals.iter().zip(dense.iter()) {
            assert!((a - b).abs() < 1e-10, "bisection {a} vs jacobi {b}");
        }
    }

    #[test]
    fn sturm_count_is_monotone() {
        let t = laplacian_dirichlet(300, 1.0);
        let (lo, hi) = t.gershgorin();
        let mut prev = 0;
        for i in 0..=50 {
            let lam = lo + (hi - lo) * i as f64 / 50.0;
            let c = t.sturm_count(lam);
            assert!(c >= prev, "count decreased at {lam}");
            prev = c;
        }
        assert_eq!(prev, 300);
    }

    #[test]
    fn eigenpairs_have_small_residuals_and_orthogonality() {
        let t = laplacian_dirichlet(500, std::f64::consts::PI);
        let pairs = t.eigenpairs_in_window(0.5, 30.0).unwrap();
        assert_eq!(pairs.len(), 5);
        for p in &pairs {
            assert!(p.residual < 1e-9);
        }
        for i in 0..pairs.len() {
            for j in 0..i {
                let d = dot(&pairs[i].vector, &pairs[j].vector).abs();
                assert!(d < 1e-8, "overlap {d} between {i} and {j}");
            }
        }
    }

    #[test]
    fn degenerate_pair_is_resolved_by_block_iteration() {
        // two decoupled identical blocks => exactly degenerate eigenvalues
        let n = 40;
        let mut diag = vec![0.0; 2 * n];
        let mut off = vec![0.0; 2 * n - 1];
        for i in 0..n {
            diag[i] = (i as f64 * 0.37).sin() + 2.0;
            diag[n + i] = diag[i];
        }
        for i in 0..n - 1 {
            off[i] = -1.0;
            off[n + i] = -1.0;
        }
        off[n - 1] = 0.0; // decouple
        let t = TridiagonalOperator::new(diag, off).unwrap();
        let evals = t.lowest_eigenvalues(4);
        assert!((evals[0] - evals[1]).abs() < 1e-12);
        let pairs = t.eigenpairs_for(&evals).unwrap();
        for p in &pairs {
            assert!(p.residual < 1e-9);
        }
        let d01 = dot(&pairs[0].vector, &pairs[1].vector).abs();
        assert!(d01 < 1e-8, "degenerate pair not orthogonal: {d01}");
    }
}
