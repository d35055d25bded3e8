//! Symmetric tridiagonal eigenvalues by Sturm bisection and eigenvectors by
//! inverse iteration.

use alloc::vec;
use alloc::vec::Vec;

pub(crate) struct SymTridiag {
    pub diag: Vec<f64>,
    /// `off[i]` couples rows `i` and `i + 1`.
    pub off: Vec<f64>,
}

impl SymTridiag {
    pub fn len(&self) -> usize {
        self.diag.len()
    }

    /// Number of eigenvalues strictly below `x` (negative pivots of the
    /// LDL^T factorization of `T - x`).
    pub fn count_below(&self, x: f64) -> usize {
        let mut count = 0;
        let mut d = 1.0;
        for i in 0..self.len() {
            let coupling = if i == 0 {
                0.0
            } else {
                self.off[i - 1] * self.off[i - 1] / d
            };
            d = self.diag[i] - x - coupling;
            if d == 0.0 {
                d = -f64::EPSILON * (x.abs() + self.diag[i].abs()).max(f64::MIN_POSITIVE);
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Gershgorin interval containing the spectrum.
    pub fn bounds(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.off[i - 1].abs() } else { 0.0 }
                + if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// The `k`-th eigenvalue (0-based) to full precision.
    pub fn eigenvalue(&self, k: usize) -> f64 {
        let (mut lo, mut hi) = self.bounds();
        for _ in 0..300 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Unit eigenvector for the (isolated) eigenvalue `lambda`.
    pub fn eigenvector(&self, lambda: f64) -> Vec<f64> {
        let n = self.len();
        let scale = self
            .diag
            .iter()
            .chain(&self.off)
            .fold(0.0f64, |m, x| m.max(x.abs()));
        let tiny = f64::EPSILON * scale.max(f64::MIN_POSITIVE);
        let lu = Lu::factor(self, lambda, tiny);
        let mut x: Vec<f64> = (0..n)
            .map(|i| 1.0 + 0.25 * ((i * 7919 % 13) as f64 / 13.0))
            .collect();
        for _ in 0..4 {
            x = lu.solve(x);
            let norm = libm::sqrt(x.iter().map(|v| v * v).sum::<f64>());
            x.iter_mut().for_each(|v| *v /= norm);
        }
        x
    }
}

/// LU factors of `T - shift` with partial pivoting (LAPACK gttrf layout).
struct Lu {
    l: Vec<f64>,
    d: Vec<f64>,
    u1: Vec<f64>,
    u2: Vec<f64>,
    swapped: Vec<bool>,
}

impl Lu {
    fn factor(t: &SymTridiag, shift: f64, tiny: f64) -> Self {
        let n = t.len();
        let mut d: Vec<f64> = t.diag.iter().map(|x| x - shift).collect();
        let mut dl = t.off.clone();
        let mut u1 = t.off.clone();
        u1.push(0.0);
        let mut u2 = vec![0.0; n];
        let mut l = vec![0.0; n];
        let mut swapped = vec![false; n];
        for i in 0..n.saturating_sub(1) {
            if d[i].abs() >= dl[i].abs() {
                if d[i] == 0.0 {
                    d[i] = tiny;
                }
                let f = dl[i] / d[i];
                l[i] = f;
                d[i + 1] -= f * u1[i];
            } else {
                let f = d[i] / dl[i];
                d[i] = dl[i];
                l[i] = f;
                let tmp = u1[i];
                u1[i] = d[i + 1];
                d[i + 1] = tmp - f * d[i + 1];
                if i + 2 < n {
                    u2[i] = u1[i + 1];
                    u1[i + 1] *= -f;
                }
                swapped[i] = true;
            }
            dl[i] = 0.0;
        }
        if n > 0 && d[n - 1] == 0.0 {
            d[n - 1] = tiny;
        }
        Lu {
            l,
            d,
            u1,
            u2,
            swapped,
        }
    }

    fn solve(&self, mut b: Vec<f64>) -> Vec<f64> {
        let n = b.len();
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                b.swap(i, i + 1);
                b[i + 1] -= self.l[i] * b[i];
            } else {
                b[i + 1] -= self.l[i] * b[i];
            }
        }
        for i in (0..n).rev() {
            let mut s = b[i];
            if i + 1 < n {
                s -= self.u1[i] * b[i + 1];
            }
            if i + 2 < n {
                s -= self.u2[i] * b[i + 2];
            }
            b[i] = s / self.d[i];
        }
        b
    }
}
