//! Symmetric banded storage and an in-place Cholesky factorization.
//!
//! Column-major numbering along the short side of the grid keeps the
//! half-bandwidth at `2 * (ny + 2) + 1`, so a dense band factorization costs
//! `O(m * b^2)` with no fill outside the band.

use crate::error::{Error, Result};

/// Pivots below this fraction of their original diagonal count as singular.
pub const PIVOT_RTOL: f64 = 1e-14;

/// Lower band of a symmetric matrix. Row `i` stores columns `i - bw ..= i`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymBandMatrix {
    n: usize,
    bw: usize,
    data: Vec<f64>,
}

impl SymBandMatrix {
    pub fn zeros(n: usize, bw: usize) -> Self {
        Self {
            n,
            bw,
            data: vec![0.0; n * (bw + 1)],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.bw
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(j <= i && i - j <= self.bw);
        i * (self.bw + 1) + (j + self.bw - i)
    }

    /// Entry `(i, j)`; zero outside the band.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        if i - j > self.bw {
            0.0
        } else {
            self.data[self.idx(i, j)]
        }
    }

    /// Adds `v` to the symmetric pair `(i, j)` / `(j, i)`.
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        assert!(i - j <= self.bw, "entry ({i}, {j}) outside band {}", self.bw);
        let k = self.idx(i, j);
        self.data[k] += v;
    }

    /// Full-matrix product `y = A x`.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        let mut y = vec![0.0; self.n];
        for i in 0..self.n {
            let j0 = i.saturating_sub(self.bw);
            let row = &self.data[self.idx(i, j0)..=self.idx(i, i)];
            let mut acc = row[row.len() - 1] * x[i];
            for (off, &a) in row[..row.len() - 1].iter().enumerate() {
                let j = j0 + off;
                acc += a * x[j];
                y[j] += a * x[i];
            }
            y[i] += acc;
        }
        y
    }

    /// Largest absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        let mut sums = vec![0.0; self.n];
        for i in 0..self.n {
            for j in i.saturating_sub(self.bw)..=i {
                let a = self.data[self.idx(i, j)].abs();
                sums[i] += a;
                if j != i {
                    sums[j] += a;
                }
            }
        }
        sums.into_iter().fold(0.0, f64::max)
    }

    /// Zeroes row and column `d` and puts a unit on the diagonal.
    pub fn constrain(&mut self, d: usize) {
        let j0 = d.saturating_sub(self.bw);
        for j in j0..d {
            let k = self.idx(d, j);
            self.data[k] = 0.0;
        }
        for i in d + 1..(d + self.bw + 1).min(self.n) {
            let k = self.idx(i, d);
            self.data[k] = 0.0;
        }
        let k = self.idx(d, d);
        self.data[k] = 1.0;
    }

    /// Dense copy, for tests and small problems.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j)).collect())
            .collect()
    }

    /// Factors `A = L L^T` in place.
    pub fn cholesky(mut self) -> Result<BandCholesky> {
        let w = self.bw + 1;
        for i in 0..self.n {
            let j0 = i.saturating_sub(self.bw);
            for j in j0..=i {
                // Columns shared by rows i and j inside both bands.
                let k0 = j0.max(j.saturating_sub(self.bw));
                let ri = i * w + (k0 + self.bw - i);
                let rj = j * w + (k0 + self.bw - j);
                let len = j - k0;
                let a = self.data[i * w + (j + self.bw - i)];
                let mut s = a;
                let (li, lj) = (&self.data[ri..ri + len], &self.data[rj..rj + len]);
                s -= li.iter().zip(lj).map(|(a, b)| a * b).sum::<f64>();
                let k = i * w + (j + self.bw - i);
                if i == j {
                    if !(s > PIVOT_RTOL * a) || !s.is_finite() {
                        return Err(Error::SingularSystem { row: i, pivot: s });
                    }
                    self.data[k] = s.sqrt();
                } else {
                    self.data[k] = s / self.data[j * w + self.bw];
                }
            }
        }
        Ok(BandCholesky { l: self })
    }
}

#[derive(Debug, Clone)]
pub struct BandCholesky {
    l: SymBandMatrix,
}

impl BandCholesky {
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let l = &self.l;
        let (n, bw, w) = (l.n, l.bw, l.bw + 1);
        assert_eq!(b.len(), n);
        let mut y = b.to_vec();
        for i in 0..n {
            let j0 = i.saturating_sub(bw);
            let row = &l.data[i * w + (j0 + bw - i)..i * w + bw];
            let s: f64 = row.iter().zip(&y[j0..i]).map(|(a, b)| a * b).sum();
            y[i] = (y[i] - s) / l.data[i * w + bw];
        }
        for i in (0..n).rev() {
            y[i] /= l.data[i * w + bw];
            let yi = y[i];
            let j0 = i.saturating_sub(bw);
            let row = &l.data[i * w + (j0 + bw - i)..i * w + bw];
            for (yj, a) in y[j0..i].iter_mut().zip(row) {
                *yj -= a * yi;
            }
        }
        y
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tridiag(n: usize) -> SymBandMatrix {
        let mut a = SymBandMatrix::zeros(n, 1);
        for i in 0..n {
            a.add(i, i, 2.0);
            if i > 0 {
                a.add(i, i - 1, -1.0);
            }
        }
        a
    }

    #[test]
    fn infinity_norm() {
        let mut a = SymBandMatrix::zeros(3, 1);
        a.add(0, 0, 2.0);
        a.add(1, 0, -3.0);
        a.add(1, 1, 1.0);
        a.add(2, 2, 0.5);
        assert_eq!(a.norm_inf(), 5.0);
    }

    #[test]
    fn solves_tridiagonal() {
        let a = tridiag(6);
        let x: Vec<f64> = (0..6).map(|i| i as f64 - 2.5).collect();
        let b = a.mul_vec(&x);
        let got = a.cholesky().unwrap().solve(&b);
        for (g, e) in got.iter().zip(&x) {
            assert!((g - e).abs() < 1e-12);
        }
    }

    #[test]
    fn wide_band_matches_dense_product() {
        let n = 9;
        let mut a = SymBandMatrix::zeros(n, 3);
        for i in 0..n {
            a.add(i, i, 10.0 + i as f64);
            for j in i.saturating_sub(3)..i {
                a.add(i, j, 0.3 * ((i * 7 + j * 3) % 5) as f64 - 0.6);
            }
        }
        let x: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
        let dense = a.to_dense();
        let b = a.mul_vec(&x);
        for i in 0..n {
            let e: f64 = (0..n).map(|j| dense[i][j] * x[j]).sum();
            assert!((b[i] - e).abs() < 1e-12);
        }
        let got = a.cholesky().unwrap().solve(&b);
        for (g, e) in got.iter().zip(&x) {
            assert!((g - e).abs() < 1e-10);
        }
    }

    #[test]
    fn indefinite_is_singular() {
        let mut a = tridiag(3);
        a.add(2, 2, -5.0);
        assert!(matches!(a.cholesky(), Err(Error::SingularSystem { row: 2, .. })));
    }

    #[test]
    fn constrain_keeps_symmetry() {
        let mut a = tridiag(4);
        a.constrain(1);
        let d = a.to_dense();
        assert_eq!(d[1], vec![0.0, 1.0, 0.0, 0.0]);
        assert_eq!(d[2][1], 0.0);
        assert_eq!(d[0][0], 2.0);
    }
}
