//! Banded matrices and their LU factorization with partial pivoting.

#![allow(clippy::needless_range_loop)]

use crate::error::{FvmError, Result};
use crate::scalar::Real;

/// Square band matrix in column-major band storage.
///
/// Column `j` keeps rows `j - ku - kl ..= j + kl`; the extra `kl` super-diagonals hold fill-in
/// created by row interchanges during factorization.
#[derive(Debug, Clone, PartialEq)]
pub struct BandMatrix<T> {
    n: usize,
    kl: usize,
    ku: usize,
    ld: usize,
    data: Vec<T>,
}

impl<T: Real> BandMatrix<T> {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let ld = 2 * kl + ku + 1;
        Self {
            n,
            kl,
            ku,
            ld,
            data: vec![T::zero(); ld * n],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn lower_bandwidth(&self) -> usize {
        self.kl
    }

    pub fn upper_bandwidth(&self) -> usize {
        self.ku
    }

    /// Whether `(i, j)` lies inside the declared band.
    pub fn in_band(&self, i: usize, j: usize) -> bool {
        i < self.n && j < self.n && i <= j + self.kl && j <= i + self.ku
    }

    #[inline]
    fn slot(&self, i: usize, j: usize) -> usize {
        j * self.ld + self.kl + self.ku + i - j
    }

    /// Entry `(i, j)`; zero outside the band.
    pub fn get(&self, i: usize, j: usize) -> T {
        if self.in_band(i, j) {
            self.data[self.slot(i, j)]
        } else {
            T::zero()
        }
    }

    /// Adds `value` to entry `(i, j)`. Panics outside the band.
    pub fn add(&mut self, i: usize, j: usize, value: T) {
        assert!(
            self.in_band(i, j),
            "entry ({i}, {j}) outside band kl={} ku={}",
            self.kl,
            self.ku
        );
        let s = self.slot(i, j);
        self.data[s] += value;
    }

    pub fn set(&mut self, i: usize, j: usize, value: T) {
        assert!(self.in_band(i, j), "entry ({i}, {j}) outside band");
        let s = self.slot(i, j);
        self.data[s] = value;
    }

    /// Column range of row `i` inside the band.
    pub fn row_range(&self, i: usize) -> std::ops::RangeInclusive<usize> {
        i.saturating_sub(self.kl)..=(i + self.ku).min(self.n - 1)
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        (0..self.n)
            .map(|i| self.row_range(i).map(|j| self.get(i, j) * x[j]).sum())
            .collect()
    }

    pub fn norm_inf(&self) -> T {
        (0..self.n)
            .map(|i| self.row_range(i).map(|j| self.get(i, j).abs()).sum::<T>())
            .fold(T::zero(), T::max)
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<Vec<T>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j)).collect())
            .collect()
    }

    /// LU factorization with partial pivoting, consuming the matrix.
    pub fn factor(self) -> Result<BandLu<T>> {
        let n = self.n;
        let (kl, ku) = (self.kl, self.ku);
        let scale = self.data.iter().fold(T::zero(), |m, v| m.max(v.abs()));
        let tiny = T::from_index(n.max(1)) * T::epsilon() * scale;
        let mut a = self;
        let mut pivots = vec![0; n];
        let at = |a: &BandMatrix<T>, i: usize, j: usize| a.data[a.slot(i, j)];
        for k in 0..n {
            let last = (k + kl).min(n - 1);
            let mut p = k;
            let mut best = at(&a, k, k).abs();
            for i in k + 1..=last {
                let v = at(&a, i, k).abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if !(best > tiny) {
                return Err(FvmError::SingularMatrix(k));
            }
            pivots[k] = p;
            let jmax = (k + ku + kl).min(n - 1);
            if p != k {
                for j in k..=jmax {
                    let (sk, sp) = (a.slot(k, j), a.slot(p, j));
                    a.data.swap(sk, sp);
                }
            }
            let pivot = at(&a, k, k);
            for i in k + 1..=last {
                let si = a.slot(i, k);
                let l = a.data[si] / pivot;
                a.data[si] = l;
                if l == T::zero() {
                    continue;
                }
                for j in k + 1..=jmax {
                    let u = a.data[a.slot(k, j)];
                    let s = a.slot(i, j);
                    a.data[s] -= l * u;
                }
            }
        }
        Ok(BandLu { lu: a, pivots })
    }
}

/// Factors `P A = L U` of a [`BandMatrix`].
#[derive(Debug, Clone)]
pub struct BandLu<T> {
    lu: BandMatrix<T>,
    pivots: Vec<usize>,
}

impl<T: Real> BandLu<T> {
    pub fn solve(&self, rhs: &[T]) -> Result<Vec<T>> {
        let a = &self.lu;
        let n = a.n;
        if rhs.len() != n {
            return Err(FvmError::LengthMismatch {
                expected: n,
                got: rhs.len(),
            });
        }
        let mut x = rhs.to_vec();
        for k in 0..n {
            x.swap(k, self.pivots[k]);
            let xk = x[k];
            for i in k + 1..=(k + a.kl).min(n.saturating_sub(1)) {
                x[i] -= a.data[a.slot(i, k)] * xk;
            }
        }
        for k in (0..n).rev() {
            let mut s = x[k];
            for j in k + 1..=(k + a.ku + a.kl).min(n - 1) {
                s -= a.data[a.slot(k, j)] * x[j];
            }
            x[k] = s / a.data[a.slot(k, k)];
        }
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn dense_mul(a: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
        a.iter()
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    #[test]
    fn tridiagonal_solve() {
        let n = 5;
        let mut m = BandMatrix::zeros(n, 1, 1);
        for i in 0..n {
            m.set(i, i, 2.0);
            if i > 0 {
                m.set(i, i - 1, -1.0);
            }
            if i + 1 < n {
                m.set(i, i + 1, -1.0);
            }
        }
        let x_true: Vec<f64> = (0..n).map(|i| i as f64 + 1.0).collect();
        let b = m.mul_vec(&x_true);
        let x = m.factor().unwrap().solve(&b).unwrap();
        for (a, b) in x.iter().zip(&x_true) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-13);
        }
    }

    #[test]
    fn pivoting_needed() {
        // zero on the diagonal forces a row swap
        let mut m = BandMatrix::zeros(3, 1, 1);
        m.set(0, 0, 0.0);
        m.set(0, 1, 1.0);
        m.set(1, 0, 1.0);
        m.set(1, 1, 1.0);
        m.set(1, 2, 1.0);
        m.set(2, 1, 1.0);
        m.set(2, 2, 3.0);
        let b = m.mul_vec(&[1.0, 2.0, 3.0]);
        let x = m.factor().unwrap().solve(&b).unwrap();
        for (a, b) in x.iter().zip([1.0, 2.0, 3.0]) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-14);
        }
    }

    #[test]
    fn singular_detected() {
        let mut m = BandMatrix::<f64>::zeros(3, 1, 1);
        m.set(0, 0, 1.0);
        m.set(1, 1, 1.0);
        assert!(matches!(m.factor(), Err(FvmError::SingularMatrix(2))));
    }

    #[test]
    #[should_panic]
    fn writes_outside_band_panic() {
        let mut m = BandMatrix::<f64>::zeros(4, 1, 1);
        m.add(0, 3, 1.0);
    }

    proptest! {
        #[test]
        fn random_band_systems(
            n in 1usize..25,
            kl in 0usize..4,
            ku in 0usize..4,
            seed in proptest::collection::vec(-1.0f64..1.0, 25 * 25),
        ) {
            let mut m = BandMatrix::zeros(n, kl, ku);
            for i in 0..n {
                for j in m.row_range(i) {
                    let mut v = seed[i * 25 + j];
                    if i == j {
                        v += if v >= 0.0 { 0.5 } else { -0.5 };
                    }
                    m.set(i, j, v);
                }
            }
            let dense = m.to_dense();
            let x_true: Vec<f64> = (0..n).map(|i| (i as f64).sin() + 0.3).collect();
            let b = dense_mul(&dense, &x_true);
            if let Ok(lu) = m.clone().factor() {
                let x = lu.solve(&b).unwrap();
                let r = dense_mul(&dense, &x);
                let scale = m.norm_inf() * x.iter().fold(0.0f64, |a, v| a.max(v.abs()))
                    + b.iter().fold(0.0f64, |a, v| a.max(v.abs()));
                for (ri, bi) in r.iter().zip(&b) {
                    prop_assert!((ri - bi).abs() <= 1e-10 * scale);
                }
            }
        }
    }
}
