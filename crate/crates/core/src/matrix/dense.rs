//! Small row-major dense kernels used for Schur complements and
//! floating-point determinants.

use crate::error::{Error, Result};

/// Row-major rectangular matrix.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Dense {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl Dense {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }

    fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m: f64, x| m.max(x.abs()))
    }
}

/// LU factorization with partial pivoting of a square matrix.
pub(crate) struct Lu {
    n: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
    odd_swaps: bool,
}

/// Pivots at or below this multiple of `n * max|a_ij|` count as zero.
const SINGULAR_RTOL: f64 = 64.0 * f64::EPSILON;

impl Lu {
    /// Factors `a`; a numerically zero pivot is [`Error::SingularBlock`].
    pub fn factor(a: &Dense) -> Result<Self> {
        Self::factor_inner(a).ok_or(Error::SingularBlock)
    }

    fn factor_inner(a: &Dense) -> Option<Self> {
        let n = a.rows;
        let mut lu = a.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut odd_swaps = false;
        let tiny = SINGULAR_RTOL * n as f64 * a.max_abs();
        for k in 0..n {
            let p = (k..n)
                .max_by(|&x, &y| lu[x * n + k].abs().total_cmp(&lu[y * n + k].abs()))
                .unwrap_or(k);
            if lu[p * n + k].abs() <= tiny || lu[p * n + k] == 0.0 {
                return None;
            }
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                odd_swaps = !odd_swaps;
            }
            let pivot = lu[k * n + k];
            for i in k + 1..n {
                let f = lu[i * n + k] / pivot;
                lu[i * n + k] = f;
                if f != 0.0 {
                    for j in k + 1..n {
                        lu[i * n + j] -= f * lu[k * n + j];
                    }
                }
            }
        }
        Some(Self {
            n,
            lu,
            perm,
            odd_swaps,
        })
    }

    pub fn det(&self) -> f64 {
        let d: f64 = (0..self.n).map(|i| self.lu[i * self.n + i]).product();
        if self.odd_swaps {
            -d
        } else {
            d
        }
    }

    /// Solves `A X = B` for every column of `b`.
    pub fn solve(&self, b: &Dense) -> Dense {
        let n = self.n;
        let mut x = Dense::zeros(n, b.cols);
        for c in 0..b.cols {
            let mut y: Vec<f64> = (0..n).map(|i| b.at(self.perm[i], c)).collect();
            for i in 0..n {
                let s: f64 = (0..i).map(|j| self.lu[i * n + j] * y[j]).sum();
                y[i] -= s;
            }
            for i in (0..n).rev() {
                let s: f64 = (i + 1..n).map(|j| self.lu[i * n + j] * y[j]).sum();
                y[i] = (y[i] - s) / self.lu[i * n + i];
            }
            for (i, v) in y.into_iter().enumerate() {
                *x.at_mut(i, c) = v;
            }
        }
        x
    }
}

/// Determinant by LU with partial pivoting; zero when a pivot vanishes.
pub(crate) fn determinant(a: &Dense) -> f64 {
    Lu::factor_inner(a).map_or(0.0, |lu| lu.det())
}
