//! Dense real symmetric matrices and the linear-algebra predicates needed to
//! reason about thresholding: positive definiteness, diagonal dominance,
//! Gershgorin discs, Schur complements and determinants.

pub(crate) mod dense;
mod exact;

use nalgebra::DMatrix;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use dense::{Dense, Lu};

/// Default relative tolerance for the floating-point positive definiteness
/// test.
pub const DEFAULT_PD_TOL: f64 = 1e-10;

/// Largest dimension for which [`PdMethod::Auto`] uses exact arithmetic.
pub const EXACT_AUTO_MAX_DIM: usize = 64;

/// Dense real symmetric matrix with finite entries.
///
/// Storage is a full row-major array kept symmetric by every mutator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetricMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymmetricMatrix {
    /// Builds a matrix from rows, requiring exact symmetry.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        let m = Self { n, data };
        for i in 0..n {
            for j in 0..n {
                if !m.get(i, j).is_finite() {
                    return Err(Error::NonFinite { row: i + 1, col: j + 1 });
                }
                if j > i && m.get(i, j) != m.get(j, i) {
                    return Err(Error::NotSymmetric { row: i + 1, col: j + 1 });
                }
            }
        }
        Ok(m)
    }

    /// Builds a matrix from its upper triangle: `f(i, j)` is queried for
    /// `i <= j` only and mirrored.
    pub fn from_upper_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                if !v.is_finite() {
                    return Err(Error::NonFinite { row: i + 1, col: j + 1 });
                }
                m.data[i * n + j] = v;
                m.data[j * n + i] = v;
            }
        }
        Ok(m)
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![1.0; n])
    }

    pub fn diagonal(d: &[f64]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &v) in d.iter().enumerate() {
            m.set(i, i, v);
        }
        m
    }

    /// Symmetric tridiagonal matrix with the given diagonal and off-diagonal.
    pub fn tridiagonal(diag: &[f64], off: &[f64]) -> Result<Self> {
        if off.len() + 1 != diag.len() {
            return Err(Error::DimensionMismatch {
                expected: diag.len().saturating_sub(1),
                found: off.len(),
            });
        }
        Self::from_upper_fn(diag.len(), |i, j| {
            if i == j {
                diag[i]
            } else if j == i + 1 {
                off[i]
            } else {
                0.0
            }
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    /// Sets `a_ij = a_ji = v`.
    ///
    /// Panics if `v` is not finite.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        assert!(v.is_finite(), "matrix entries must be finite");
        self.data[i * self.n + j] = v;
        self.data[j * self.n + i] = v;
    }

    pub fn diag(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.n).map(<[f64]>::to_vec).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m: f64, x| m.max(x.abs()))
    }

    pub fn max_diag(&self) -> f64 {
        self.diag().into_iter().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Principal submatrix on `idx`, in the given order.
    pub fn principal(&self, idx: &[usize]) -> SymmetricMatrix {
        let k = idx.len();
        let mut data = Vec::with_capacity(k * k);
        for &i in idx {
            for &j in idx {
                data.push(self.get(i, j));
            }
        }
        Self { n: k, data }
    }

    /// `result[i][j] = self[order[i]][order[j]]`.
    pub fn permuted(&self, order: &[usize]) -> SymmetricMatrix {
        self.principal(order)
    }

    pub fn scaled(&self, factor: f64) -> SymmetricMatrix {
        Self {
            n: self.n,
            data: self.data.iter().map(|x| x * factor).collect(),
        }
    }

    /// `self + delta * I`.
    pub fn shifted(&self, delta: f64) -> SymmetricMatrix {
        let mut m = self.clone();
        for i in 0..self.n {
            m.data[i * self.n + i] += delta;
        }
        m
    }

    pub(crate) fn block(&self, rows: &[usize], cols: &[usize]) -> Dense {
        let mut b = Dense::zeros(rows.len(), cols.len());
        for (r, &i) in rows.iter().enumerate() {
            for (c, &j) in cols.iter().enumerate() {
                *b.at_mut(r, c) = self.get(i, j);
            }
        }
        b
    }

    fn as_dense(&self) -> Dense {
        Dense {
            rows: self.n,
            cols: self.n,
            data: self.data.clone(),
        }
    }

    fn to_nalgebra(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.n, self.n, &self.data)
    }
}

/// Arithmetic used by the positive definiteness test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PdMode {
    FloatPivot,
    ExactRational,
}

/// Mode selection for [`is_positive_definite_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PdMethod {
    /// Exact when `n <= EXACT_AUTO_MAX_DIM`, floating point otherwise. Every
    /// finite `f64` is an exact dyadic rational, so the exact route applies
    /// to any valid matrix.
    #[default]
    Auto,
    Float,
    Exact,
}

/// Verdict of a positive definiteness test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PdReport {
    pub is_pd: bool,
    /// Some pivot fell inside the `±tol` band (floating-point mode only).
    pub indeterminate: bool,
    pub mode: PdMode,
    /// Smallest pivot seen (`det_k / det_{k-1}` in exact mode).
    pub min_pivot_or_eigenvalue: f64,
    /// 1-based order of the first leading minor that failed.
    pub failing_minor_order: Option<usize>,
}

impl PdReport {
    pub fn label(&self) -> &'static str {
        if self.is_pd {
            "PD"
        } else if self.indeterminate {
            "INDETERMINATE"
        } else {
            "NOT PD"
        }
    }
}

/// Positive definiteness with automatic mode selection.
pub fn is_positive_definite(m: &SymmetricMatrix, tol: f64) -> PdReport {
    is_positive_definite_with(m, tol, PdMethod::Auto)
}

pub fn is_positive_definite_with(m: &SymmetricMatrix, tol: f64, method: PdMethod) -> PdReport {
    let exact = match method {
        PdMethod::Auto => m.dim() <= EXACT_AUTO_MAX_DIM,
        PdMethod::Float => false,
        PdMethod::Exact => true,
    };
    if exact {
        pd_exact(m)
    } else {
        pd_float(m, tol)
    }
}

/// Symmetric `LDL^T` without pivoting; every pivot must exceed
/// `tol * max(1, max diagonal)`.
fn pd_float(m: &SymmetricMatrix, tol: f64) -> PdReport {
    let n = m.dim();
    let threshold = tol * m.max_diag().max(1.0);
    let mut l = vec![0.0; n * n];
    let mut d = vec![0.0; n];
    let mut min_pivot = f64::INFINITY;
    for k in 0..n {
        let pivot = m.get(k, k) - (0..k).map(|j| l[k * n + j] * l[k * n + j] * d[j]).sum::<f64>();
        min_pivot = min_pivot.min(pivot);
        if pivot <= threshold {
            return PdReport {
                is_pd: false,
                indeterminate: pivot >= -threshold,
                mode: PdMode::FloatPivot,
                min_pivot_or_eigenvalue: min_pivot,
                failing_minor_order: Some(k + 1),
            };
        }
        d[k] = pivot;
        for i in k + 1..n {
            let s: f64 = (0..k).map(|j| l[i * n + j] * l[k * n + j] * d[j]).sum();
            l[i * n + k] = (m.get(i, k) - s) / pivot;
        }
    }
    PdReport {
        is_pd: true,
        indeterminate: false,
        mode: PdMode::FloatPivot,
        min_pivot_or_eigenvalue: min_pivot,
        failing_minor_order: None,
    }
}

/// All leading principal minors positive, by fraction-free elimination.
fn pd_exact(m: &SymmetricMatrix) -> PdReport {
    use num_traits::{One, Signed};
    let minors = exact::leading_minors_until_nonpositive(m);
    let mut prev = BigRational::one();
    let mut min_pivot = f64::INFINITY;
    let mut failing = None;
    for (k, minor) in minors.iter().enumerate() {
        if minor.is_positive() {
            min_pivot = min_pivot.min(exact::ratio_to_f64(&(minor / &prev)));
            prev = minor.clone();
        } else {
            // prev is positive here, so the pivot carries the minor's sign.
            let pivot = if minor.is_negative() {
                exact::ratio_to_f64(&(minor / &prev))
            } else {
                0.0
            };
            min_pivot = min_pivot.min(pivot);
            failing = Some(k + 1);
            break;
        }
    }
    PdReport {
        is_pd: failing.is_none(),
        indeterminate: false,
        mode: PdMode::ExactRational,
        min_pivot_or_eigenvalue: min_pivot,
        failing_minor_order: failing,
    }
}

/// Eigenvalues in ascending order.
pub fn eigenvalues(m: &SymmetricMatrix) -> Vec<f64> {
    let mut ev: Vec<f64> = m.to_nalgebra().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

pub fn min_eigenvalue(m: &SymmetricMatrix) -> f64 {
    eigenvalues(m)[0]
}

/// Spectral norm (largest eigenvalue magnitude).
pub fn spectral_norm(m: &SymmetricMatrix) -> f64 {
    eigenvalues(m).into_iter().fold(0.0, |a: f64, x| a.max(x.abs()))
}

/// Schur complement of the block on `V \ keep`:
/// `M_KK - M_KR M_RR^{-1} M_RK`, indexed by `keep` in ascending order.
pub fn schur_complement(m: &SymmetricMatrix, keep: &[usize]) -> Result<SymmetricMatrix> {
    let mut keep = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    let rest: Vec<usize> = (0..m.dim()).filter(|v| keep.binary_search(v).is_err()).collect();
    schur_complement_within(m, &keep, &rest)
}

/// Schur complement of `M_EE` in the principal submatrix on `keep ∪ eliminate`,
/// indexed by `keep` in the given order.
pub fn schur_complement_within(
    m: &SymmetricMatrix,
    keep: &[usize],
    eliminate: &[usize],
) -> Result<SymmetricMatrix> {
    if keep.is_empty() {
        return Err(Error::EmptyVertexSet);
    }
    if let Some(&v) = keep.iter().chain(eliminate).find(|&&v| v >= m.dim()) {
        return Err(Error::VertexOutOfRange {
            vertex: v + 1,
            n: m.dim(),
        });
    }
    let mut s = m.principal(keep);
    if eliminate.is_empty() {
        return Ok(s);
    }
    let lu = Lu::factor(&m.block(eliminate, eliminate))?;
    let coupling = m.block(eliminate, keep);
    let x = lu.solve(&coupling);
    let k = keep.len();
    for i in 0..k {
        for j in i..k {
            let a: f64 = (0..eliminate.len()).map(|r| coupling.at(r, i) * x.at(r, j)).sum();
            let b: f64 = (0..eliminate.len()).map(|r| coupling.at(r, j) * x.at(r, i)).sum();
            let v = s.get(i, j) - 0.5 * (a + b);
            s.set(i, j, v);
        }
    }
    Ok(s)
}

/// Row-wise diagonal dominance margins `|a_ii| - Σ_{j≠i} |a_ij|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominanceReport {
    pub strictly_dominant: bool,
    pub margins: Vec<f64>,
}

impl DominanceReport {
    /// Rows with `|a_ii| < Σ_{j≠i} |a_ij|`.
    pub fn violating_rows(&self) -> usize {
        self.margins.iter().filter(|&&x| x < 0.0).count()
    }
}

pub fn is_strictly_diagonally_dominant(m: &SymmetricMatrix) -> DominanceReport {
    let margins: Vec<f64> = gershgorin_discs(m)
        .iter()
        .map(|d| d.center.abs() - d.radius)
        .collect();
    DominanceReport {
        strictly_dominant: margins.iter().all(|&x| x > 0.0),
        margins,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Disc {
    pub center: f64,
    pub radius: f64,
}

pub fn gershgorin_discs(m: &SymmetricMatrix) -> Vec<Disc> {
    (0..m.dim())
        .map(|i| Disc {
            center: m.get(i, i),
            radius: (0..m.dim()).filter(|&j| j != i).map(|j| m.get(i, j).abs()).sum(),
        })
        .collect()
}

/// Floating-point determinant (LU with partial pivoting).
pub fn determinant(m: &SymmetricMatrix) -> f64 {
    dense::determinant(&m.as_dense())
}

/// Exact determinant of the matrix whose entries are the given `f64` values.
pub fn determinant_exact(m: &SymmetricMatrix) -> BigRational {
    exact::determinant(m)
}

/// Exact leading principal minors, stopping after the first nonpositive one.
pub fn leading_minors_exact(m: &SymmetricMatrix) -> Vec<BigRational> {
    exact::leading_minors_until_nonpositive(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num_bigint::BigInt;

    fn m(rows: &[&[f64]]) -> SymmetricMatrix {
        SymmetricMatrix::from_rows(rows).unwrap()
    }

    fn paper_a() -> SymmetricMatrix {
        m(&[&[4.0, 3.0, -3.0], &[3.0, 4.0, -1.0], &[-3.0, -1.0, 4.0]])
    }

    fn paper_ag() -> SymmetricMatrix {
        m(&[&[4.0, 3.0, -3.0], &[3.0, 4.0, 0.0], &[-3.0, 0.0, 4.0]])
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            SymmetricMatrix::from_rows(&[[1.0, 2.0], [3.0, 1.0]]),
            Err(Error::NotSymmetric { row: 1, col: 2 })
        );
        assert_eq!(
            SymmetricMatrix::from_rows(&[[f64::NAN]]),
            Err(Error::NonFinite { row: 1, col: 1 })
        );
        assert_eq!(
            SymmetricMatrix::from_rows::<[f64; 0]>(&[]),
            Err(Error::EmptyMatrix)
        );
    }

    #[test]
    fn pd_examples_in_both_modes() {
        for method in [PdMethod::Float, PdMethod::Exact] {
            assert!(is_positive_definite_with(&paper_a(), DEFAULT_PD_TOL, method).is_pd);
            let r = is_positive_definite_with(&paper_ag(), DEFAULT_PD_TOL, method);
            assert!(!r.is_pd && !r.indeterminate);
            assert_eq!(r.failing_minor_order, Some(3));
            assert!(is_positive_definite_with(&SymmetricMatrix::identity(5), DEFAULT_PD_TOL, method).is_pd);
        }
        assert_eq!(is_positive_definite(&paper_a(), DEFAULT_PD_TOL).mode, PdMode::ExactRational);
    }

    #[test]
    fn float_boundary_is_indeterminate() {
        let singular = m(&[&[1.0, 1.0], &[1.0, 1.0]]);
        let r = is_positive_definite_with(&singular, DEFAULT_PD_TOL, PdMethod::Float);
        assert!(!r.is_pd && r.indeterminate);
        let r = is_positive_definite_with(&singular, DEFAULT_PD_TOL, PdMethod::Exact);
        assert!(!r.is_pd && !r.indeterminate);
        assert_eq!(r.min_pivot_or_eigenvalue, 0.0);
    }

    #[test]
    fn eigen_examples() {
        assert_relative_eq!(min_eigenvalue(&SymmetricMatrix::identity(3)), 1.0, epsilon = 1e-12);
        assert!(min_eigenvalue(&paper_ag()) < 0.0);
        assert_relative_eq!(min_eigenvalue(&SymmetricMatrix::diagonal(&[2.0, 5.0])), 2.0);
    }

    #[test]
    fn schur_examples() {
        let (alpha, a, beta) = (3.0, 1.5, 2.0);
        let s = schur_complement(&m(&[&[alpha, a], &[a, beta]]), &[0]).unwrap();
        assert_relative_eq!(s.get(0, 0), alpha - a * a / beta, epsilon = 1e-15);

        let blocks = m(&[&[2.0, 1.0, 0.0], &[1.0, 2.0, 0.0], &[0.0, 0.0, 7.0]]);
        let s = schur_complement(&blocks, &[0, 1]).unwrap();
        assert_eq!(s, blocks.principal(&[0, 1]));

        let t = SymmetricMatrix::tridiagonal(&[2.0; 3], &[1.0; 2]).unwrap();
        let s = schur_complement(&t, &[0]).unwrap();
        assert_relative_eq!(s.get(0, 0), 4.0 / 3.0, epsilon = 1e-14);

        let sing = m(&[&[1.0, 1.0, 1.0], &[1.0, 1.0, 1.0], &[1.0, 1.0, 1.0]]);
        assert_eq!(schur_complement(&sing, &[0]), Err(Error::SingularBlock));
    }

    #[test]
    fn dominance_and_discs() {
        assert!(is_strictly_diagonally_dominant(&SymmetricMatrix::identity(3)).strictly_dominant);
        let prop = m(&[&[3.0, -2.0, -2.0], &[-2.0, 3.0, 2.0], &[-2.0, 2.0, 3.0]]);
        let r = is_strictly_diagonally_dominant(&prop);
        assert!(!r.strictly_dominant);
        assert_eq!(r.violating_rows(), 3);
        let r = is_strictly_diagonally_dominant(&m(&[&[2.0, 1.0], &[1.0, 2.0]]));
        assert!(r.strictly_dominant);
        assert_eq!(r.margins, vec![1.0, 1.0]);

        assert_eq!(
            gershgorin_discs(&m(&[&[2.0, 1.0], &[1.0, 2.0]])),
            vec![Disc { center: 2.0, radius: 1.0 }; 2]
        );
        assert_eq!(
            gershgorin_discs(&SymmetricMatrix::diagonal(&[5.0])),
            vec![Disc { center: 5.0, radius: 0.0 }]
        );
        assert_eq!(gershgorin_discs(&prop), vec![Disc { center: 3.0, radius: 4.0 }; 3]);
    }

    #[test]
    fn determinant_examples() {
        let int = |v: i64| BigRational::from_integer(BigInt::from(v));
        assert_eq!(determinant_exact(&paper_a()), int(6));
        assert_eq!(determinant_exact(&paper_ag()), int(-8));
        assert_eq!(determinant_exact(&SymmetricMatrix::identity(4)), int(1));
        assert_relative_eq!(determinant(&paper_a()), 6.0, epsilon = 1e-12);
        assert_relative_eq!(determinant(&paper_ag()), -8.0, epsilon = 1e-12);
    }
}
