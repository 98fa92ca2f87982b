//! Exact rational arithmetic on matrices with `f64` entries.
//!
//! Every finite `f64` is a dyadic rational, so a matrix can be lifted exactly
//! to an integer matrix by clearing the common denominator. Fraction-free
//! (Bareiss) elimination then yields leading principal minors and the
//! determinant without rounding.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::SymmetricMatrix;

/// `m = scaled / denom` with `scaled` integral.
struct IntegerLift {
    scaled: Vec<Vec<BigInt>>,
    denom: BigInt,
}

fn lift(m: &SymmetricMatrix) -> IntegerLift {
    let n = m.dim();
    let entries: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| BigRational::from_float(m.get(i, j)).unwrap_or_else(BigRational::zero))
                .collect()
        })
        .collect();
    let denom = entries
        .iter()
        .flatten()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let scaled = entries
        .iter()
        .map(|row| {
            row.iter()
                .map(|r| r.numer() * (&denom / r.denom()))
                .collect()
        })
        .collect();
    IntegerLift { scaled, denom }
}

/// Leading principal minors `det_1..det_n` of `m`, exactly, stopping after the
/// first nonpositive one.
pub(crate) fn leading_minors_until_nonpositive(m: &SymmetricMatrix) -> Vec<BigRational> {
    let n = m.dim();
    let IntegerLift { mut scaled, denom } = lift(m);
    let mut minors = Vec::with_capacity(n);
    let mut prev = BigInt::one();
    let mut denom_pow = BigInt::one();
    for k in 0..n {
        let pivot = scaled[k][k].clone();
        denom_pow *= &denom;
        minors.push(BigRational::new(pivot.clone(), denom_pow.clone()));
        if !pivot.is_positive() {
            break;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&pivot * &scaled[i][j] - &scaled[i][k] * &scaled[k][j]) / &prev;
                scaled[i][j] = v;
            }
        }
        prev = pivot;
    }
    minors
}

/// Exact determinant of `m`.
pub(crate) fn determinant(m: &SymmetricMatrix) -> BigRational {
    let n = m.dim();
    let IntegerLift { mut scaled, denom } = lift(m);
    let mut prev = BigInt::one();
    let mut negate = false;
    for k in 0..n {
        if scaled[k][k].is_zero() {
            match (k + 1..n).find(|&r| !scaled[r][k].is_zero()) {
                Some(r) => {
                    scaled.swap(k, r);
                    negate = !negate;
                }
                None => return BigRational::zero(),
            }
        }
        let pivot = scaled[k][k].clone();
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&pivot * &scaled[i][j] - &scaled[i][k] * &scaled[k][j]) / &prev;
                scaled[i][j] = v;
            }
        }
        prev = pivot;
    }
    let det = BigRational::new(prev, num_traits::pow(denom, n));
    if negate {
        -det
    } else {
        det
    }
}

pub(crate) fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn determinant_of_small_matrices() {
        let a = SymmetricMatrix::from_rows(&[
            vec![4.0, 3.0, -3.0],
            vec![3.0, 4.0, -1.0],
            vec![-3.0, -1.0, 4.0],
        ])
        .unwrap();
        assert_eq!(determinant(&a), rat(6));
        let z = SymmetricMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(determinant(&z), rat(-1));
        let half = SymmetricMatrix::from_rows(&[vec![0.5, 0.25], vec![0.25, 0.5]]).unwrap();
        assert_eq!(determinant(&half), BigRational::new(3.into(), 16.into()));
    }

    #[test]
    fn leading_minors_stop_at_first_failure() {
        let m = SymmetricMatrix::from_rows(&[
            vec![1.0, 2.0, 0.0],
            vec![2.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ])
        .unwrap();
        assert_eq!(leading_minors_until_nonpositive(&m), vec![rat(1), rat(-3)]);
    }
}
