//! Fraction-free (Bareiss) row reduction.
//!
//! Every intermediate entry is a minor of the input, so the exact divisions
//! below never leave the integers.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::IntMatrix;

/// Row echelon form produced by Bareiss elimination. Only the nonzero rows
/// are kept; `pivots[i]` is the pivot column of `rows[i]`.
#[derive(Clone, Debug)]
pub(crate) struct Echelon {
    pub rows: Vec<Vec<BigInt>>,
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

pub(crate) fn bareiss(m: &IntMatrix) -> Echelon {
    bareiss_rows(m.to_rows(), m.cols())
}

/// Pivot choice is deterministic: columns left to right, and within a column
/// the lowest-index remaining row with a nonzero entry.
pub(crate) fn bareiss_rows(mut a: Vec<Vec<BigInt>>, ncols: usize) -> Echelon {
    let nrows = a.len();
    let mut prev = BigInt::one();
    let mut r = 0;
    let mut pivots = Vec::new();
    for col in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let (head, tail) = a.split_at_mut(r + 1);
        let pivot_row = &head[r];
        let pivot = &pivot_row[col];
        for row in tail.iter_mut() {
            if row[col].is_zero() {
                // Still has to be scaled so later divisions stay exact.
                for x in row[col + 1..ncols].iter_mut() {
                    if !x.is_zero() {
                        *x = &*x * pivot / &prev;
                    }
                }
                continue;
            }
            let factor = row[col].clone();
            for j in col + 1..ncols {
                let v = pivot * &row[j] - &factor * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[col] = BigInt::zero();
        }
        prev = pivot.clone();
        pivots.push(col);
        r += 1;
    }
    a.truncate(r);
    Echelon { rows: a, pivots }
}
