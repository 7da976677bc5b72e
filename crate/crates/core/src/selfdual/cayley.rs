//! Cayley structure: partitions of the points whose indicator vectors are
//! affine functions on the configuration.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::SelfdualError;
use crate::config::LatticeConfiguration;
use crate::exactla::{self, bareiss, RowSpace};

pub const DEFAULT_CAYLEY_BOUND: usize = 24;

/// True iff the indicator of every part lies in the rowspan of `A`.
pub fn cayley_with_respect_to(cfg: &LatticeConfiguration, parts: &[Vec<usize>]) -> Result<bool, SelfdualError> {
    let len = cfg.len();
    let mut seen = vec![false; len];
    for part in parts {
        if part.is_empty() {
            return Err(SelfdualError::NotAPartition("empty part".into()));
        }
        for &i in part {
            if i >= len {
                return Err(SelfdualError::NotAPartition(format!("index {i} out of range")));
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(SelfdualError::NotAPartition(format!("index {i} repeated")));
            }
        }
    }
    if let Some(i) = seen.iter().position(|s| !s) {
        return Err(SelfdualError::NotAPartition(format!("index {i} missing")));
    }
    let a = cfg.homogenize();
    let space = RowSpace::new(a.matrix());
    for part in parts {
        let mut e = vec![BigInt::zero(); len];
        for &i in part {
            e[i] = BigInt::one();
        }
        if !space.contains(&e).expect("indicator length matches") {
            return Ok(false);
        }
    }
    Ok(true)
}

/// [`detect_two_cayley_bounded`] with the default bound.
pub fn detect_two_cayley(cfg: &LatticeConfiguration) -> Result<Option<[Vec<usize>; 2]>, SelfdualError> {
    detect_two_cayley_bounded(cfg, DEFAULT_CAYLEY_BOUND)
}

/// Finds a split of the points into two nonempty parts whose indicators are
/// affine, or `None` when there is none.
///
/// An affine function on the configuration is determined by its values on
/// an affinely independent subset of maximal size, and any values there
/// extend. So it suffices to try every 0/1 labelling of such a subset and
/// check whether the extension is again 0/1. The part containing point 0
/// comes first.
pub fn detect_two_cayley_bounded(
    cfg: &LatticeConfiguration,
    bound: usize,
) -> Result<Option<[Vec<usize>; 2]>, SelfdualError> {
    if cfg.len() > bound {
        return Err(SelfdualError::TooLarge {
            points: cfg.len(),
            bound,
        });
    }
    let a = cfg.homogenize();
    let m = a.matrix();
    // pivot columns of an echelon form are a column basis
    let basis = bareiss(m).pivots;
    let r = basis.len();
    let sub = m.select_columns(&basis);
    // express each column of A in terms of the chosen ones
    let coords: Vec<Vec<BigRational>> = (0..m.cols())
        .map(|c| {
            let col: Vec<BigRational> = m.column(c).into_iter().map(BigRational::from_integer).collect();
            exactla::solve(&sub, &col)
                .expect("dimensions agree")
                .expect("column lies in the column space")
        })
        .collect();
    for mask in 1u64..(1u64 << r) - 1 {
        let values: Vec<BigRational> = (0..r)
            .map(|j| {
                if mask >> j & 1 == 1 {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            })
            .collect();
        let mut ones = Vec::new();
        let mut zeros = Vec::new();
        let mut ok = true;
        for (c, x) in coords.iter().enumerate() {
            let v: BigRational = x.iter().zip(&values).map(|(p, q)| p * q).sum();
            if v.is_one() {
                ones.push(c);
            } else if v.is_zero() {
                zeros.push(c);
            } else {
                ok = false;
                break;
            }
        }
        if ok && !ones.is_empty() && !zeros.is_empty() {
            return Ok(Some(if ones[0] == 0 { [ones, zeros] } else { [zeros, ones] }));
        }
    }
    Ok(None)
}
