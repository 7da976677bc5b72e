//! Jet matrices `A^(k)`: evaluations of all monomials of degree at most `k`
//! at the points of a configuration.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::LatticeConfiguration;
use crate::exactla::{self, IntMatrix, KernelBasis};

/// A homogeneous exponent vector `α ∈ N^{n+1}` of total degree `k`.
///
/// Coordinate 0 belongs to the homogenizing variable, so the monomial
/// actually evaluated on a point is `x^{(α_1, …, α_n)}` and its degree is
/// `k − α_0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct MultiIndex {
    exponents: Vec<u32>,
}

impl MultiIndex {
    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    /// The exponent on the inhomogeneous coordinates.
    pub fn reduced(&self) -> &[u32] {
        &self.exponents[1..]
    }

    pub fn degree(&self) -> u32 {
        self.reduced().iter().sum()
    }

    /// `x^β` at an integer point.
    pub fn evaluate(&self, point: &[i64]) -> BigInt {
        let mut acc = BigInt::one();
        for (&e, &x) in self.reduced().iter().zip(point) {
            if e > 0 {
                acc *= num_traits::pow(BigInt::from(x), e as usize);
            }
        }
        acc
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e: Vec<String> = self.exponents.iter().map(ToString::to_string).collect();
        write!(f, "v_({})", e.join(","))
    }
}

/// The row labels of `A^(k)` in order: degree ascending, then lexicographic
/// with the lower-numbered coordinate taking priority. Produces exactly
/// `binom(n+k, k)` indices, one per monomial.
pub fn multiindices(n: usize, k: u32) -> Vec<MultiIndex> {
    fn rec(pos: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        if pos + 1 == cur.len() {
            cur[pos] = left;
            out.push(MultiIndex { exponents: cur.clone() });
            return;
        }
        for e in (0..=left).rev() {
            cur[pos] = e;
            rec(pos + 1, left - e, cur, out);
        }
    }
    let mut out = Vec::new();
    rec(0, k, &mut vec![0; n + 1], &mut out);
    out
}

/// `A^(k)` with its rank and kernel.
#[derive(Clone, Debug, Serialize)]
pub struct JetData {
    pub k: u32,
    #[serde(skip)]
    pub indices: Vec<MultiIndex>,
    pub matrix: IntMatrix,
    pub rank: usize,
    /// `rank − 1`.
    pub d_k: usize,
    /// Kernel dimension, `N − d_k`.
    pub c_k: usize,
    pub kernel: KernelBasis,
}

impl JetData {
    pub fn generically_jet_spanned(&self) -> bool {
        self.rank == self.indices.len()
    }
}

/// Builds `A^(k)` for the configuration as given, without renormalizing.
pub fn jet_matrix(cfg: &LatticeConfiguration, k: u32) -> JetData {
    let indices = multiindices(cfg.dim(), k);
    let matrix = evaluation_matrix(&indices, cfg.points());
    let kernel = exactla::right_kernel(&matrix);
    let rank = cfg.len() - kernel.corank();
    JetData {
        k,
        indices,
        matrix,
        rank,
        d_k: rank - 1,
        c_k: kernel.corank(),
        kernel,
    }
}

fn evaluation_matrix(indices: &[MultiIndex], points: &[Vec<i64>]) -> IntMatrix {
    let rows: Vec<Vec<BigInt>> = indices
        .par_iter()
        .map(|a| points.iter().map(|p| a.evaluate(p)).collect())
        .collect();
    IntMatrix::from_rows_with_cols(rows, points.len()).expect("uniform row length")
}

/// Number of independent conditions the points impose on polynomials of
/// degree at most `k`, i.e. `rank A^(k)`.
pub fn hilbert_function(cfg: &LatticeConfiguration, k: u32) -> usize {
    let indices = multiindices(cfg.dim(), k);
    exactla::rank(&evaluation_matrix(&indices, cfg.points()))
}

pub fn is_generically_jet_spanned(cfg: &LatticeConfiguration, k: u32) -> bool {
    hilbert_function(cfg, k) == binomial(cfg.dim() as u64 + k as u64, k as u64) as usize
}

/// Evaluations of `m_α(x) = Π_i binom(x_i, α_i)` at the lattice points of
/// `kΔ_n`, rows and columns both in [`multiindices`] order. Upper triangular
/// with unit diagonal.
pub fn falling_factorial_matrix(n: usize, k: u32) -> IntMatrix {
    let idx = multiindices(n, k);
    let pts: Vec<&[u32]> = idx.iter().map(MultiIndex::reduced).collect();
    let rows: Vec<Vec<BigInt>> = pts
        .iter()
        .map(|alpha| {
            pts.iter()
                .map(|x| {
                    x.iter()
                        .zip(alpha.iter())
                        .map(|(&xi, &ai)| BigInt::from(binomial(xi as u64, ai as u64)))
                        .product()
                })
                .collect()
        })
        .collect();
    IntMatrix::from_rows_with_cols(rows, pts.len()).expect("square")
}

/// `binom(n, k)`, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    u64::try_from(acc).expect("binomial coefficient fits in u64")
}

/// Hilbert values `H(1), …, H(k_max)`.
pub fn hilbert_series(cfg: &LatticeConfiguration, k_max: u32) -> Vec<usize> {
    (1..=k_max).map(|k| hilbert_function(cfg, k)).collect()
}
