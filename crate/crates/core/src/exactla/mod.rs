//! Exact integer and rational linear algebra.
//!
//! Everything downstream (jet ranks, knap tests, line-indicator rowspan
//! checks) is a yes/no question about integer matrices, so no floating point
//! appears here. Elimination is fraction-free Bareiss; lattice questions
//! (kernel bases, index of the column lattice) go through Hermite reduction.

mod echelon;
mod hermite;
mod matrix;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

pub(crate) use echelon::{bareiss, bareiss_rows};
pub(crate) use hermite::hermite;
pub use matrix::{dot, primitive, IntMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("ragged rows: row {row} has {found} entries, expected {expected}")]
    RaggedRows { row: usize, expected: usize, found: usize },
}

/// Z-basis of the integer right kernel of a matrix.
///
/// The basis is in Hermite normal form: vectors are primitive, in echelon
/// order, each with a positive leading entry. It generates the whole kernel
/// lattice `{x ∈ Z^cols : M x = 0}`, not just a full-rank sublattice of it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelBasis {
    #[serde(serialize_with = "crate::serde_num::int_rows")]
    vectors: Vec<Vec<BigInt>>,
    ambient: usize,
}

impl KernelBasis {
    pub fn vectors(&self) -> &[Vec<BigInt>] {
        &self.vectors
    }

    pub fn corank(&self) -> usize {
        self.vectors.len()
    }

    /// Length of each basis vector (the column count of the source matrix).
    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Coordinate `i` across all basis vectors.
    pub fn coordinate_row(&self, i: usize) -> Vec<BigInt> {
        self.vectors.iter().map(|v| v[i].clone()).collect()
    }

    /// Indices where every basis vector vanishes.
    pub fn zero_coordinates(&self) -> Vec<usize> {
        (0..self.ambient)
            .filter(|&i| self.vectors.iter().all(|v| v[i].is_zero()))
            .collect()
    }

    #[cfg(test)]
    pub(crate) fn for_tests(vectors: Vec<Vec<BigInt>>) -> Self {
        let ambient = vectors.first().map_or(0, Vec::len);
        Self { vectors, ambient }
    }

    /// Integer combination `Σ coeffs[j] · ν^j`.
    pub fn combine(&self, coeffs: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.ambient];
        for (c, v) in coeffs.iter().zip(&self.vectors) {
            if c.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(v) {
                *o += c * x;
            }
        }
        out
    }
}

/// Answer to "does `v` lie in the rowspan of `M`?" together with evidence
/// that a third party can check with one matrix product.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RowspanCertificate {
    pub member: bool,
    /// Rational row weights reproducing the query; present iff `member`.
    #[serde(
        serialize_with = "crate::serde_num::opt_rats",
        skip_serializing_if = "Option::is_none"
    )]
    pub coefficients: Option<Vec<BigRational>>,
    /// Kernel vector pairing nonzero with the query; present iff not `member`.
    #[serde(
        serialize_with = "crate::serde_num::opt_ints",
        skip_serializing_if = "Option::is_none"
    )]
    pub witness: Option<Vec<BigInt>>,
}

impl RowspanCertificate {
    /// Re-checks the certificate against `m` and `v` from scratch.
    pub fn verify(&self, m: &IntMatrix, v: &[BigInt]) -> bool {
        if v.len() != m.cols() {
            return false;
        }
        match (self.member, &self.coefficients, &self.witness) {
            (true, Some(coeffs), None) => {
                if coeffs.len() != m.rows() {
                    return false;
                }
                (0..m.cols()).all(|c| {
                    let s: BigRational = (0..m.rows())
                        .map(|r| &coeffs[r] * BigRational::from_integer(m.get(r, c).clone()))
                        .sum();
                    s == BigRational::from_integer(v[c].clone())
                })
            }
            (false, None, Some(w)) => {
                w.len() == m.cols() && m.mul_vec(w).is_ok_and(|mw| mw.iter().all(Zero::is_zero)) && !dot(w, v).is_zero()
            }
            _ => false,
        }
    }
}

/// Exact rank over Q.
pub fn rank(m: &IntMatrix) -> usize {
    if m.rows() == 0 || m.cols() == 0 {
        return 0;
    }
    bareiss(m).rank()
}

/// Saturated integer basis of the right kernel.
pub fn right_kernel(m: &IntMatrix) -> KernelBasis {
    let n = m.cols();
    if n == 0 {
        return KernelBasis {
            vectors: Vec::new(),
            ambient: 0,
        };
    }
    // Same Q-rowspace, fewer rows: the nonzero echelon rows.
    let ech = if m.rows() == 0 {
        echelon::Echelon {
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    } else {
        bareiss(m)
    };
    let r = ech.rank();
    let reduced: Vec<Vec<BigInt>> = ech.rows.iter().map(|row| primitive(row)).collect();

    // Hermite-reduce the transpose while tracking the unimodular transform U.
    // Rows of U whose image vanishes span the integer kernel lattice.
    let mut t: Vec<Vec<BigInt>> = (0..n)
        .map(|c| reduced.iter().map(|row| row[c].clone()).collect())
        .collect();
    let mut u: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let mut e = vec![BigInt::zero(); n];
            e[i] = BigInt::one();
            e
        })
        .collect();
    let piv = hermite(&mut t, r, Some(&mut u));
    debug_assert_eq!(piv.len(), r);
    let mut kernel: Vec<Vec<BigInt>> = u.split_off(piv.len());

    let kpiv = hermite(&mut kernel, n, None);
    kernel.truncate(kpiv.len());
    KernelBasis {
        vectors: kernel,
        ambient: n,
    }
}

/// Rowspan membership with a certificate.
pub fn in_rowspan(m: &IntMatrix, v: &[BigInt]) -> Result<RowspanCertificate, LinalgError> {
    RowSpace::new(m).certificate(v)
}

/// Rowspan of a fixed matrix with its kernel computed once, for repeated
/// membership queries.
#[derive(Clone, Debug)]
pub struct RowSpace<'a> {
    matrix: &'a IntMatrix,
    kernel: KernelBasis,
}

impl<'a> RowSpace<'a> {
    pub fn new(matrix: &'a IntMatrix) -> Self {
        Self {
            matrix,
            kernel: right_kernel(matrix),
        }
    }

    pub fn with_kernel(matrix: &'a IntMatrix, kernel: KernelBasis) -> Self {
        debug_assert_eq!(kernel.ambient(), matrix.cols());
        Self { matrix, kernel }
    }

    pub fn kernel(&self) -> &KernelBasis {
        &self.kernel
    }

    pub fn contains(&self, v: &[BigInt]) -> Result<bool, LinalgError> {
        self.check_len(v)?;
        Ok(self.kernel.vectors.iter().all(|w| dot(w, v).is_zero()))
    }

    pub fn certificate(&self, v: &[BigInt]) -> Result<RowspanCertificate, LinalgError> {
        self.check_len(v)?;
        if let Some(w) = self.kernel.vectors.iter().find(|w| !dot(w, v).is_zero()) {
            return Ok(RowspanCertificate {
                member: false,
                coefficients: None,
                witness: Some(w.clone()),
            });
        }
        let rhs: Vec<BigRational> = v.iter().cloned().map(BigRational::from_integer).collect();
        let coeffs =
            solve(&self.matrix.transpose(), &rhs)?.expect("vector orthogonal to the kernel must lie in the rowspan");
        Ok(RowspanCertificate {
            member: true,
            coefficients: Some(coeffs),
            witness: None,
        })
    }

    fn check_len(&self, v: &[BigInt]) -> Result<(), LinalgError> {
        if v.len() != self.matrix.cols() {
            return Err(LinalgError::DimensionMismatch {
                expected: self.matrix.cols(),
                found: v.len(),
            });
        }
        Ok(())
    }
}

/// One exact solution of `M x = b`, or `None` when inconsistent. Free
/// variables are set to zero.
pub fn solve(m: &IntMatrix, b: &[BigRational]) -> Result<Option<Vec<BigRational>>, LinalgError> {
    if b.len() != m.rows() {
        return Err(LinalgError::DimensionMismatch {
            expected: m.rows(),
            found: b.len(),
        });
    }
    let n = m.cols();
    let denom = b.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let aug: Vec<Vec<BigInt>> = (0..m.rows())
        .map(|r| {
            let mut row = m.row(r).to_vec();
            row.push((&b[r] * BigRational::from_integer(denom.clone())).to_integer());
            row
        })
        .collect();
    let ech = bareiss_rows(aug, n + 1);
    if ech.pivots.last() == Some(&n) {
        return Ok(None);
    }
    let mut x = vec![BigRational::zero(); n];
    for (row, &pc) in ech.rows.iter().zip(&ech.pivots).rev() {
        let mut acc = BigRational::from_integer(row[n].clone());
        for j in pc + 1..n {
            if !row[j].is_zero() && !x[j].is_zero() {
                acc -= BigRational::from_integer(row[j].clone()) * &x[j];
            }
        }
        x[pc] = acc / BigRational::from_integer(row[pc].clone());
    }
    let scale = BigRational::from_integer(denom);
    Ok(Some(x.into_iter().map(|xi| xi / &scale).collect()))
}

/// gcd of the maximal minors of a full-row-rank matrix; 0 when `rows > cols`
/// or the rank is deficient. Computed as the product of Hermite pivots of the
/// column lattice rather than by enumerating minors.
pub fn maximal_minor_gcd(m: &IntMatrix) -> BigInt {
    let r = m.rows();
    if r > m.cols() {
        return BigInt::zero();
    }
    if r == 0 {
        return BigInt::one();
    }
    let mut t = m.transpose().to_rows();
    let piv = hermite(&mut t, r, None);
    if piv.len() < r {
        return BigInt::zero();
    }
    (0..r).map(|i| t[i][i].clone()).product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: Vec<Vec<i64>>) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn rats(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| BigRational::from_integer(x.into())).collect()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&m(vec![vec![1, 1, 1, 1], vec![0, 1, 2, 3], vec![0, 1, 4, 9]])), 3);
        assert_eq!(rank(&IntMatrix::zeros(3, 3)), 0);
        assert_eq!(rank(&IntMatrix::zeros(0, 0)), 0);
    }

    #[test]
    fn kernel_of_unit_square() {
        let a = m(vec![vec![1, 1, 1, 1], vec![0, 1, 0, 1], vec![0, 0, 1, 1]]);
        let k = right_kernel(&a);
        assert_eq!(k.corank(), 1);
        assert_eq!(k.vectors()[0], ints(&[1, -1, -1, 1]));
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        let k = right_kernel(&IntMatrix::identity(4));
        assert_eq!(k.corank(), 0);
        assert!(k.is_empty());
    }

    #[test]
    fn kernel_is_saturated() {
        // Q-kernel spanned by (1,1,0) but rational elimination would not see
        // the lattice index; the row 2x - 2y forces saturation.
        let a = m(vec![vec![2, -2, 0], vec![0, 0, 3]]);
        let k = right_kernel(&a);
        assert_eq!(k.vectors(), &[ints(&[1, 1, 0])]);
        // (2, 4, 6) · ... kernel of a single row with nontrivial gcd
        let b = m(vec![vec![2, 4, 6]]);
        let kb = right_kernel(&b);
        assert_eq!(kb.corank(), 2);
        // (1, 1, -1) is in the kernel and must be an integer combination.
        let target = ints(&[1, 1, -1]);
        let km = IntMatrix::from_rows(kb.vectors().to_vec()).unwrap().transpose();
        let sol = solve(
            &km,
            &target
                .iter()
                .cloned()
                .map(BigRational::from_integer)
                .collect::<Vec<_>>(),
        )
        .unwrap()
        .unwrap();
        assert!(sol.iter().all(|x| x.is_integer()));
    }

    #[test]
    fn rowspan_twisted_cubic_cone_apex() {
        let a = m(vec![vec![1, 1, 1, 1, 1], vec![1, 0, 0, 0, 0], vec![0, 0, 1, 2, 3]]);
        let e0 = ints(&[1, 0, 0, 0, 0]);
        let cert = in_rowspan(&a, &e0).unwrap();
        assert!(cert.member);
        assert_eq!(cert.coefficients, Some(rats(&[0, 1, 0])));
        assert!(cert.verify(&a, &e0));
    }

    #[test]
    fn rowspan_zero_vector() {
        let a = m(vec![vec![3, 1], vec![1, 7]]);
        let cert = in_rowspan(&a, &ints(&[0, 0])).unwrap();
        assert!(cert.member);
        assert_eq!(cert.coefficients, Some(rats(&[0, 0])));
    }

    #[test]
    fn rowspan_dimension_mismatch() {
        let a = m(vec![vec![1, 1]]);
        assert!(matches!(
            in_rowspan(&a, &ints(&[1])),
            Err(LinalgError::DimensionMismatch { expected: 2, found: 1 })
        ));
    }

    #[test]
    fn solve_examples() {
        let id = IntMatrix::identity(3);
        assert_eq!(solve(&id, &rats(&[4, 5, 6])).unwrap(), Some(rats(&[4, 5, 6])));
        assert_eq!(solve(&m(vec![vec![1, 1], vec![2, 2]]), &rats(&[1, 3])).unwrap(), None);
        assert_eq!(
            solve(&m(vec![vec![1, 1], vec![0, 1]]), &rats(&[3, 1])).unwrap(),
            Some(rats(&[2, 1]))
        );
        assert!(solve(&id, &rats(&[1])).is_err());
    }

    #[test]
    fn solve_rational_rhs_sets_free_variables_to_zero() {
        let a = m(vec![vec![2, 0, 4]]);
        let half = BigRational::new(1.into(), 2.into());
        let x = solve(&a, std::slice::from_ref(&half)).unwrap().unwrap();
        assert_eq!(
            x,
            vec![
                BigRational::new(1.into(), 4.into()),
                BigRational::zero(),
                BigRational::zero()
            ]
        );
    }

    #[test]
    fn maximal_minor_gcd_examples() {
        assert_eq!(
            maximal_minor_gcd(&m(vec![vec![1, 1, 1, 1], vec![0, 1, 2, 3]])),
            BigInt::from(1)
        );
        assert_eq!(maximal_minor_gcd(&m(vec![vec![2, 4], vec![0, 2]])), BigInt::from(4));
        assert_eq!(
            maximal_minor_gcd(&m(vec![vec![1, 1, 1], vec![0, 2, 4]])),
            BigInt::from(2)
        );
        // rank deficient and too many rows
        assert_eq!(maximal_minor_gcd(&m(vec![vec![1, 2], vec![2, 4]])), BigInt::zero());
        assert_eq!(maximal_minor_gcd(&m(vec![vec![1], vec![2]])), BigInt::zero());
    }

    /// Brute-force oracle: gcd over all maximal minors via cofactor expansion.
    fn minor_gcd_bruteforce(a: &IntMatrix) -> BigInt {
        fn det(rows: &[Vec<BigInt>]) -> BigInt {
            if rows.is_empty() {
                return BigInt::one();
            }
            let mut acc = BigInt::zero();
            for (j, x) in rows[0].iter().enumerate() {
                let minor: Vec<Vec<BigInt>> = rows[1..]
                    .iter()
                    .map(|r| {
                        r.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != j)
                            .map(|(_, v)| v.clone())
                            .collect()
                    })
                    .collect();
                let d = x * det(&minor);
                if j % 2 == 0 {
                    acc += d;
                } else {
                    acc -= d;
                }
            }
            acc
        }
        use itertools::Itertools;
        (0..a.cols())
            .combinations(a.rows())
            .map(|cols| det(&a.select_columns(&cols).to_rows()))
            .fold(BigInt::zero(), |g, d| g.gcd(&d))
    }

    fn small_matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = IntMatrix> {
        (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-4i64..=4, r * c)
                .prop_map(move |v| IntMatrix::new(r, c, v.into_iter().map(BigInt::from).collect()).unwrap())
        })
    }

    proptest! {
        #[test]
        fn rank_plus_corank_is_cols(a in small_matrix(5, 6)) {
            let k = right_kernel(&a);
            prop_assert_eq!(rank(&a) + k.corank(), a.cols());
            for v in k.vectors() {
                prop_assert!(a.mul_vec(v).unwrap().iter().all(Zero::is_zero));
                prop_assert_eq!(primitive(v), v.clone());
            }
        }

        #[test]
        fn kernel_survives_prime_division(a in small_matrix(3, 6), coeffs in proptest::collection::vec(-6i64..=6, 6), p in prop::sample::select(vec![2i64, 3, 5, 7])) {
            let k = right_kernel(&a);
            prop_assume!(!k.is_empty());
            let p = BigInt::from(p);
            let c: Vec<BigInt> = coeffs.iter().take(k.corank()).map(|&x| BigInt::from(x) * &p).collect();
            let w = k.combine(&c);
            // p | w by construction, and w/p must again be an integer combination
            let reduced: Vec<BigRational> = w.iter().map(|x| BigRational::new(x.clone(), p.clone())).collect();
            let basis = IntMatrix::from_rows(k.vectors().to_vec()).unwrap().transpose();
            let sol = solve(&basis, &reduced).unwrap().unwrap();
            prop_assert!(sol.iter().all(|x| x.is_integer()));
            // conversely an integer combination with a coefficient prime to p is not divisible by p
            let mut c2 = c.clone();
            c2[0] += BigInt::one();
            let w2 = k.combine(&c2);
            prop_assert!(w2.iter().any(|x| !(x % &p).is_zero()));
        }

        #[test]
        fn rowspan_matches_orthogonality(a in small_matrix(4, 5), v in proptest::collection::vec(-3i64..=3, 5)) {
            let v: Vec<BigInt> = v.into_iter().take(a.cols()).map(BigInt::from).collect();
            prop_assume!(v.len() == a.cols());
            let k = right_kernel(&a);
            let cert = in_rowspan(&a, &v).unwrap();
            let orth = k.vectors().iter().all(|w| dot(w, &v).is_zero());
            prop_assert_eq!(cert.member, orth);
            prop_assert!(cert.verify(&a, &v));
        }

        #[test]
        fn minor_gcd_matches_bruteforce(a in small_matrix(3, 5)) {
            prop_assume!(a.rows() <= a.cols());
            let expected = if rank(&a) < a.rows() { BigInt::zero() } else { minor_gcd_bruteforce(&a) };
            prop_assert_eq!(maximal_minor_gcd(&a), expected);
        }

        #[test]
        fn rank_invariant_under_unimodular_row_ops(a in small_matrix(4, 5), ops in proptest::collection::vec((0usize..4, 0usize..4, -3i64..=3), 0..8)) {
            let mut rows = a.to_rows();
            let n = rows.len();
            for (i, j, q) in ops {
                let (i, j) = (i % n, j % n);
                if i == j {
                    rows.swap(0, i);
                    for x in rows[0].iter_mut() { *x = -x.clone(); }
                } else {
                    let src = rows[j].clone();
                    for (x, y) in rows[i].iter_mut().zip(src) { *x += BigInt::from(q) * y; }
                }
            }
            let b = IntMatrix::from_rows(rows).unwrap();
            prop_assert_eq!(rank(&a), rank(&b));
            prop_assert_eq!(right_kernel(&a), right_kernel(&b));
        }
    }
}
