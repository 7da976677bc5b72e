//! Dimension of the k-th dual variety measured from its parameterization.
//!
//! The k-th dual is the closure of the image of
//! `(λ, t) ↦ (⟨b_i, λ⟩ t^{-a_i})_i`. Multiplying every coordinate by the
//! common monomial `t^{a_max}` leaves the projective image unchanged and makes
//! all exponents nonnegative; the dimension of the image is then the rank of
//! the Jacobian at a generic point, minus one for the cone. Ranks are exact,
//! the points are random, so the result is a lower bound that is sharp with
//! high probability.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::config::LatticeConfiguration;
use crate::exactla::{self, dot, IntMatrix};
use crate::osculation::{self, JetData};
use crate::selfdual::{self, Diagnostic, SelfdualVerdict};

/// Sample coordinates are drawn from `[-SAMPLE_BOUND, SAMPLE_BOUND]`.
pub const SAMPLE_BOUND: i64 = 101;
pub const MAX_REJECTIONS: usize = 50;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DualDimError {
    #[error("the jet matrix has trivial kernel (c_k = 0)")]
    EmptyKernel,
    #[error("no admissible sample after {0} attempts")]
    SamplingFailed(usize),
    #[error("witness has length {found}, expected {expected}")]
    BadWitness { expected: usize, found: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Sample {
    pub lambda: Vec<i64>,
    pub t: Vec<i64>,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualDimReport {
    pub k: u32,
    pub n: usize,
    pub c_k: usize,
    /// `n + c_k − 1`.
    pub expected_dim: usize,
    /// Largest Jacobian rank seen, minus one.
    pub computed_dim: usize,
    pub trials: usize,
    pub seed: u64,
    pub sample_points: Vec<Sample>,
    /// Whether the dual lies in a coordinate subspace (some `b_i = 0`).
    pub degenerate: bool,
    /// `classify` says selfdual iff knap and `computed_dim = n`.
    pub agrees_with_verdict: bool,
}

struct Measurement {
    computed_dim: usize,
    samples: Vec<Sample>,
}

/// Jacobian rank of the dual parameterization at `trials` random points.
pub fn dual_dimension(
    cfg: &LatticeConfiguration,
    k: u32,
    trials: usize,
    seed: u64,
) -> Result<DualDimReport, DualDimError> {
    let verdict = selfdual::classify(cfg, k);
    report_for(cfg, &verdict, trials, seed)
}

fn report_for(
    cfg: &LatticeConfiguration,
    verdict: &SelfdualVerdict,
    trials: usize,
    seed: u64,
) -> Result<DualDimReport, DualDimError> {
    let (norm, _, _) = selfdual::prepare(cfg);
    let jet = osculation::jet_matrix(&norm, verdict.k);
    if jet.c_k == 0 {
        return Err(DualDimError::EmptyKernel);
    }
    let m = measure(&norm, &jet, trials, seed)?;
    let n = norm.dim();
    let oracle_says = verdict.knap.is_knap && m.computed_dim == n;
    Ok(DualDimReport {
        k: verdict.k,
        n,
        c_k: jet.c_k,
        expected_dim: n + jet.c_k - 1,
        computed_dim: m.computed_dim,
        trials,
        seed,
        sample_points: m.samples,
        degenerate: !jet.kernel.zero_coordinates().is_empty(),
        agrees_with_verdict: oracle_says == verdict.selfdual,
    })
}

fn measure(cfg: &LatticeConfiguration, jet: &JetData, trials: usize, seed: u64) -> Result<Measurement, DualDimError> {
    let n = cfg.dim();
    let c = jet.c_k;
    let support: Vec<usize> = {
        let zero = jet.kernel.zero_coordinates();
        (0..cfg.len()).filter(|i| !zero.contains(i)).collect()
    };
    let bs: Vec<Vec<BigInt>> = support.iter().map(|&i| jet.kernel.coordinate_row(i)).collect();
    let amax: Vec<i64> = (0..n)
        .map(|l| support.iter().map(|&i| cfg.point(i)[l]).max().unwrap_or(0))
        .collect();
    let exps: Vec<Vec<u32>> = support
        .iter()
        .map(|&i| {
            (0..n)
                .map(|l| u32::try_from(amax[l] - cfg.point(i)[l]).expect("nonnegative exponent"))
                .collect()
        })
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples = Vec::with_capacity(trials);
    let mut best = 0;
    for _ in 0..trials {
        let (lambda, t, forms) = draw(&mut rng, c, n, &bs)?;
        let tb: Vec<BigInt> = t.iter().map(|&x| BigInt::from(x)).collect();
        let mut rows = Vec::with_capacity(support.len());
        for (idx, e) in exps.iter().enumerate() {
            let mono: BigInt = e
                .iter()
                .zip(&tb)
                .map(|(&ei, ti)| num_traits::pow(ti.clone(), ei as usize))
                .product();
            let mut row = Vec::with_capacity(c + n);
            for b in &bs[idx] {
                row.push(b * &mono);
            }
            // columns scaled by t_l: t_l ∂/∂t_l of t^e is e_l t^e
            for &ei in e {
                row.push(&forms[idx] * BigInt::from(ei) * &mono);
            }
            rows.push(row);
        }
        let jac = IntMatrix::from_rows_with_cols(rows, c + n).expect("uniform rows");
        let rank = exactla::rank(&jac);
        best = best.max(rank);
        samples.push(Sample { lambda, t, rank });
    }
    Ok(Measurement {
        computed_dim: best.saturating_sub(1),
        samples,
    })
}

type Draw = (Vec<i64>, Vec<i64>, Vec<BigInt>);

fn draw(rng: &mut ChaCha8Rng, c: usize, n: usize, bs: &[Vec<BigInt>]) -> Result<Draw, DualDimError> {
    for _ in 0..MAX_REJECTIONS {
        let lambda: Vec<i64> = (0..c).map(|_| rng.random_range(-SAMPLE_BOUND..=SAMPLE_BOUND)).collect();
        let t: Vec<i64> = (0..n)
            .map(|_| loop {
                let x = rng.random_range(-SAMPLE_BOUND..=SAMPLE_BOUND);
                if x != 0 {
                    break x;
                }
            })
            .collect();
        let lb: Vec<BigInt> = lambda.iter().map(|&x| BigInt::from(x)).collect();
        let forms: Vec<BigInt> = bs.iter().map(|b| dot(b, &lb)).collect();
        if forms.iter().all(|f| !f.is_zero()) {
            return Ok((lambda, t, forms));
        }
    }
    Err(DualDimError::SamplingFailed(MAX_REJECTIONS))
}

#[derive(Clone, Debug, Serialize)]
pub struct CrosscheckReport {
    pub agree: bool,
    pub verdict: SelfdualVerdict,
    /// Absent when `c_k = 0`; both sides then say not selfdual.
    pub dual: Option<DualDimReport>,
}

/// Runs the classifier and the dimension oracle and compares them. A
/// disagreement is recorded as a theorem violation in the verdict.
pub fn crosscheck_characterizations(
    cfg: &LatticeConfiguration,
    k: u32,
    trials: usize,
    seed: u64,
) -> Result<CrosscheckReport, DualDimError> {
    let mut verdict = selfdual::classify(cfg, k);
    if verdict.c_k == 0 {
        return Ok(CrosscheckReport {
            agree: !verdict.selfdual,
            verdict,
            dual: None,
        });
    }
    let dual = report_for(cfg, &verdict, trials, seed)?;
    let agree = dual.agrees_with_verdict;
    if !agree {
        let detail = format!(
            "classify says selfdual = {}, oracle measures dim = {} with knap = {} (n = {})",
            verdict.selfdual, dual.computed_dim, verdict.knap.is_knap, dual.n
        );
        log::warn!("theorem violation: dual dimension characterization: {detail}");
        verdict.diagnostics.push(Diagnostic::TheoremViolation {
            check: "selfdual iff knap and dim of the dual equals n".into(),
            detail,
        });
    }
    verdict.dual_dim_check = Some(dual.clone());
    Ok(CrosscheckReport {
        agree,
        verdict,
        dual: Some(dual),
    })
}

/// Checks `p^{v−} y^{v+} = p^{v+} y^{v−}` for every `v` and every sampled
/// point `y` of the parameterized dual.
pub fn binomial_membership_test(
    cfg: &LatticeConfiguration,
    k: u32,
    witness: &[BigInt],
    vs: &[Vec<BigInt>],
    samples: &[(Vec<i64>, Vec<i64>)],
) -> Result<bool, DualDimError> {
    let (norm, _, _) = selfdual::prepare(cfg);
    let jet = osculation::jet_matrix(&norm, k);
    if jet.c_k == 0 {
        return Err(DualDimError::EmptyKernel);
    }
    if witness.len() != norm.len() {
        return Err(DualDimError::BadWitness {
            expected: norm.len(),
            found: witness.len(),
        });
    }
    let bs: Vec<Vec<BigInt>> = (0..norm.len()).map(|i| jet.kernel.coordinate_row(i)).collect();
    for (lambda, t) in samples {
        let lb: Vec<BigInt> = lambda.iter().map(|&x| BigInt::from(x)).collect();
        let y: Vec<BigRational> = (0..norm.len())
            .map(|i| {
                let mut v = BigRational::from_integer(dot(&bs[i], &lb));
                for (l, &tl) in t.iter().enumerate() {
                    let a = norm.point(i)[l];
                    let base = BigRational::from_integer(BigInt::from(tl));
                    let f = num_traits::pow(base, a.unsigned_abs() as usize);
                    if a >= 0 {
                        v /= f;
                    } else {
                        v *= f;
                    }
                }
                v
            })
            .collect();
        let p: Vec<BigRational> = witness.iter().cloned().map(BigRational::from_integer).collect();
        for v in vs {
            let mut lhs = BigRational::one();
            let mut rhs = BigRational::one();
            for (i, vi) in v.iter().enumerate() {
                let e = usize::try_from(vi.magnitude().clone()).expect("small exponent");
                if e == 0 {
                    continue;
                }
                if vi > &BigInt::zero() {
                    lhs *= num_traits::pow(y[i].clone(), e);
                    rhs *= num_traits::pow(p[i].clone(), e);
                } else {
                    lhs *= num_traits::pow(p[i].clone(), e);
                    rhs *= num_traits::pow(y[i].clone(), e);
                }
            }
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// [`binomial_membership_test`] with `count` random kernel vectors of `A`
/// and `count` random parameter points, drawn from `seed`.
pub fn binomial_membership_sampled(
    cfg: &LatticeConfiguration,
    k: u32,
    witness: &[BigInt],
    count: usize,
    seed: u64,
) -> Result<bool, DualDimError> {
    let (norm, _, _) = selfdual::prepare(cfg);
    let jet = osculation::jet_matrix(&norm, k);
    if jet.c_k == 0 {
        return Err(DualDimError::EmptyKernel);
    }
    let ker_a = exactla::right_kernel(norm.homogenize().matrix());
    let bs: Vec<Vec<BigInt>> = (0..norm.len())
        .map(|i| jet.kernel.coordinate_row(i))
        .filter(|b| b.iter().any(|x| !x.is_zero()))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vs: Vec<Vec<BigInt>> = (0..count)
        .map(|_| {
            let coeffs: Vec<BigInt> = (0..ker_a.corank())
                .map(|_| BigInt::from(rng.random_range(-2i64..=2)))
                .collect();
            ker_a.combine(&coeffs)
        })
        .collect();
    let mut samples = Vec::with_capacity(count);
    for _ in 0..count {
        let (lambda, t, _) = draw(&mut rng, jet.c_k, norm.dim(), &bs)?;
        samples.push((lambda, t));
    }
    binomial_membership_test(&norm, k, witness, &vs, &samples)
}
