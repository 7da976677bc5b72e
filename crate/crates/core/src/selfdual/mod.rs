//! Deciding k-selfduality.
//!
//! A configuration is k-selfdual exactly when it is knap at order `k` (no
//! point is separated from the others by a polynomial of degree `≤ k`) and,
//! grouping the points by the line through the origin on which their
//! kernel coordinates `b_i` lie, every group indicator `e_L` is an affine
//! function of the points.

mod cayley;
mod subconfig;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::config::{ConfigError, LatticeConfiguration, LatticeTransform};
use crate::dualdim::DualDimReport;
use crate::exactla::{primitive, KernelBasis, RowSpace, RowspanCertificate};
use crate::osculation::{self, JetData};

pub use cayley::{cayley_with_respect_to, detect_two_cayley, detect_two_cayley_bounded, DEFAULT_CAYLEY_BOUND};
pub use subconfig::{extract_dj, subconfiguration_verdict, SubconfigVerdict};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SelfdualError {
    #[error("the jet matrix has trivial kernel (c_k = 0)")]
    EmptyKernel,
    #[error("b-vector {0} is zero; the configuration is not knap")]
    ZeroBVector(usize),
    #[error("not a partition of the point indices: {0}")]
    NotAPartition(String),
    #[error("{points} points exceed the Cayley search bound {bound}")]
    TooLarge { points: usize, bound: usize },
    #[error("inapplicable: {0}")]
    Inapplicable(String),
    #[error("the parent configuration is not k-selfdual")]
    ParentNotSelfdual,
    #[error(transparent)]
    Config(#[from] ConfigError),
}

/// Notes attached to a verdict. None of them change the verdict itself.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Diagnostic {
    /// The input did not affinely generate its lattice and was replaced by
    /// an isomorphic copy before classification.
    Normalized { index: String, reembedded: bool },
    /// `c_k = 0`: no hyperplane osculates to order `k`, so the k-th dual is
    /// empty and every `e_i` lies in the rowspan.
    EmptyKernel,
    /// A consequence of the selfduality theorems failed on this input.
    TheoremViolation { check: String, detail: String },
    /// Two computations of the same quantity disagreed.
    Inconsistency { detail: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Reason {
    EmptyKernel,
    NotKnap,
    LineIndicatorOutsideRowspan,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KnapReport {
    pub is_knap: bool,
    /// Indices `i` with `e_i` in the rowspan of `A^(k)`.
    pub offending_indices: Vec<usize>,
    /// Kernel vector with no zero coordinate, present iff knap.
    #[serde(
        serialize_with = "crate::serde_num::opt_ints",
        skip_serializing_if = "Option::is_none"
    )]
    pub torus_witness: Option<Vec<BigInt>>,
    /// The `t` for which `Σ t^j ν^j` is the witness.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_parameter: Option<u64>,
    /// Coordinates where the whole kernel vanishes.
    pub j: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Line {
    /// Primitive direction with positive leading entry.
    #[serde(serialize_with = "crate::serde_num::ints")]
    pub direction: Vec<BigInt>,
    /// `Γ_j`, increasing.
    pub members: Vec<usize>,
    /// `μ` with `b_i = μ · direction`, aligned with `members`.
    #[serde(serialize_with = "crate::serde_num::ints")]
    pub multipliers: Vec<BigInt>,
}

impl Line {
    pub fn indicator(&self, len: usize) -> Vec<BigInt> {
        let mut e = vec![BigInt::zero(); len];
        for &i in &self.members {
            e[i] = BigInt::one();
        }
        e
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinePartition {
    pub lines: Vec<Line>,
}

impl LinePartition {
    pub fn r(&self) -> usize {
        self.lines.len()
    }

    /// Line index for each point.
    pub fn assignment(&self, len: usize) -> Vec<usize> {
        let mut out = vec![usize::MAX; len];
        for (j, l) in self.lines.iter().enumerate() {
            for &i in &l.members {
                out[i] = j;
            }
        }
        out
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SelfdualVerdict {
    pub k: u32,
    /// Dimension of the (normalized) configuration.
    pub n: usize,
    /// `N + 1`.
    pub points: usize,
    pub c_k: usize,
    pub d_k: usize,
    pub selfdual: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<Reason>,
    pub knap: KnapReport,
    pub kernel: KernelBasis,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partition: Option<LinePartition>,
    /// One certificate per line, for `e_L` against the rowspan of `A`.
    pub el_certificates: Vec<RowspanCertificate>,
    /// Number of lines when selfdual; the configuration is then r-Cayley.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cayley_r: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normalization: Option<LatticeTransform>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dual_dim_check: Option<DualDimReport>,
    pub diagnostics: Vec<Diagnostic>,
}

impl SelfdualVerdict {
    pub fn theorem_violations(&self) -> impl Iterator<Item = &Diagnostic> {
        self.diagnostics
            .iter()
            .filter(|d| matches!(d, Diagnostic::TheoremViolation { .. }))
    }
}

/// Normalizes if needed and returns the configuration to classify together
/// with the transform (when it is not the identity).
pub(crate) fn prepare(cfg: &LatticeConfiguration) -> (LatticeConfiguration, Option<LatticeTransform>, Vec<Diagnostic>) {
    match cfg.normalize_lattice() {
        Ok((norm, t)) if t.is_identity() => (norm, None, Vec::new()),
        Ok((norm, t)) => {
            log::warn!(
                "configuration does not generate its lattice (index {}{}); classifying a normalized copy",
                t.index,
                if t.reembedded {
                    ", re-embedded into its affine span"
                } else {
                    ""
                }
            );
            let d = Diagnostic::Normalized {
                index: t.index.to_string(),
                reembedded: t.reembedded,
            };
            (norm, Some(t), vec![d])
        }
        Err(e) => {
            log::warn!("normalization failed ({e}); classifying the input as given");
            (cfg.clone(), None, Vec::new())
        }
    }
}

/// Knap report for a configuration (normalized first).
pub fn knap_check(cfg: &LatticeConfiguration, k: u32) -> KnapReport {
    let (norm, _, _) = prepare(cfg);
    let jet = osculation::jet_matrix(&norm, k);
    knap_from_jet(&jet).0
}

/// Builds the knap report from jet data. Offending indices come from
/// verified rowspan certificates for each `e_i`; `J` from a scan of the
/// kernel basis. Disagreement is returned as a diagnostic.
pub fn knap_from_jet(jet: &JetData) -> (KnapReport, Vec<Diagnostic>) {
    let len = jet.matrix.cols();
    let space = RowSpace::with_kernel(&jet.matrix, jet.kernel.clone());
    let mut offending = Vec::new();
    let mut diags = Vec::new();
    for i in 0..len {
        let mut e = vec![BigInt::zero(); len];
        e[i] = BigInt::one();
        let cert = space.certificate(&e).expect("unit vector has matching length");
        if !cert.verify(&jet.matrix, &e) {
            diags.push(Diagnostic::Inconsistency {
                detail: format!("rowspan certificate for e_{i} failed verification"),
            });
        }
        if cert.member {
            offending.push(i);
        }
    }
    let j = jet.kernel.zero_coordinates();
    if j != offending {
        diags.push(Diagnostic::Inconsistency {
            detail: format!("rowspan test gives {offending:?} but kernel zero scan gives {j:?}"),
        });
    }
    let is_knap = offending.is_empty() && j.is_empty();
    let (torus_witness, witness_parameter) = if is_knap {
        let (t, w) = torus_witness(&jet.kernel);
        (Some(w), Some(t))
    } else {
        (None, None)
    };
    (
        KnapReport {
            is_knap,
            offending_indices: offending,
            torus_witness,
            witness_parameter,
            j,
        },
        diags,
    )
}

/// `Σ_j t^j ν^j` for the least `t ≥ 1` with every coordinate nonzero.
/// Requires every coordinate to be nonzero somewhere on the kernel.
fn torus_witness(kernel: &KernelBasis) -> (u64, Vec<BigInt>) {
    let c = kernel.corank();
    // each coordinate is a nonzero polynomial of degree < c in t
    let limit = (kernel.ambient() * c.saturating_sub(1) + 1) as u64;
    for t in 1..=limit {
        let tb = BigInt::from(t);
        let mut pow = BigInt::one();
        let coeffs: Vec<BigInt> = (0..c)
            .map(|_| {
                let p = pow.clone();
                pow *= &tb;
                p
            })
            .collect();
        let w = kernel.combine(&coeffs);
        if w.iter().all(|x| !x.is_zero()) {
            return (t, w);
        }
    }
    unreachable!("a knap kernel has a witness with t ≤ {limit}")
}

/// Offending indices by interpolation: `i` offends when dropping `a_i`
/// lowers the Hilbert function at `k`.
pub fn offending_by_interpolation(cfg: &LatticeConfiguration, k: u32) -> Vec<usize> {
    let h = osculation::hilbert_function(cfg, k);
    (0..cfg.len())
        .filter(|&i| match cfg.without(i) {
            Ok(sub) => osculation::hilbert_function(&sub, k) < h,
            Err(_) => true,
        })
        .collect()
}

/// The vectors `b_i`, one per point, read across the kernel basis.
pub fn b_vectors(jet: &JetData) -> Result<Vec<Vec<BigInt>>, SelfdualError> {
    if jet.c_k == 0 {
        return Err(SelfdualError::EmptyKernel);
    }
    Ok((0..jet.kernel.ambient())
        .map(|i| jet.kernel.coordinate_row(i))
        .collect())
}

/// Groups the `b_i` by the line through the origin they span. Lines are
/// ordered by their smallest member.
pub fn line_partition(bs: &[Vec<BigInt>]) -> Result<LinePartition, SelfdualError> {
    let mut by_direction: BTreeMap<Vec<BigInt>, usize> = BTreeMap::new();
    let mut lines: Vec<Line> = Vec::new();
    for (i, b) in bs.iter().enumerate() {
        if b.iter().all(Zero::is_zero) {
            return Err(SelfdualError::ZeroBVector(i));
        }
        let dir = primitive(b);
        let lead = b.iter().position(|x| !x.is_zero()).expect("nonzero");
        let mu = &b[lead] / &dir[lead];
        let j = *by_direction.entry(dir.clone()).or_insert_with(|| {
            lines.push(Line {
                direction: dir,
                members: Vec::new(),
                multipliers: Vec::new(),
            });
            lines.len() - 1
        });
        lines[j].members.push(i);
        lines[j].multipliers.push(mu);
    }
    Ok(LinePartition { lines })
}

/// Decides k-selfduality, normalizing the configuration first if needed.
pub fn classify(cfg: &LatticeConfiguration, k: u32) -> SelfdualVerdict {
    let (norm, normalization, mut diagnostics) = prepare(cfg);
    let jet = osculation::jet_matrix(&norm, k);
    let (knap, knap_diags) = knap_from_jet(&jet);
    diagnostics.extend(knap_diags);
    let a = norm.homogenize();

    let mut verdict = SelfdualVerdict {
        k,
        n: norm.dim(),
        points: norm.len(),
        c_k: jet.c_k,
        d_k: jet.d_k,
        selfdual: false,
        reason: None,
        knap,
        kernel: jet.kernel.clone(),
        partition: None,
        el_certificates: Vec::new(),
        cayley_r: None,
        normalization,
        dual_dim_check: None,
        diagnostics,
    };

    if jet.c_k == 0 {
        verdict.reason = Some(Reason::EmptyKernel);
        verdict.diagnostics.push(Diagnostic::EmptyKernel);
        return verdict;
    }
    if !verdict.knap.is_knap {
        verdict.reason = Some(Reason::NotKnap);
        return verdict;
    }

    let bs = b_vectors(&jet).expect("kernel is nonempty");
    let partition = line_partition(&bs).expect("knap rules out zero b-vectors");
    let space = RowSpace::new(a.matrix());
    verdict.el_certificates = partition
        .lines
        .iter()
        .map(|l| {
            space
                .certificate(&l.indicator(norm.len()))
                .expect("indicator has matching length")
        })
        .collect();
    verdict.selfdual = verdict.el_certificates.iter().all(|c| c.member);
    if verdict.selfdual {
        verdict.cayley_r = Some(partition.r());
    } else {
        verdict.reason = Some(Reason::LineIndicatorOutsideRowspan);
    }
    if jet.c_k == 1 && !verdict.selfdual {
        verdict.diagnostics.push(violation(
            "knap with c_k = 1 implies selfdual",
            "the single line indicator is not affine".into(),
        ));
    }
    verdict.partition = Some(partition);
    if verdict.selfdual {
        let checks = theorem_checks(&verdict, &bs, &jet);
        verdict.diagnostics.extend(checks);
    }
    verdict
}

fn violation(check: &str, detail: String) -> Diagnostic {
    log::warn!("theorem violation: {check}: {detail}");
    Diagnostic::TheoremViolation {
        check: check.to_string(),
        detail,
    }
}

/// Consequences of selfduality that must hold on every selfdual verdict.
fn theorem_checks(v: &SelfdualVerdict, bs: &[Vec<BigInt>], jet: &JetData) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let partition = v.partition.as_ref().expect("selfdual verdicts carry a partition");
    for (j, line) in partition.lines.iter().enumerate() {
        let mut sum = vec![BigInt::zero(); v.c_k];
        for &i in &line.members {
            for (s, x) in sum.iter_mut().zip(&bs[i]) {
                *s += x;
            }
        }
        if sum.iter().any(|x| !x.is_zero()) {
            out.push(violation(
                "b-vectors on each line sum to zero",
                format!("line {j} sums to {sum:?}"),
            ));
        }
    }
    let big_n = v.points - 1;
    if v.d_k + v.n < big_n {
        out.push(violation(
            "d_k >= N - n",
            format!("d_k = {}, N = {big_n}, n = {}", v.d_k, v.n),
        ));
    }
    if partition.r() < v.c_k {
        out.push(violation(
            "at least c_k lines",
            format!("r = {}, c_k = {}", partition.r(), v.c_k),
        ));
    }
    if v.k >= 2 && v.c_k >= 2 && jet.generically_jet_spanned() {
        out.push(violation(
            "k >= 2 and c_k >= 2 rule out generic jet spannedness",
            format!("rank A^(k) = {} is maximal", jet.rank),
        ));
    }
    out
}

/// True when the two partitions agree up to relabeling the lines.
pub fn same_partition(a: &[Vec<usize>], b: &[Vec<usize>]) -> bool {
    let norm = |p: &[Vec<usize>]| {
        let mut v: Vec<Vec<usize>> = p
            .iter()
            .map(|s| {
                let mut s = s.clone();
                s.sort_unstable();
                s
            })
            .collect();
        v.sort();
        v
    };
    norm(a) == norm(b)
}

/// Checks `Σ_{i∈Γ} b_i = 0` for every line.
pub fn line_sums_vanish(bs: &[Vec<BigInt>], partition: &LinePartition) -> bool {
    partition.lines.iter().all(|l| {
        let c = bs.first().map_or(0, Vec::len);
        (0..c).all(|t| l.members.iter().map(|&i| &bs[i][t]).sum::<BigInt>().is_zero())
    })
}
