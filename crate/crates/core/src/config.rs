//! Lattice configurations: finite ordered sets of distinct integer points.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactla::{self, IntMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConfigError {
    #[error("configuration has no points")]
    Empty,
    #[error("point {index} has {found} coordinates, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("points {first} and {second} coincide")]
    DuplicatePoint { first: usize, second: usize },
    #[error("index {index} out of range for {len} points")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("affine map has shape {rows}x{cols}, expected {dim}x{dim}")]
    BadAffineMap { rows: usize, cols: usize, dim: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid JSON configuration: {0}")]
    Json(String),
    #[error("coordinate does not fit in 64 bits")]
    Overflow,
}

/// An ordered list of distinct points `a_0, …, a_N` in `Z^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct LatticeConfiguration {
    dim: usize,
    points: Vec<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    label: Option<String>,
}

#[derive(Deserialize)]
struct RawConfiguration {
    dim: usize,
    points: Vec<Vec<i64>>,
    #[serde(default)]
    label: Option<String>,
}

/// The `(n+1) × (N+1)` matrix with columns `(1, a_i)`.
#[derive(Clone, Debug)]
pub struct HomogenizedMatrix {
    matrix: IntMatrix,
    rank: usize,
}

impl HomogenizedMatrix {
    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Points read back from columns, dropping the homogenizing coordinate.
    pub fn points(&self) -> Vec<Vec<i64>> {
        (0..self.matrix.cols())
            .map(|c| {
                (1..self.matrix.rows())
                    .map(|r| self.matrix.get(r, c).to_i64().expect("entries come from i64 points"))
                    .collect()
            })
            .collect()
    }
}

/// Affine map from normalized coordinates back to the original ones:
/// `a = origin + Σ_j c_j · basis[j]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticeTransform {
    pub origin: Vec<i64>,
    pub basis: Vec<Vec<i64>>,
    /// Index of the lattice spanned by the differences inside its saturation
    /// in the ambient lattice.
    #[serde(serialize_with = "crate::serde_num::int")]
    pub index: BigInt,
    /// Whether the ambient dimension dropped (a degenerate configuration).
    pub reembedded: bool,
}

impl LatticeTransform {
    pub fn identity(dim: usize) -> Self {
        Self {
            origin: vec![0; dim],
            basis: (0..dim)
                .map(|i| (0..dim).map(|j| i64::from(i == j)).collect())
                .collect(),
            index: BigInt::from(1),
            reembedded: false,
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.origin.len())
    }

    pub fn apply(&self, c: &[i64]) -> Vec<i64> {
        let mut out = self.origin.clone();
        for (cj, row) in c.iter().zip(&self.basis) {
            for (o, b) in out.iter_mut().zip(row) {
                *o += cj * b;
            }
        }
        out
    }
}

impl LatticeConfiguration {
    /// Validates and wraps a point list.
    pub fn new(points: Vec<Vec<i64>>) -> Result<Self, ConfigError> {
        validate(points)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Vec<i64>] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &[i64] {
        &self.points[i]
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    /// Number of points, `N + 1`.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn homogenize(&self) -> HomogenizedMatrix {
        let matrix = homogenized_matrix(self);
        let rank = exactla::rank(&matrix);
        HomogenizedMatrix { matrix, rank }
    }

    /// Dimension of the affine span.
    pub fn dimension(&self) -> usize {
        self.homogenize().rank - 1
    }

    pub fn contains(&self, p: &[i64]) -> bool {
        self.points.iter().any(|q| q == p)
    }

    pub fn index_of(&self, p: &[i64]) -> Option<usize> {
        self.points.iter().position(|q| q == p)
    }

    /// The points with the given indices, in the given order.
    pub fn subconfiguration(&self, indices: &[usize]) -> Result<Self, ConfigError> {
        let mut pts = Vec::with_capacity(indices.len());
        for &i in indices {
            let p = self.points.get(i).ok_or(ConfigError::IndexOutOfRange {
                index: i,
                len: self.points.len(),
            })?;
            pts.push(p.clone());
        }
        let mut sub = validate_with_dim(pts, self.dim)?;
        sub.label = self.label.clone();
        Ok(sub)
    }

    /// All points except index `i`.
    pub fn without(&self, i: usize) -> Result<Self, ConfigError> {
        let keep: Vec<usize> = (0..self.len()).filter(|&j| j != i).collect();
        if keep.len() == self.len() {
            return Err(ConfigError::IndexOutOfRange {
                index: i,
                len: self.len(),
            });
        }
        self.subconfiguration(&keep)
    }

    /// Appends points, revalidating.
    pub fn extended(&self, extra: &[Vec<i64>]) -> Result<Self, ConfigError> {
        let mut pts = self.points.clone();
        pts.extend(extra.iter().cloned());
        let mut out = validate_with_dim(pts, self.dim)?;
        out.label = self.label.clone();
        Ok(out)
    }

    /// Reorders points: the new `i`-th point is the old `perm[i]`-th.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self, ConfigError> {
        if perm.len() != self.len() {
            return Err(ConfigError::DimensionMismatch {
                index: 0,
                expected: self.len(),
                found: perm.len(),
            });
        }
        self.subconfiguration(perm)
    }

    /// Image under `a ↦ U a + t`. Distinctness is rechecked, so a singular
    /// `U` that collapses points is reported as a duplicate.
    pub fn map_affine(&self, u: &[Vec<i64>], t: &[i64]) -> Result<Self, ConfigError> {
        let n = self.dim;
        if u.len() != n || u.iter().any(|r| r.len() != n) || t.len() != n {
            return Err(ConfigError::BadAffineMap {
                rows: u.len(),
                cols: u.first().map_or(0, Vec::len),
                dim: n,
            });
        }
        let pts = self
            .points
            .iter()
            .map(|p| {
                (0..n)
                    .map(|r| {
                        let mut acc = t[r] as i128;
                        for c in 0..n {
                            acc += u[r][c] as i128 * p[c] as i128;
                        }
                        i64::try_from(acc).map_err(|_| ConfigError::Overflow)
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut out = validate_with_dim(pts, n)?;
        out.label = self.label.clone();
        Ok(out)
    }

    /// Returns an affinely equivalent configuration whose points affinely
    /// generate the full lattice `Z^{n'}`, where `n'` is the dimension of the
    /// affine span, together with the map back. Already normalized inputs
    /// come back unchanged.
    pub fn normalize_lattice(&self) -> Result<(Self, LatticeTransform), ConfigError> {
        let h = self.homogenize();
        let index = exactla::maximal_minor_gcd(h.matrix());
        if h.rank == self.dim + 1 && index == BigInt::from(1) {
            return Ok((self.clone(), LatticeTransform::identity(self.dim)));
        }

        let origin = self.points[0].clone();
        let mut diffs: Vec<Vec<BigInt>> = self.points[1..]
            .iter()
            .map(|p| p.iter().zip(&origin).map(|(x, o)| BigInt::from(*x) - o).collect())
            .collect();
        let pivots = exactla::hermite(&mut diffs, self.dim, None);
        let basis: Vec<Vec<BigInt>> = diffs[..pivots.len()].to_vec();

        let mut coords = Vec::with_capacity(self.len());
        for p in &self.points {
            let mut d: Vec<BigInt> = p.iter().zip(&origin).map(|(x, o)| BigInt::from(*x) - o).collect();
            let mut c = Vec::with_capacity(basis.len());
            for (row, &pc) in basis.iter().zip(&pivots) {
                let q = &d[pc] / &row[pc];
                debug_assert!((&d[pc] - &q * &row[pc]).is_zero());
                for (x, b) in d.iter_mut().zip(row) {
                    *x -= &q * b;
                }
                c.push(q.to_i64().ok_or(ConfigError::Overflow)?);
            }
            debug_assert!(d.iter().all(Zero::is_zero));
            coords.push(c);
        }

        let basis_i64 = basis
            .iter()
            .map(|r| r.iter().map(|x| x.to_i64().ok_or(ConfigError::Overflow)).collect())
            .collect::<Result<Vec<Vec<i64>>, _>>()?;
        let new_dim = basis.len();
        let mut out = validate_with_dim(coords, new_dim)?;
        out.label = self.label.clone();
        let transform = LatticeTransform {
            origin,
            basis: basis_i64,
            index: saturation_index(&basis, self.dim),
            reembedded: new_dim < self.dim,
        };
        Ok((out, transform))
    }

    /// True when the points affinely generate `Z^n`.
    pub fn is_normalized(&self) -> bool {
        let h = self.homogenize();
        h.rank == self.dim + 1 && exactla::maximal_minor_gcd(h.matrix()) == BigInt::from(1)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        if let Some(l) = &self.label {
            s.push_str(&format!("# {l}\n"));
        }
        for p in &self.points {
            let row: Vec<String> = p.iter().map(ToString::to_string).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("configuration serializes")
    }
}

impl fmt::Display for LatticeConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pts: Vec<String> = self
            .points
            .iter()
            .map(|p| {
                let c: Vec<String> = p.iter().map(ToString::to_string).collect();
                format!("({})", c.join(","))
            })
            .collect();
        write!(f, "{{{}}}", pts.join(", "))
    }
}

/// Index of the lattice spanned by `basis` inside its saturation.
fn saturation_index(basis: &[Vec<BigInt>], n: usize) -> BigInt {
    if basis.is_empty() {
        return BigInt::from(1);
    }
    let m = IntMatrix::from_rows_with_cols(basis.to_vec(), n).expect("rows have length n");
    exactla::maximal_minor_gcd(&m)
}

fn homogenized_matrix(cfg: &LatticeConfiguration) -> IntMatrix {
    let mut m = IntMatrix::zeros(cfg.dim + 1, cfg.len());
    for (c, p) in cfg.points.iter().enumerate() {
        m.set(0, c, BigInt::from(1));
        for (r, &x) in p.iter().enumerate() {
            m.set(r + 1, c, BigInt::from(x));
        }
    }
    m
}

/// Checks a point list: nonempty, uniform dimension, pairwise distinct.
pub fn validate(points: Vec<Vec<i64>>) -> Result<LatticeConfiguration, ConfigError> {
    let dim = points.first().ok_or(ConfigError::Empty)?.len();
    validate_with_dim(points, dim)
}

fn validate_with_dim(points: Vec<Vec<i64>>, dim: usize) -> Result<LatticeConfiguration, ConfigError> {
    if points.is_empty() {
        return Err(ConfigError::Empty);
    }
    let mut seen: HashMap<&[i64], usize> = HashMap::with_capacity(points.len());
    for (i, p) in points.iter().enumerate() {
        if p.len() != dim {
            return Err(ConfigError::DimensionMismatch {
                index: i,
                expected: dim,
                found: p.len(),
            });
        }
        if let Some(&first) = seen.get(p.as_slice()) {
            return Err(ConfigError::DuplicatePoint { first, second: i });
        }
        seen.insert(p, i);
    }
    Ok(LatticeConfiguration {
        dim,
        points,
        label: None,
    })
}

/// Whitespace-separated integers, one point per line; `#` starts a comment.
pub fn parse_text(input: &str) -> Result<LatticeConfiguration, ConfigError> {
    let mut points = Vec::new();
    let mut dim = None;
    for (ln, raw) in input.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let p = line
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<i64>().map_err(|e| ConfigError::Parse {
                    line: ln + 1,
                    message: format!("{t:?}: {e}"),
                })
            })
            .collect::<Result<Vec<i64>, _>>()?;
        match dim {
            None => dim = Some(p.len()),
            Some(d) if d != p.len() => {
                return Err(ConfigError::Parse {
                    line: ln + 1,
                    message: format!("expected {d} coordinates, found {}", p.len()),
                })
            }
            _ => {}
        }
        points.push(p);
    }
    validate(points)
}

/// `{"dim": n, "points": [[...], ...], "label": "..."}`.
pub fn parse_json(input: &str) -> Result<LatticeConfiguration, ConfigError> {
    let raw: RawConfiguration = serde_json::from_str(input).map_err(|e| ConfigError::Json(e.to_string()))?;
    let mut cfg = validate_with_dim(raw.points, raw.dim)?;
    cfg.label = raw.label;
    Ok(cfg)
}

/// JSON if the input starts with `{`, the text format otherwise.
pub fn parse(input: &str) -> Result<LatticeConfiguration, ConfigError> {
    if input.trim_start().starts_with('{') {
        parse_json(input)
    } else {
        parse_text(input)
    }
}
