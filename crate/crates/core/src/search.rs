//! Exhaustive search over subsets of the lattice points of a box.

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::config::LatticeConfiguration;
use crate::families::box_points;
use crate::osculation;
use crate::selfdual;

pub const DEFAULT_MAX_SUBSETS: u64 = 2_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("{subsets} subsets exceed the budget of {budget}")]
    BudgetExceeded { subsets: u128, budget: u64 },
    #[error("invalid search: {0}")]
    Invalid(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchFilter {
    Knap,
    Selfdual,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchJob {
    pub box_dims: Vec<u32>,
    pub size: usize,
    pub k: u32,
    pub filter: SearchFilter,
    /// Keep one representative per class under coordinate permutations,
    /// reflections and translations.
    pub dedup: bool,
    pub max_subsets: u64,
}

impl SearchJob {
    pub fn new(box_dims: Vec<u32>, size: usize, k: u32) -> Self {
        Self {
            box_dims,
            size,
            k,
            filter: SearchFilter::Selfdual,
            dedup: false,
            max_subsets: DEFAULT_MAX_SUBSETS,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchHit {
    /// Indices into the box points, increasing.
    pub indices: Vec<usize>,
    pub points: Vec<Vec<i64>>,
    pub c_k: usize,
    pub knap: bool,
    pub selfdual: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchOutcome {
    pub examined: u64,
    pub hits: Vec<SearchHit>,
    /// Hits removed as duplicates of an earlier hit.
    pub removed_duplicates: usize,
}

/// Runs the job on the current rayon pool. Results are in lexicographic
/// order of index subsets whatever the number of workers.
pub fn run(job: &SearchJob) -> Result<SearchOutcome, SearchError> {
    if job.size == 0 {
        return Err(SearchError::Invalid("subset size must be >= 1".into()));
    }
    let grid = box_points(&job.box_dims).map_err(|e| SearchError::Invalid(e.to_string()))?;
    let m = grid.len();
    if job.size > m {
        return Err(SearchError::Invalid(format!(
            "subset size {} exceeds {m} box points",
            job.size
        )));
    }
    let total = subset_count(m, job.size);
    if total > job.max_subsets as u128 {
        return Err(SearchError::BudgetExceeded {
            subsets: total,
            budget: job.max_subsets,
        });
    }

    let shards: Vec<Vec<SearchHit>> = (0..=m - job.size)
        .into_par_iter()
        .map(|first| {
            (first + 1..m)
                .combinations(job.size - 1)
                .filter_map(|rest| {
                    let mut idx = Vec::with_capacity(job.size);
                    idx.push(first);
                    idx.extend(rest);
                    examine(&grid, idx, job)
                })
                .collect()
        })
        .collect();
    let mut hits: Vec<SearchHit> = shards.into_iter().flatten().collect();
    let mut removed = 0;
    if job.dedup {
        let mut seen = std::collections::HashSet::new();
        let before = hits.len();
        hits.retain(|h| seen.insert(canonical_form(&h.points)));
        removed = before - hits.len();
    }
    Ok(SearchOutcome {
        examined: total as u64,
        hits,
        removed_duplicates: removed,
    })
}

fn examine(grid: &LatticeConfiguration, idx: Vec<usize>, job: &SearchJob) -> Option<SearchHit> {
    let cfg = grid.subconfiguration(&idx).expect("indices come from the grid");
    let jet = osculation::jet_matrix(&cfg, job.k);
    let knap = jet.c_k > 0 && jet.kernel.zero_coordinates().is_empty();
    if !knap {
        return None;
    }
    let selfdual = selfdual::classify(&cfg, job.k).selfdual;
    if job.filter == SearchFilter::Selfdual && !selfdual {
        return None;
    }
    Some(SearchHit {
        indices: idx,
        points: cfg.points().to_vec(),
        c_k: jet.c_k,
        knap,
        selfdual,
    })
}

/// `binom(m, s)`, saturating at `u128::MAX`.
fn subset_count(m: usize, s: usize) -> u128 {
    let s = s.min(m - s) as u128;
    let mut acc: u128 = 1;
    for i in 0..s {
        match acc.checked_mul(m as u128 - i) {
            Some(v) => acc = v / (i + 1),
            None => return u128::MAX,
        }
    }
    acc
}

/// Smallest sorted point list over all signed coordinate permutations,
/// each followed by translation of the minimum corner to the origin. Equal
/// forms imply lattice-equivalent point sets.
pub fn canonical_form(points: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = points.first().map_or(0, Vec::len);
    let mut best: Option<Vec<Vec<i64>>> = None;
    for perm in (0..n).permutations(n) {
        for signs in 0u32..(1 << n) {
            let mut img: Vec<Vec<i64>> = points
                .iter()
                .map(|p| {
                    perm.iter()
                        .enumerate()
                        .map(|(i, &src)| if signs >> i & 1 == 1 { -p[src] } else { p[src] })
                        .collect()
                })
                .collect();
            for c in 0..n {
                let lo = img.iter().map(|p| p[c]).min().unwrap_or(0);
                for p in img.iter_mut() {
                    p[c] -= lo;
                }
            }
            img.sort();
            if best.as_ref().is_none_or(|b| img < *b) {
                best = Some(img);
            }
        }
    }
    best.unwrap_or_default()
}
