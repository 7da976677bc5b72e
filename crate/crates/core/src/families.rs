//! Generators for standard families and a catalog of named examples.

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::config::{ConfigError, LatticeConfiguration};
use crate::osculation::{self, binomial, multiindices};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("unknown fixture {0:?}")]
    UnknownFixture(String),
    #[error("box [0,{box_size}]^{n} has {available} points, {needed} needed")]
    BoxTooSmall {
        n: usize,
        box_size: u32,
        available: u128,
        needed: usize,
    },
    #[error("no general configuration found in {0} attempts")]
    BudgetExhausted(usize),
    #[error(transparent)]
    Config(#[from] ConfigError),
}

fn labelled(points: Vec<Vec<i64>>, label: impl Into<String>) -> Result<LatticeConfiguration, FamilyError> {
    Ok(LatticeConfiguration::new(points)?.with_label(label))
}

/// `{0, 1, …, d}` on a line.
pub fn segment(d: u32) -> Result<LatticeConfiguration, FamilyError> {
    if d == 0 {
        return Err(FamilyError::InvalidParameters("segment needs d >= 1".into()));
    }
    labelled((0..=d as i64).map(|x| vec![x]).collect(), format!("segment({d})"))
}

/// All lattice points of `[0,ℓ_1] × … × [0,ℓ_m]`, lexicographic with the
/// first coordinate varying slowest.
pub fn box_points(lengths: &[u32]) -> Result<LatticeConfiguration, FamilyError> {
    if lengths.is_empty() || lengths.contains(&0) {
        return Err(FamilyError::InvalidParameters("box side lengths must be >= 1".into()));
    }
    let mut pts: Vec<Vec<i64>> = vec![vec![]];
    for &l in lengths {
        pts = pts
            .into_iter()
            .flat_map(|p| {
                (0..=l as i64).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    let name: Vec<String> = lengths.iter().map(ToString::to_string).collect();
    labelled(pts, format!("box({})", name.join(",")))
}

/// Vertices of the unit `n`-cube.
pub fn cube_vertices(n: usize) -> Result<LatticeConfiguration, FamilyError> {
    if n == 0 {
        return Err(FamilyError::InvalidParameters("cube needs n >= 1".into()));
    }
    let cfg = box_points(&vec![1; n])?;
    Ok(cfg.with_label(format!("cube({n})")))
}

/// Lattice points of `kΔ_n` in jet-matrix row order.
pub fn simplex(n: usize, k: u32) -> Result<LatticeConfiguration, FamilyError> {
    if n == 0 {
        return Err(FamilyError::InvalidParameters("simplex needs n >= 1".into()));
    }
    let pts = multiindices(n, k)
        .iter()
        .map(|a| a.reduced().iter().map(|&e| e as i64).collect())
        .collect();
    labelled(pts, format!("simplex({n},{k})"))
}

fn pad(p: &[i64], d: usize) -> impl Iterator<Item = i64> + '_ {
    p.iter().copied().chain(std::iter::repeat_n(0, d - p.len()))
}

/// `e_1 × A_1 ∪ … ∪ e_r × A_r`, written in `Z^{r−1+d}` by dropping the
/// first unit coordinate. Lower-dimensional inputs are padded with zeros.
pub fn cayley(cfgs: &[LatticeConfiguration]) -> Result<LatticeConfiguration, FamilyError> {
    if cfgs.is_empty() {
        return Err(FamilyError::InvalidParameters(
            "cayley needs at least one configuration".into(),
        ));
    }
    let r = cfgs.len();
    let d = cfgs.iter().map(LatticeConfiguration::dim).max().unwrap_or(0);
    let mut pts = Vec::new();
    for (j, c) in cfgs.iter().enumerate() {
        for p in c.points() {
            let mut q: Vec<i64> = (1..r).map(|i| i64::from(i == j)).collect();
            q.extend(pad(p, d));
            pts.push(q);
        }
    }
    let names: Vec<&str> = cfgs.iter().map(|c| c.label().unwrap_or("?")).collect();
    labelled(pts, format!("cayley({})", names.join(", ")))
}

/// Balanced or unbalanced rational normal scroll, `cayley` of segments.
pub fn scroll(lengths: &[u32]) -> Result<LatticeConfiguration, FamilyError> {
    let segs = lengths.iter().map(|&d| segment(d)).collect::<Result<Vec<_>, _>>()?;
    let name: Vec<String> = lengths.iter().map(ToString::to_string).collect();
    Ok(cayley(&segs)?.with_label(format!("scroll({})", name.join(","))))
}

/// Join: block `i` lives in its own coordinates, separated by `s − 1`
/// indicator coordinates, so the homogenized matrix is block diagonal up to
/// row operations.
pub fn join(cfgs: &[LatticeConfiguration]) -> Result<LatticeConfiguration, FamilyError> {
    if cfgs.len() < 2 {
        return Err(FamilyError::InvalidParameters(
            "join needs at least two configurations".into(),
        ));
    }
    let s = cfgs.len();
    let total: usize = cfgs.iter().map(LatticeConfiguration::dim).sum();
    let mut offset = 0;
    let mut pts = Vec::new();
    for (j, c) in cfgs.iter().enumerate() {
        for p in c.points() {
            let mut q: Vec<i64> = (1..s).map(|i| i64::from(i == j)).collect();
            let mut block = vec![0; total];
            block[offset..offset + c.dim()].copy_from_slice(p);
            q.extend(block);
            pts.push(q);
        }
        offset += c.dim();
    }
    let names: Vec<&str> = cfgs.iter().map(|c| c.label().unwrap_or("?")).collect();
    labelled(pts, format!("join({})", names.join(", ")))
}

pub fn togliatti() -> LatticeConfiguration {
    labelled(
        vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![2, 1], vec![1, 2], vec![2, 2]],
        "togliatti",
    )
    .expect("fixed points are distinct")
}

/// The six points `(m_i, m_j)`, `i ≠ j`, on the conic through them.
pub fn three_root_conic(m1: i64, m2: i64, m3: i64) -> Result<LatticeConfiguration, FamilyError> {
    let m = [m1, m2, m3];
    if m1 == m2 || m1 == m3 || m2 == m3 {
        return Err(FamilyError::InvalidParameters("roots must be distinct".into()));
    }
    let mut pts = Vec::with_capacity(6);
    for i in 0..3 {
        for j in 0..3 {
            if i != j {
                pts.push(vec![m[i], m[j]]);
            }
        }
    }
    labelled(pts, format!("three_root_conic({m1},{m2},{m3})"))
}

pub const APRIME_EXTRAS: [[i64; 2]; 3] = [[3, 3], [4, 3], [4, 2]];

/// `{(0,0),(1,0),(0,1),(3,1),(1,2)}` plus any of `(3,3)`, `(4,3)`, `(4,2)`.
pub fn aprime(extras: &[[i64; 2]]) -> Result<LatticeConfiguration, FamilyError> {
    let mut pts = vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![3, 1], vec![1, 2]];
    for e in extras {
        if !APRIME_EXTRAS.contains(e) {
            return Err(FamilyError::InvalidParameters(format!(
                "extra point {e:?} is not one of {APRIME_EXTRAS:?}"
            )));
        }
        pts.push(e.to_vec());
    }
    let names: Vec<String> = extras.iter().map(|e| format!("({},{})", e[0], e[1])).collect();
    labelled(pts, format!("aprime[{}]", names.join(",")))
}

/// The ten-point family
/// `{(0,0),(1,0),(0,1),(2,1),(c−1,e),(c,d−1),(c,d),(c−1,d),(c−2,d−1),(1,d−e)}`.
pub fn mulliken(c: i64, d: i64, e: i64) -> Result<LatticeConfiguration, FamilyError> {
    if d == 1 || d == 2 * (c - 1) {
        return Err(FamilyError::InvalidParameters(
            "mulliken requires d != 1 and d != 2(c-1)".into(),
        ));
    }
    let pts = vec![
        vec![0, 0],
        vec![1, 0],
        vec![0, 1],
        vec![2, 1],
        vec![c - 1, e],
        vec![c, d - 1],
        vec![c, d],
        vec![c - 1, d],
        vec![c - 2, d - 1],
        vec![1, d - e],
    ];
    labelled(pts, format!("mulliken({c},{d},{e})"))
}

/// A named example together with the order `k` it is discussed at and
/// whether it is expected to be k-selfdual.
#[derive(Clone, Debug, Serialize)]
pub struct Fixture {
    pub name: &'static str,
    pub k: u32,
    pub expected_selfdual: bool,
    pub note: &'static str,
    pub config: LatticeConfiguration,
}

pub const FIXTURE_NAMES: [&str; 7] = [
    "figure1",
    "figure2_hexagon",
    "figure3",
    "twisted_cubic_cone",
    "blowup_veronese_segre",
    "togliatti_with_center",
    "aprime_octagon",
];

pub fn fixture(name: &str) -> Result<Fixture, FamilyError> {
    let f = |name, k, expected_selfdual, note, pts: Vec<[i64; 2]>| -> Result<Fixture, FamilyError> {
        Ok(Fixture {
            name,
            k,
            expected_selfdual,
            note,
            config: labelled(pts.into_iter().map(|p| p.to_vec()).collect(), name)?,
        })
    };
    match name {
        "figure1" => f(
            "figure1",
            1,
            true,
            "quadrilateral (1 : t1 : t1 t2 : t2^2)",
            vec![[0, 0], [1, 0], [1, 1], [0, 2]],
        ),
        "figure2_hexagon" => f(
            "figure2_hexagon",
            2,
            true,
            "transcribed from a dot diagram",
            vec![[0, 0], [1, 0], [0, 1], [3, 1], [1, 2], [4, 3]],
        ),
        "figure3" => f(
            "figure3",
            4,
            true,
            "transcribed from a dot diagram; as drawn the centre point is separated by x(x-1)(x-3)(x-4)",
            vec![
                [0, 4],
                [1, 4],
                [3, 4],
                [4, 4],
                [0, 3],
                [1, 3],
                [4, 3],
                [2, 2],
                [0, 1],
                [1, 1],
                [3, 1],
                [4, 1],
                [0, 0],
                [1, 0],
                [3, 0],
                [4, 0],
            ],
        ),
        "twisted_cubic_cone" => f(
            "twisted_cubic_cone",
            1,
            false,
            "cone over a twisted cubic; a pyramid with apex at index 0",
            vec![[1, 0], [0, 0], [0, 1], [0, 2], [0, 3]],
        ),
        "blowup_veronese_segre" => f(
            "blowup_veronese_segre",
            3,
            true,
            "[0,3]x[0,2] without (0,0) and (3,2); transcribed from a dot diagram",
            vec![
                [1, 0],
                [2, 0],
                [3, 0],
                [0, 1],
                [1, 1],
                [2, 1],
                [3, 1],
                [0, 2],
                [1, 2],
                [2, 2],
            ],
        ),
        "togliatti_with_center" => f(
            "togliatti_with_center",
            2,
            false,
            "hexagon plus its interior point; not knap",
            vec![[0, 0], [1, 0], [0, 1], [2, 1], [1, 2], [2, 2], [1, 1]],
        ),
        "aprime_octagon" => f(
            "aprime_octagon",
            3,
            true,
            "A' with all three extra points",
            vec![[0, 0], [1, 0], [0, 1], [3, 1], [1, 2], [3, 3], [4, 3], [4, 2]],
        ),
        other => Err(FamilyError::UnknownFixture(other.to_string())),
    }
}

pub const DEFAULT_RESAMPLE_BUDGET: usize = 1000;

#[derive(Clone, Debug, Serialize)]
pub struct RandomGeneral {
    pub config: LatticeConfiguration,
    /// Rejected draws before success.
    pub resamples: usize,
}

/// `binom(n+k, k) + 1` distinct points of `[0, box_size]^n`, redrawn until
/// `A^(k)` has maximal rank and the configuration is knap.
pub fn random_general(n: usize, k: u32, seed: u64, box_size: u32) -> Result<RandomGeneral, FamilyError> {
    random_general_with_budget(n, k, seed, box_size, DEFAULT_RESAMPLE_BUDGET)
}

pub fn random_general_with_budget(
    n: usize,
    k: u32,
    seed: u64,
    box_size: u32,
    budget: usize,
) -> Result<RandomGeneral, FamilyError> {
    if n == 0 {
        return Err(FamilyError::InvalidParameters("n must be >= 1".into()));
    }
    let full = binomial(n as u64 + k as u64, k as u64) as usize;
    let needed = full + 1;
    let side = box_size as u128 + 1;
    let available = side.checked_pow(n as u32).unwrap_or(u128::MAX);
    if available < needed as u128 || available > usize::MAX as u128 {
        return Err(FamilyError::BoxTooSmall {
            n,
            box_size,
            available,
            needed,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..budget {
        let picks = index::sample(&mut rng, available as usize, needed);
        let pts: Vec<Vec<i64>> = picks
            .iter()
            .map(|mut code| {
                let mut p = vec![0i64; n];
                for x in p.iter_mut().rev() {
                    *x = (code % side as usize) as i64;
                    code /= side as usize;
                }
                p
            })
            .collect();
        let cfg = LatticeConfiguration::new(pts)?;
        let jet = osculation::jet_matrix(&cfg, k);
        if jet.rank == full && jet.kernel.zero_coordinates().is_empty() {
            return Ok(RandomGeneral {
                config: cfg.with_label(format!("random_general({n},{k},{seed},{box_size})")),
                resamples: attempt,
            });
        }
    }
    Err(FamilyError::BudgetExhausted(budget))
}
