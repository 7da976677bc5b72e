//! Family tags and parameter strings for `generate`.

use anyhow::{anyhow, bail, Context, Result};
use kselfdual::families::{self, APRIME_EXTRAS};
use kselfdual::LatticeConfiguration;

pub const FAMILY_TAGS: [&str; 13] = [
    "segment",
    "box",
    "cube",
    "simplex",
    "scroll",
    "cayley",
    "join",
    "togliatti",
    "three-root-conic",
    "aprime",
    "mulliken",
    "random-general",
    "fixture",
];

/// Randomness knobs, only read by `random-general`.
#[derive(Clone, Copy, Debug)]
pub struct Sampling {
    pub seed: u64,
    pub box_size: u32,
}

fn numbers<T: std::str::FromStr>(params: &str) -> Result<Vec<T>>
where
    T::Err: std::error::Error + Send + Sync + 'static,
{
    params
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<T>().with_context(|| format!("bad parameter {s:?}")))
        .collect()
}

fn exactly<T: Copy, const N: usize>(tag: &str, v: Vec<T>) -> Result<[T; N]> {
    <[T; N]>::try_from(v).map_err(|v| anyhow!("{tag} takes {N} parameters, got {}", v.len()))
}

/// Builds a configuration from `tag` and its parameter string.
///
/// `cayley` and `join` take `;`-separated nested specs such as
/// `segment:2;segment:2`.
pub fn build(tag: &str, params: &str, sampling: Sampling) -> Result<LatticeConfiguration> {
    let cfg = match tag {
        "segment" => {
            let [d] = exactly(tag, numbers(params)?)?;
            families::segment(d)?
        }
        "box" => families::box_points(&numbers(params)?)?,
        "cube" => {
            let [n] = exactly(tag, numbers(params)?)?;
            families::cube_vertices(n)?
        }
        "simplex" => {
            let [n, k] = exactly::<u32, 2>(tag, numbers(params)?)?;
            families::simplex(n as usize, k)?
        }
        "scroll" => families::scroll(&numbers(params)?)?,
        "cayley" | "join" => {
            let parts = nested(params, sampling)?;
            if tag == "cayley" {
                families::cayley(&parts)?
            } else {
                families::join(&parts)?
            }
        }
        "togliatti" => families::togliatti(),
        "three-root-conic" => {
            let [a, b, c] = exactly(tag, numbers(params)?)?;
            families::three_root_conic(a, b, c)?
        }
        "aprime" => {
            let extras: Vec<[i64; 2]> = if params.trim().is_empty() {
                APRIME_EXTRAS.to_vec()
            } else {
                params
                    .split(';')
                    .map(|p| exactly(tag, numbers(p)?))
                    .collect::<Result<_>>()?
            };
            families::aprime(&extras)?
        }
        "mulliken" => {
            let [c, d, e] = exactly(tag, numbers(params)?)?;
            families::mulliken(c, d, e)?
        }
        "random-general" => {
            let [n, k] = exactly::<u32, 2>(tag, numbers(params)?)?;
            let g = families::random_general(n as usize, k, sampling.seed, sampling.box_size)?;
            log::info!("random-general accepted after {} resamples", g.resamples);
            g.config
        }
        "fixture" => families::fixture(params.trim())?.config,
        other => bail!("unknown family {other:?}; expected one of {}", FAMILY_TAGS.join(", ")),
    };
    Ok(cfg)
}

fn nested(params: &str, sampling: Sampling) -> Result<Vec<LatticeConfiguration>> {
    params
        .split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            let (tag, inner) = s.trim().split_once(':').unwrap_or((s.trim(), ""));
            build(tag, inner, sampling)
        })
        .collect()
}
