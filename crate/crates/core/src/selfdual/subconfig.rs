use serde::Serialize;

use super::{classify, SelfdualError};
use crate::config::LatticeConfiguration;

/// Outcome for a subconfiguration of a selfdual configuration. Only the
/// first two are possible when the theory holds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum SubconfigVerdict {
    NotKnap,
    Selfdual,
    TheoremViolation { detail: String },
}

/// For a non-knap configuration with `c_k = 1`, the points where the kernel
/// generator is nonzero. They form a k-selfdual configuration.
pub fn extract_dj(cfg: &LatticeConfiguration, k: u32) -> Result<LatticeConfiguration, SelfdualError> {
    let v = classify(cfg, k);
    if v.c_k != 1 {
        return Err(SelfdualError::Inapplicable(format!("c_k = {}, expected 1", v.c_k)));
    }
    if v.knap.is_knap {
        return Err(SelfdualError::Inapplicable("configuration is already knap".into()));
    }
    let keep: Vec<usize> = (0..cfg.len()).filter(|i| !v.knap.j.contains(i)).collect();
    Ok(cfg.subconfiguration(&keep)?)
}

/// Classifies `cfg` restricted to `subset`, given that `cfg` itself is
/// k-selfdual.
pub fn subconfiguration_verdict(
    cfg: &LatticeConfiguration,
    k: u32,
    subset: &[usize],
) -> Result<SubconfigVerdict, SelfdualError> {
    if !classify(cfg, k).selfdual {
        return Err(SelfdualError::ParentNotSelfdual);
    }
    let sub = cfg.subconfiguration(subset)?;
    let v = classify(&sub, k);
    Ok(if !v.knap.is_knap {
        SubconfigVerdict::NotKnap
    } else if v.selfdual {
        SubconfigVerdict::Selfdual
    } else {
        let detail = format!("subset {subset:?} is knap at k = {k} but not selfdual");
        log::warn!("theorem violation: {detail}");
        SubconfigVerdict::TheoremViolation { detail }
    })
}
