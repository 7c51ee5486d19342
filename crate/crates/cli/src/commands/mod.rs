//! Subcommand implementations. Each returns the process exit code; argument
//! and configuration errors bubble up as `Err` and exit with code 2.

pub mod compare;
pub mod eval;
pub mod moments;
pub mod verify;

use std::sync::Arc;

use anyhow::{bail, Context, Result};

use bergkern::family::{default_registry, KernelFamily, ParamMap};
use bergkern::{RadialWeight, ShadowRegion};

use crate::config::{CustomWeightSpec, RunConfig};

/// What a command operates on: a registered family, or a custom
/// weight/shadow pair (quadrature only).
pub struct Target {
    pub family: Option<Arc<dyn KernelFamily>>,
    pub weight: RadialWeight,
    pub shadow: ShadowRegion,
    pub label: String,
}

pub fn resolve_target(cfg: &RunConfig) -> Result<Target> {
    match (&cfg.family, &cfg.weight_file) {
        (Some(name), None) => {
            let params = cfg.params.clone().unwrap_or_else(ParamMap::new);
            let family = default_registry()
                .build(name, &params)
                .with_context(|| format!("building family '{name}'"))?;
            Ok(Target {
                label: family.describe(),
                weight: family.weight(),
                shadow: family.shadow(),
                family: Some(family),
            })
        }
        (None, Some(path)) => {
            let spec = CustomWeightSpec::load(path)?;
            Ok(Target {
                family: None,
                weight: spec.weight(),
                shadow: spec.shadow(),
                label: format!("custom weight from {}", path.display()),
            })
        }
        (Some(_), Some(_)) => bail!("--family and a custom weight file are mutually exclusive"),
        (None, None) => bail!("either --family or a custom weight file is required"),
    }
}

/// Formats a multi-index for CSV cells: entries joined by '|'.
pub fn index_cell(idx: &bergkern::MultiIndex) -> String {
    idx.entries()
        .iter()
        .map(|e| e.to_string())
        .collect::<Vec<_>>()
        .join("|")
}
