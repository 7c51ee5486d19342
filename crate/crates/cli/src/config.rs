//! Run configuration: CLI flags and/or a JSON config file, with the file
//! winning on conflicts (a reproducible experiment record beats ad-hoc
//! flags; conflicts are warned about on stderr).

use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use bergkern::family::ParamMap;
use bergkern::{RadialWeight, ShadowRegion};

#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<String>,
    pub family: Option<String>,
    pub params: Option<ParamMap>,
    /// JSON descriptor of a custom product-form weight (see
    /// [`CustomWeightSpec`]).
    pub weight_file: Option<PathBuf>,
    /// Moment-table degree bound.
    pub degree: Option<u32>,
    /// Series degree budget.
    pub max_degree: Option<u32>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub samples: Option<u64>,
    /// Points file for eval (one point pair per line).
    pub points: Option<PathBuf>,
    /// Number of sampled point pairs for verification suites.
    pub num_points: Option<usize>,
    pub suite: Option<String>,
    pub scheme: Option<String>,
    /// Moments method: closed | quadrature | both.
    pub method: Option<String>,
    pub out: Option<PathBuf>,
    pub format: Option<String>,
    /// Boundary slack for sampled verification points.
    pub slack: Option<f64>,
}

macro_rules! merge_field {
    ($file:expr, $flags:expr, $field:ident) => {
        if let Some(file_value) = &$file.$field {
            if let Some(flag_value) = &$flags.$field {
                if file_value != flag_value {
                    eprintln!(
                        "warning: --{} {:?} conflicts with config file value {:?}; using the file",
                        stringify!($field).replace('_', "-"),
                        flag_value,
                        file_value
                    );
                }
            }
        } else {
            $file.$field = $flags.$field.clone();
        }
    };
}

impl RunConfig {
    /// Loads a config file and folds the flag values in underneath it.
    pub fn merge_file_over_flags(path: &Path, flags: RunConfig) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config file {}", path.display()))?;
        let mut cfg: RunConfig = serde_json::from_str(&text)
            .with_context(|| format!("parsing config file {}", path.display()))?;
        merge_field!(cfg, flags, command);
        merge_field!(cfg, flags, family);
        merge_field!(cfg, flags, params);
        merge_field!(cfg, flags, weight_file);
        merge_field!(cfg, flags, degree);
        merge_field!(cfg, flags, max_degree);
        merge_field!(cfg, flags, tol);
        merge_field!(cfg, flags, seed);
        merge_field!(cfg, flags, samples);
        merge_field!(cfg, flags, points);
        merge_field!(cfg, flags, num_points);
        merge_field!(cfg, flags, suite);
        merge_field!(cfg, flags, scheme);
        merge_field!(cfg, flags, method);
        merge_field!(cfg, flags, out);
        merge_field!(cfg, flags, format);
        merge_field!(cfg, flags, slack);
        Ok(cfg)
    }
}

/// Restricted custom weight descriptor:
/// weight(r) = constant * prod r_j^{axis_powers_j}
///           * exp(-sum exp_coeffs_j * r_j^{exp_powers_j})
/// on the box (or orthant, where bounds_j is null) prod [0, bounds_j).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomWeightSpec {
    pub arity: usize,
    pub bounds: Vec<Option<f64>>,
    #[serde(default = "one")]
    pub constant: f64,
    #[serde(default)]
    pub axis_powers: Option<Vec<f64>>,
    #[serde(default)]
    pub exp_coeffs: Option<Vec<f64>>,
    #[serde(default)]
    pub exp_powers: Option<Vec<f64>>,
}

fn one() -> f64 {
    1.0
}

impl CustomWeightSpec {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading weight file {}", path.display()))?;
        let spec: CustomWeightSpec = serde_json::from_str(&text)
            .with_context(|| format!("parsing weight file {}", path.display()))?;
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        if self.arity < 1 {
            bail!("weight arity must be >= 1");
        }
        if self.bounds.len() != self.arity {
            bail!("bounds must have one entry per axis");
        }
        if !(self.constant > 0.0) {
            bail!("constant must be positive");
        }
        for (name, v) in [
            ("axis_powers", &self.axis_powers),
            ("exp_coeffs", &self.exp_coeffs),
            ("exp_powers", &self.exp_powers),
        ] {
            if let Some(v) = v {
                if v.len() != self.arity {
                    bail!("{name} must have one entry per axis");
                }
                if v.iter().any(|x| *x < 0.0) {
                    bail!("{name} entries must be nonnegative");
                }
            }
        }
        for (j, b) in self.bounds.iter().enumerate() {
            if let Some(b) = b {
                if !(*b > 0.0) || !b.is_finite() {
                    bail!("bound for axis {j} must be positive and finite");
                }
            } else {
                // unbounded axis: the weight must decay there
                let decays = self
                    .exp_coeffs
                    .as_ref()
                    .map(|c| c[j] > 0.0)
                    .unwrap_or(false);
                if !decays {
                    bail!("axis {j} is unbounded but the weight does not decay on it");
                }
            }
        }
        Ok(())
    }

    pub fn weight(&self) -> RadialWeight {
        let constant = self.constant;
        let powers = self.axis_powers.clone().unwrap_or_default();
        let coeffs = self.exp_coeffs.clone().unwrap_or_default();
        let exps = self.exp_powers.clone().unwrap_or_default();
        RadialWeight::custom(
            self.arity,
            Arc::new(move |r: &[f64]| {
                let mut log = constant.ln();
                for (j, &x) in r.iter().enumerate() {
                    if let Some(&p) = powers.get(j) {
                        if p > 0.0 {
                            log += p * x.ln();
                        }
                    }
                    if let Some(&c) = coeffs.get(j) {
                        if c > 0.0 {
                            let s = exps.get(j).copied().unwrap_or(1.0);
                            log -= c * x.powf(s);
                        }
                    }
                }
                log.exp()
            }),
        )
    }

    pub fn shadow(&self) -> ShadowRegion {
        if self.bounds.iter().all(Option::is_some) {
            ShadowRegion::boxed(self.bounds.iter().map(|b| b.unwrap()).collect())
                .expect("validated bounds")
        } else {
            ShadowRegion::custom(self.bounds.clone(), Arc::new(|_: &[f64]| true))
        }
    }
}
