//! Kernel families behind a common trait, registered by name.
//!
//! Each analytic family bundles everything the rest of the crate needs to
//! work with it: its weight and shadow, the closed-form moment formula, the
//! closed-form kernel evaluation, interiority tests, and samplers. Families
//! register in a [`FamilyRegistry`] under a string name so the CLI (and
//! tests) can select them at runtime from `--family`/`--params` pairs.
//!
//! Built-in names: `cn`, `dnm`, `veta`, `ball` and the alias `disc`
//! (the unit disc, i.e. `ball` with n = 1).

mod ball;
mod cn;
mod dnm;
mod veta;

pub use ball::BallFamily;
pub use cn::CnFamily;
pub use dnm::DnmFamily;
pub use veta::VEtaFamily;

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index::MultiIndex;
use crate::moments::MomentTable;
use crate::point::ComplexPoint;
use crate::sampling::ShadowSampler;
use crate::series::KernelValue;
use crate::shadow::ShadowRegion;
use crate::weight::RadialWeight;

/// Anything that can evaluate a kernel at a point pair: closed-form
/// families and the moment-series evaluator both implement this.
pub trait KernelEvaluator: Send + Sync {
    fn arity(&self) -> usize;
    fn eval(&self, x: &ComplexPoint, y: &ComplexPoint, rel_tol: f64) -> Result<KernelValue>;
}

impl KernelEvaluator for crate::series::SeriesKernel {
    fn arity(&self) -> usize {
        self.table().arity()
    }
    fn eval(&self, x: &ComplexPoint, y: &ComplexPoint, rel_tol: f64) -> Result<KernelValue> {
        crate::series::SeriesKernel::eval(self, x, y, rel_tol)
    }
}

/// One weighted kernel family: weight, shadow, closed-form moments, the
/// closed-form kernel, and sampling support.
pub trait KernelFamily: KernelEvaluator {
    /// Registry name of the family ("cn", "dnm", ...).
    fn name(&self) -> &'static str;

    /// Human-readable parameter summary for reports.
    fn describe(&self) -> String;

    fn weight(&self) -> RadialWeight;

    fn shadow(&self) -> ShadowRegion;

    /// ln I(idx) by the family's closed formula.
    fn log_moment(&self, idx: &MultiIndex) -> Result<f64>;

    /// Strict interiority of a point.
    fn contains(&self, x: &ComplexPoint) -> Result<bool>;

    /// Slack of the defining inequality at x: how far the point is from the
    /// boundary in the inequality's own units. Unbounded domains return
    /// infinity.
    fn boundary_slack(&self, x: &ComplexPoint) -> Result<f64>;

    /// A random interior point with boundary slack at least `min_slack`.
    /// For unbounded domains the points land in the unit polydisc.
    fn sample_interior(&self, min_slack: f64, rng: &mut dyn RngCore) -> ComplexPoint;

    /// Monte-Carlo proposal on the shadow, when the family supports one.
    fn shadow_sampler(&self) -> Option<Box<dyn ShadowSampler>>;
}

/// Moment table backed by the family's closed formula.
pub fn family_moment_table(family: &Arc<dyn KernelFamily>) -> MomentTable {
    let f = Arc::clone(family);
    MomentTable::with_closed_form(
        family.weight(),
        family.shadow(),
        Arc::new(move |idx: &MultiIndex| f.log_moment(idx)),
    )
}

/// Moment table backed by adaptive quadrature over the family's shadow.
pub fn family_quadrature_table(family: &dyn KernelFamily, rel_tol: f64) -> Result<MomentTable> {
    MomentTable::with_quadrature(family.weight(), family.shadow(), rel_tol)
}

/// A parameter value from the CLI or a config file: a scalar or a vector
/// (vectors are comma-separated on the command line, e.g. `eta=0.5,2`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Scalar(f64),
    Vector(Vec<f64>),
}

pub type ParamMap = BTreeMap<String, ParamValue>;

impl ParamValue {
    pub fn parse(text: &str) -> Result<Self> {
        if text.contains(',') {
            let v: std::result::Result<Vec<f64>, _> =
                text.split(',').map(|p| p.trim().parse::<f64>()).collect();
            v.map(ParamValue::Vector)
                .map_err(|e| Error::InvalidParameter(format!("bad vector '{text}': {e}")))
        } else {
            text.trim()
                .parse::<f64>()
                .map(ParamValue::Scalar)
                .map_err(|e| Error::InvalidParameter(format!("bad number '{text}': {e}")))
        }
    }
}

/// Parses `key=value` items into a parameter map.
pub fn parse_params(items: &[String]) -> Result<ParamMap> {
    let mut map = ParamMap::new();
    for item in items {
        let (key, value) = item.split_once('=').ok_or_else(|| {
            Error::InvalidParameter(format!("parameter '{item}' is not of the form key=value"))
        })?;
        map.insert(key.trim().to_string(), ParamValue::parse(value)?);
    }
    Ok(map)
}

pub(crate) fn require_scalar(params: &ParamMap, key: &str) -> Result<f64> {
    match params.get(key) {
        Some(ParamValue::Scalar(v)) => Ok(*v),
        Some(ParamValue::Vector(_)) => Err(Error::InvalidParameter(format!(
            "parameter '{key}' must be a scalar"
        ))),
        None => Err(Error::InvalidParameter(format!(
            "missing required parameter '{key}'"
        ))),
    }
}

pub(crate) fn scalar_or(params: &ParamMap, key: &str, default: f64) -> Result<f64> {
    match params.get(key) {
        Some(ParamValue::Scalar(v)) => Ok(*v),
        Some(ParamValue::Vector(_)) => Err(Error::InvalidParameter(format!(
            "parameter '{key}' must be a scalar"
        ))),
        None => Ok(default),
    }
}

pub(crate) fn require_dimension(params: &ParamMap, key: &str) -> Result<usize> {
    let v = require_scalar(params, key)?;
    if v.fract() != 0.0 || v < 1.0 || v > 16.0 {
        return Err(Error::InvalidParameter(format!(
            "parameter '{key}' must be an integer in 1..=16, got {v}"
        )));
    }
    Ok(v as usize)
}

pub(crate) fn require_vector(params: &ParamMap, key: &str, len: usize) -> Result<Vec<f64>> {
    let v = match params.get(key) {
        Some(ParamValue::Vector(v)) => v.clone(),
        Some(ParamValue::Scalar(s)) => vec![*s],
        None => {
            return Err(Error::InvalidParameter(format!(
                "missing required parameter '{key}'"
            )))
        }
    };
    if v.len() == 1 && len > 1 {
        return Ok(vec![v[0]; len]);
    }
    if v.len() != len {
        return Err(Error::ArityMismatch {
            expected: len,
            got: v.len(),
        });
    }
    Ok(v)
}

type FamilyBuilder = Arc<dyn Fn(&ParamMap) -> Result<Arc<dyn KernelFamily>> + Send + Sync>;

/// Name-keyed registry of kernel family constructors.
pub struct FamilyRegistry {
    builders: BTreeMap<String, FamilyBuilder>,
}

impl FamilyRegistry {
    pub fn empty() -> Self {
        Self {
            builders: BTreeMap::new(),
        }
    }

    pub fn register(
        &mut self,
        name: &str,
        builder: impl Fn(&ParamMap) -> Result<Arc<dyn KernelFamily>> + Send + Sync + 'static,
    ) {
        self.builders.insert(name.to_string(), Arc::new(builder));
    }

    pub fn build(&self, name: &str, params: &ParamMap) -> Result<Arc<dyn KernelFamily>> {
        match self.builders.get(name) {
            Some(b) => b(params),
            None => Err(Error::UnknownFamily(name.to_string())),
        }
    }

    pub fn names(&self) -> Vec<String> {
        self.builders.keys().cloned().collect()
    }
}

impl Default for FamilyRegistry {
    fn default() -> Self {
        default_registry()
    }
}

/// The built-in families.
pub fn default_registry() -> FamilyRegistry {
    let mut reg = FamilyRegistry::empty();
    reg.register("cn", |p| {
        let n = require_dimension(p, "n")?;
        let mu1 = require_scalar(p, "mu1")?;
        let mu2 = require_scalar(p, "mu2")?;
        Ok(Arc::new(CnFamily::new(n, mu1, mu2)?) as Arc<dyn KernelFamily>)
    });
    reg.register("dnm", |p| {
        let n = require_dimension(p, "n")?;
        let m = require_dimension(p, "m")?;
        let mu1 = require_scalar(p, "mu1")?;
        let mu2 = require_scalar(p, "mu2")?;
        let eta = scalar_or(p, "eta", 0.0)?;
        Ok(Arc::new(DnmFamily::new(n, m, mu1, mu2, eta)?) as Arc<dyn KernelFamily>)
    });
    reg.register("veta", |p| {
        let n = require_dimension(p, "n")?;
        let m = require_dimension(p, "m")?;
        let eta = require_vector(p, "eta", n)?;
        let a = scalar_or(p, "a", 0.0)?;
        Ok(Arc::new(VEtaFamily::new(n, m, eta, a)?) as Arc<dyn KernelFamily>)
    });
    reg.register("ball", |p| {
        let n = require_dimension(p, "n")?;
        Ok(Arc::new(BallFamily::new(n)) as Arc<dyn KernelFamily>)
    });
    reg.register("disc", |p| {
        let n = match p.get("n") {
            Some(_) => require_dimension(p, "n")?,
            None => 1,
        };
        Ok(Arc::new(BallFamily::new(n)) as Arc<dyn KernelFamily>)
    });
    reg
}

/// Shared helper: sample a uniform complex point in the polydisc of the
/// given per-axis radii.
pub(crate) fn sample_polydisc(radii: &[f64], rng: &mut dyn RngCore) -> ComplexPoint {
    use rand::Rng;
    let coords: Vec<num_complex::Complex64> = radii
        .iter()
        .map(|&radius| {
            let r = radius * rng.random_range(0.0..1.0f64).sqrt();
            let theta = rng.random_range(0.0..2.0 * std::f64::consts::PI);
            num_complex::Complex64::from_polar(r, theta)
        })
        .collect();
    ComplexPoint::new(coords).expect("radii slice is non-empty")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_builds_all_families() {
        let reg = default_registry();
        assert_eq!(reg.names(), vec!["ball", "cn", "disc", "dnm", "veta"]);

        let p = parse_params(&[
            "n=1".to_string(),
            "mu1=1".to_string(),
            "mu2=2".to_string(),
        ])
        .unwrap();
        let f = reg.build("cn", &p).unwrap();
        assert_eq!(f.name(), "cn");
        assert_eq!(f.arity(), 1);

        let p = parse_params(&["n=1".into(), "m=1".into(), "eta=1.5".into(), "a=0".into()])
            .unwrap();
        let f = reg.build("veta", &p).unwrap();
        assert_eq!(f.arity(), 3);

        assert!(matches!(
            reg.build("nope", &ParamMap::new()),
            Err(Error::UnknownFamily(_))
        ));
    }

    #[test]
    fn disc_alias_defaults_to_dimension_one() {
        let reg = default_registry();
        let f = reg.build("disc", &ParamMap::new()).unwrap();
        assert_eq!(f.name(), "ball");
        assert_eq!(f.arity(), 1);
    }

    #[test]
    fn param_parsing() {
        let p = parse_params(&["eta=0.5,2".into(), "a=1".into()]).unwrap();
        assert_eq!(
            p.get("eta"),
            Some(&ParamValue::Vector(vec![0.5, 2.0]))
        );
        assert_eq!(p.get("a"), Some(&ParamValue::Scalar(1.0)));
        assert!(parse_params(&["bad".into()]).is_err());
        assert!(parse_params(&["x=zzz".into()]).is_err());
    }

    #[test]
    fn missing_parameters_are_reported() {
        let reg = default_registry();
        let p = parse_params(&["n=1".into()]).unwrap();
        let err = match reg.build("cn", &p) {
            Err(e) => e,
            Ok(_) => panic!("build should fail without mu1"),
        };
        assert!(err.to_string().contains("mu1"));
    }
}
