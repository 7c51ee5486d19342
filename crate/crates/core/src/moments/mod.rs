//! Moment integrals I(alpha) = (2 pi)^n * integral over the shadow of
//! r^{2 alpha + 1} phi(r) dr.
//!
//! The reciprocal of I(alpha) is the series coefficient of the kernel, so
//! everything here is kept in log space: Gamma(|alpha| + n) alone overflows
//! an f64 near |alpha| + n = 170 while the kernel still converges fine at
//! such degrees.
//!
//! Closed forms are provided for the analytic families; everything else
//! goes through adaptive quadrature ([`quadrature`]).

pub mod closed;
pub mod quadrature;

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index::{indices_up_to, MultiIndex};
use crate::shadow::ShadowRegion;
use crate::weight::RadialWeight;

pub use closed::{
    ball_log_moment, cn_log_moment, dnm_log_moment, sphere_monomial_log_integral,
    veta_log_moment,
};
pub use quadrature::{moment_quadrature, QuadMoment, QuadratureOptions};

/// How a stored moment value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentMethod {
    ClosedForm,
    Quadrature,
}

#[derive(Clone, Copy, Debug)]
pub struct MomentEntry {
    pub log_value: f64,
    pub method: MomentMethod,
    /// Estimated absolute error of exp(log_value); clamped to f64::MAX when
    /// the value itself is not representable linearly.
    pub abs_error_estimate: f64,
    /// Estimated relative error (what refinement decisions use).
    pub rel_error: f64,
}

impl MomentEntry {
    fn from_rel(log_value: f64, method: MomentMethod, rel_error: f64) -> Self {
        let abs = rel_error * log_value.exp();
        Self {
            log_value,
            method,
            abs_error_estimate: if abs.is_finite() { abs } else { f64::MAX },
            rel_error,
        }
    }
}

/// Closed-form moment formula of one weighted family.
pub trait ClosedMomentSource: Send + Sync {
    fn log_moment(&self, idx: &MultiIndex) -> Result<f64>;
}

impl<F> ClosedMomentSource for F
where
    F: Fn(&MultiIndex) -> Result<f64> + Send + Sync,
{
    fn log_moment(&self, idx: &MultiIndex) -> Result<f64> {
        self(idx)
    }
}

#[derive(Clone)]
enum MomentBackend {
    Closed(Arc<dyn ClosedMomentSource>),
    Quadrature { rel_tol: f64 },
}

/// Memoized map from multi-indices to moments for one (weight, shadow) pair.
///
/// Lookups compute missing entries on demand through the configured backend.
/// Entries are replaced when recomputed at a tighter tolerance. The cache is
/// internally synchronized; concurrent lookups of the same index may both
/// compute, and last-writer-wins is fine because the values agree within
/// tolerance.
pub struct MomentTable {
    weight: RadialWeight,
    shadow: ShadowRegion,
    backend: MomentBackend,
    cache: Mutex<BTreeMap<MultiIndex, MomentEntry>>,
}

/// Default tolerance for quadrature moments cross-checked against closed
/// forms.
pub const DEFAULT_CLOSED_CHECK_TOL: f64 = 1e-9;
/// Default tolerance for quadrature moments of custom weights.
pub const DEFAULT_CUSTOM_TOL: f64 = 1e-6;

impl MomentTable {
    pub fn with_closed_form(
        weight: RadialWeight,
        shadow: ShadowRegion,
        source: Arc<dyn ClosedMomentSource>,
    ) -> Self {
        assert_eq!(weight.arity(), shadow.arity());
        Self {
            weight,
            shadow,
            backend: MomentBackend::Closed(source),
            cache: Mutex::new(BTreeMap::new()),
        }
    }

    pub fn with_quadrature(
        weight: RadialWeight,
        shadow: ShadowRegion,
        rel_tol: f64,
    ) -> Result<Self> {
        if weight.arity() != shadow.arity() {
            return Err(Error::ArityMismatch {
                expected: weight.arity(),
                got: shadow.arity(),
            });
        }
        quadrature::validate_rel_tol(rel_tol)?;
        Ok(Self {
            weight,
            shadow,
            backend: MomentBackend::Quadrature { rel_tol },
            cache: Mutex::new(BTreeMap::new()),
        })
    }

    pub fn arity(&self) -> usize {
        self.weight.arity()
    }

    pub fn weight(&self) -> &RadialWeight {
        &self.weight
    }

    pub fn shadow(&self) -> &ShadowRegion {
        &self.shadow
    }

    pub fn is_closed_form(&self) -> bool {
        matches!(self.backend, MomentBackend::Closed(_))
    }

    /// The memoized entry for `idx`, computing it if absent.
    pub fn entry(&self, idx: &MultiIndex) -> Result<MomentEntry> {
        if idx.len() != self.arity() {
            return Err(Error::ArityMismatch {
                expected: self.arity(),
                got: idx.len(),
            });
        }
        if let Some(e) = self.cache.lock().unwrap().get(idx) {
            return Ok(*e);
        }
        let entry = self.compute(idx, None)?;
        self.cache.lock().unwrap().insert(idx.clone(), entry);
        Ok(entry)
    }

    /// ln I(idx), the quantity series evaluation needs.
    pub fn log_moment(&self, idx: &MultiIndex) -> Result<f64> {
        Ok(self.entry(idx)?.log_value)
    }

    /// Recomputes the entry if the cached one (if any) is looser than
    /// `rel_tol`, replacing it. Closed-form entries are never recomputed.
    pub fn refine(&self, idx: &MultiIndex, rel_tol: f64) -> Result<MomentEntry> {
        let current = self.entry(idx)?;
        if current.method == MomentMethod::ClosedForm || current.rel_error <= rel_tol {
            return Ok(current);
        }
        let entry = self.compute(idx, Some(rel_tol))?;
        self.cache.lock().unwrap().insert(idx.clone(), entry);
        Ok(entry)
    }

    fn compute(&self, idx: &MultiIndex, tol_override: Option<f64>) -> Result<MomentEntry> {
        match &self.backend {
            MomentBackend::Closed(source) => {
                let log_value = source.log_moment(idx)?;
                // closed forms are exact up to log-Gamma rounding
                Ok(MomentEntry::from_rel(
                    log_value,
                    MomentMethod::ClosedForm,
                    1e-13,
                ))
            }
            MomentBackend::Quadrature { rel_tol } => {
                let tol = tol_override.unwrap_or(*rel_tol);
                let q = moment_quadrature(
                    &self.shadow,
                    &self.weight,
                    idx,
                    tol,
                    &QuadratureOptions::default(),
                )?;
                Ok(MomentEntry::from_rel(
                    q.log_value,
                    MomentMethod::Quadrature,
                    q.rel_error,
                ))
            }
        }
    }

    /// Computes every moment of degree <= max_degree.
    pub fn fill_up_to(&self, max_degree: u32) -> Result<()> {
        for idx in indices_up_to(self.arity(), max_degree) {
            self.entry(&idx)?;
        }
        Ok(())
    }

    /// Sorted snapshot of the cached entries (graded-lex by index).
    pub fn snapshot(&self) -> Vec<(MultiIndex, MomentEntry)> {
        self.cache
            .lock()
            .unwrap()
            .iter()
            .map(|(k, v)| (k.clone(), *v))
            .collect()
    }

    /// Serializes weight/shadow descriptors plus all cached entries.
    pub fn to_json(&self) -> serde_json::Value {
        let entries: Vec<serde_json::Value> = self
            .snapshot()
            .into_iter()
            .map(|(idx, e)| {
                serde_json::json!({
                    "alpha": idx.entries(),
                    "log_value": e.log_value,
                    "method": match e.method {
                        MomentMethod::ClosedForm => "closed_form",
                        MomentMethod::Quadrature => "quadrature",
                    },
                    "abs_error_estimate": e.abs_error_estimate,
                })
            })
            .collect();
        serde_json::json!({
            "weight": self.weight.describe(),
            "shadow": self.shadow.describe(),
            "entries": entries,
        })
    }
}
