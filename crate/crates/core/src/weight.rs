//! Radial weight functions.
//!
//! A weight here is a positive function of the coordinate moduli
//! (r_1, ..., r_n) only. The three analytic kinds mirror the kernel
//! families; `Custom` accepts any positive function. Evaluation is offered
//! in log space because moment integrands combine the weight with high
//! monomial powers.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub type WeightFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

#[derive(Clone)]
pub struct RadialWeight {
    arity: usize,
    kind: WeightKind,
}

#[derive(Clone)]
pub enum WeightKind {
    /// exp(-mu1 * ||r||^mu2) on all of R_+^n.
    ExpPower { mu1: f64, mu2: f64 },
    /// (exp(-mu1 * ||r||^mu2) - ||rho||^2)^eta, with r the first `base`
    /// axes and rho the remaining `fiber` axes.
    HartogsPower {
        base: usize,
        fiber: usize,
        mu1: f64,
        mu2: f64,
        eta: f64,
    },
    /// (1 - sum_j exp(eta_j * rho^2) r_j^2 - ||r'||^2)^a, with axes ordered
    /// (r_1..r_base, r'_1..r'_middle, rho).
    VEtaPower {
        base: usize,
        middle: usize,
        eta: Vec<f64>,
        a: f64,
    },
    /// The constant weight 1 (plain Bergman space).
    One,
    /// Arbitrary positive function of the moduli.
    Custom(WeightFn),
}

impl RadialWeight {
    pub fn exp_power(arity: usize, mu1: f64, mu2: f64) -> Result<Self> {
        if !(mu1 > 0.0) || !(mu2 > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "exp-power weight needs mu1 > 0 and mu2 > 0, got mu1={mu1}, mu2={mu2}"
            )));
        }
        Ok(Self {
            arity,
            kind: WeightKind::ExpPower { mu1, mu2 },
        })
    }

    pub fn hartogs_power(base: usize, fiber: usize, mu1: f64, mu2: f64, eta: f64) -> Result<Self> {
        if !(mu1 > 0.0) || !(mu2 > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "Hartogs weight needs mu1 > 0 and mu2 > 0, got mu1={mu1}, mu2={mu2}"
            )));
        }
        if !(eta > -1.0) {
            return Err(Error::InvalidParameter(format!(
                "Hartogs weight needs eta > -1, got {eta}"
            )));
        }
        if base < 1 || fiber < 1 {
            return Err(Error::InvalidParameter(
                "Hartogs weight needs base >= 1 and fiber >= 1".into(),
            ));
        }
        Ok(Self {
            arity: base + fiber,
            kind: WeightKind::HartogsPower {
                base,
                fiber,
                mu1,
                mu2,
                eta,
            },
        })
    }

    pub fn veta_power(base: usize, middle: usize, eta: Vec<f64>, a: f64) -> Result<Self> {
        if eta.len() != base {
            return Err(Error::ArityMismatch {
                expected: base,
                got: eta.len(),
            });
        }
        if eta.iter().any(|&e| !(e > 0.0)) {
            return Err(Error::InvalidParameter(format!(
                "V_eta weight needs every eta_j > 0, got {eta:?}"
            )));
        }
        if !(a > -1.0) {
            return Err(Error::InvalidParameter(format!(
                "V_eta weight needs a > -1, got {a}"
            )));
        }
        if base < 1 || middle < 1 {
            return Err(Error::InvalidParameter(
                "V_eta weight needs base >= 1 and middle >= 1".into(),
            ));
        }
        Ok(Self {
            arity: base + middle + 1,
            kind: WeightKind::VEtaPower {
                base,
                middle,
                eta,
                a,
            },
        })
    }

    pub fn one(arity: usize) -> Self {
        Self {
            arity,
            kind: WeightKind::One,
        }
    }

    pub fn custom(arity: usize, f: WeightFn) -> Self {
        Self {
            arity,
            kind: WeightKind::Custom(f),
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn kind(&self) -> &WeightKind {
        &self.kind
    }

    /// ln(phi(r)). Returns -inf where the base of a power is nonpositive
    /// (i.e. outside the domain of the weighted family).
    pub fn log_eval(&self, r: &[f64]) -> f64 {
        debug_assert_eq!(r.len(), self.arity);
        match &self.kind {
            WeightKind::ExpPower { mu1, mu2 } => {
                let norm = r.iter().map(|x| x * x).sum::<f64>().sqrt();
                -mu1 * norm.powf(*mu2)
            }
            WeightKind::HartogsPower {
                base,
                fiber: _,
                mu1,
                mu2,
                eta,
            } => {
                let rn = r[..*base].iter().map(|x| x * x).sum::<f64>().sqrt();
                let rho_sq: f64 = r[*base..].iter().map(|x| x * x).sum();
                let phi = (-mu1 * rn.powf(*mu2)).exp() - rho_sq;
                if *eta == 0.0 {
                    0.0
                } else if phi > 0.0 {
                    eta * phi.ln()
                } else {
                    f64::NEG_INFINITY
                }
            }
            WeightKind::VEtaPower {
                base,
                middle,
                eta,
                a,
            } => {
                let rho = r[base + middle];
                let rho_sq = rho * rho;
                let mut s = 0.0;
                for j in 0..*base {
                    s += (eta[j] * rho_sq).exp() * r[j] * r[j];
                }
                for x in &r[*base..base + middle] {
                    s += x * x;
                }
                let phi = 1.0 - s;
                if *a == 0.0 {
                    0.0
                } else if phi > 0.0 {
                    a * phi.ln()
                } else {
                    f64::NEG_INFINITY
                }
            }
            WeightKind::One => 0.0,
            WeightKind::Custom(f) => {
                let v = f(r);
                if v > 0.0 {
                    v.ln()
                } else {
                    f64::NEG_INFINITY
                }
            }
        }
    }

    pub fn eval(&self, r: &[f64]) -> f64 {
        self.log_eval(r).exp()
    }

    /// JSON descriptor used when serializing moment tables.
    pub fn describe(&self) -> serde_json::Value {
        match &self.kind {
            WeightKind::ExpPower { mu1, mu2 } => serde_json::json!({
                "kind": "exp_power", "arity": self.arity, "mu1": mu1, "mu2": mu2,
            }),
            WeightKind::HartogsPower {
                base,
                fiber,
                mu1,
                mu2,
                eta,
            } => serde_json::json!({
                "kind": "hartogs_power", "base": base, "fiber": fiber,
                "mu1": mu1, "mu2": mu2, "eta": eta,
            }),
            WeightKind::VEtaPower {
                base,
                middle,
                eta,
                a,
            } => serde_json::json!({
                "kind": "veta_power", "base": base, "middle": middle, "eta": eta, "a": a,
            }),
            WeightKind::One => serde_json::json!({
                "kind": "one", "arity": self.arity,
            }),
            WeightKind::Custom(_) => serde_json::json!({
                "kind": "custom", "arity": self.arity,
            }),
        }
    }
}

impl fmt::Debug for RadialWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}
