//! Reinhardt shadows: the modulus-space images of Reinhardt domains.
//!
//! The shadow is the effective integration domain for every moment integral.
//! For the analytic families the per-axis section bounds are explicit, which
//! lets the nested quadrature driver restrict each variable's limits
//! analytically instead of rejecting points. Membership is strict (`<`)
//! everywhere: the domains are open.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub type MembershipFn = Arc<dyn Fn(&[f64]) -> bool + Send + Sync>;

/// Upper integration limit of one axis, given the outer coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AxisBound {
    Bounded(f64),
    Unbounded,
}

#[derive(Clone)]
pub struct ShadowRegion {
    arity: usize,
    kind: ShadowKind,
}

#[derive(Clone)]
pub enum ShadowKind {
    /// All of R_+^n (the shadow of C^n).
    PositiveOrthant,
    /// ||r|| < radius.
    Ball { radius: f64 },
    /// ||rho||^2 < exp(-mu1 * ||r||^mu2); axes (r_1..r_base, rho_1..rho_fiber).
    Hartogs {
        base: usize,
        fiber: usize,
        mu1: f64,
        mu2: f64,
    },
    /// sum_j exp(eta_j rho^2) r_j^2 + ||r'||^2 < 1; axes (r, r', rho).
    VEta {
        base: usize,
        middle: usize,
        eta: Vec<f64>,
    },
    /// The box prod [0, upper_j).
    Box { upper: Vec<f64> },
    /// Arbitrary region described by a membership predicate plus per-axis
    /// bounding intervals (None = unbounded axis).
    Custom {
        bounding: Vec<Option<f64>>,
        membership: MembershipFn,
    },
}

impl ShadowRegion {
    pub fn positive_orthant(arity: usize) -> Self {
        Self {
            arity,
            kind: ShadowKind::PositiveOrthant,
        }
    }

    pub fn ball(arity: usize, radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "ball radius must be positive, got {radius}"
            )));
        }
        Ok(Self {
            arity,
            kind: ShadowKind::Ball { radius },
        })
    }

    pub fn hartogs(base: usize, fiber: usize, mu1: f64, mu2: f64) -> Result<Self> {
        if !(mu1 > 0.0) || !(mu2 > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "Hartogs shadow needs mu1 > 0 and mu2 > 0, got mu1={mu1}, mu2={mu2}"
            )));
        }
        Ok(Self {
            arity: base + fiber,
            kind: ShadowKind::Hartogs {
                base,
                fiber,
                mu1,
                mu2,
            },
        })
    }

    pub fn veta(base: usize, middle: usize, eta: Vec<f64>) -> Result<Self> {
        if eta.len() != base {
            return Err(Error::ArityMismatch {
                expected: base,
                got: eta.len(),
            });
        }
        if eta.iter().any(|&e| !(e > 0.0)) {
            return Err(Error::InvalidParameter(format!(
                "V_eta shadow needs every eta_j > 0, got {eta:?}"
            )));
        }
        Ok(Self {
            arity: base + middle + 1,
            kind: ShadowKind::VEta { base, middle, eta },
        })
    }

    pub fn boxed(upper: Vec<f64>) -> Result<Self> {
        if upper.iter().any(|&u| !(u > 0.0) || !u.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "box bounds must be positive and finite, got {upper:?}"
            )));
        }
        Ok(Self {
            arity: upper.len(),
            kind: ShadowKind::Box { upper },
        })
    }

    pub fn custom(bounding: Vec<Option<f64>>, membership: MembershipFn) -> Self {
        Self {
            arity: bounding.len(),
            kind: ShadowKind::Custom {
                bounding,
                membership,
            },
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn kind(&self) -> &ShadowKind {
        &self.kind
    }

    /// Strict membership test. Rejects tuples of the wrong length and
    /// errors on negative coordinates (shadow coordinates are moduli).
    pub fn contains(&self, r: &[f64]) -> Result<bool> {
        if r.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                got: r.len(),
            });
        }
        for (axis, &x) in r.iter().enumerate() {
            if x < 0.0 {
                return Err(Error::NegativeCoordinate { axis, value: x });
            }
        }
        Ok(match &self.kind {
            ShadowKind::PositiveOrthant => true,
            ShadowKind::Ball { radius } => {
                r.iter().map(|x| x * x).sum::<f64>() < radius * radius
            }
            ShadowKind::Hartogs {
                base,
                fiber: _,
                mu1,
                mu2,
            } => {
                let rn = r[..*base].iter().map(|x| x * x).sum::<f64>().sqrt();
                let rho_sq: f64 = r[*base..].iter().map(|x| x * x).sum();
                rho_sq < (-mu1 * rn.powf(*mu2)).exp()
            }
            ShadowKind::VEta { base, middle, eta } => {
                let rho_sq = r[base + middle] * r[base + middle];
                let mut s = 0.0;
                for j in 0..*base {
                    s += (eta[j] * rho_sq).exp() * r[j] * r[j];
                }
                for x in &r[*base..base + middle] {
                    s += x * x;
                }
                s < 1.0
            }
            ShadowKind::Box { upper } => r.iter().zip(upper).all(|(x, u)| x < u),
            ShadowKind::Custom { membership, .. } => membership(r),
        })
    }

    /// Axis order for nested integration, outermost first. Axes whose
    /// section bounds depend on other coordinates come after the axes they
    /// depend on.
    pub fn integration_order(&self) -> Vec<usize> {
        match &self.kind {
            ShadowKind::VEta { base, middle, .. } => {
                // rho is unbounded and controls the ellipsoid section
                let mut order = vec![base + middle];
                order.extend(0..base + middle);
                order
            }
            _ => (0..self.arity).collect(),
        }
    }

    /// The upper integration limit of `axis` given the coordinates already
    /// fixed by outer integration levels (entries of `partial` are NaN when
    /// not yet fixed). For the analytic kinds these are the exact section
    /// bounds; for Custom it is the bounding interval and membership is
    /// handled by indicator rejection.
    pub fn axis_bound(&self, axis: usize, partial: &[f64]) -> AxisBound {
        match &self.kind {
            ShadowKind::PositiveOrthant => AxisBound::Unbounded,
            ShadowKind::Ball { radius } => {
                let used: f64 = partial
                    .iter()
                    .take(axis)
                    .map(|x| x * x)
                    .sum();
                AxisBound::Bounded((radius * radius - used).max(0.0).sqrt())
            }
            ShadowKind::Hartogs {
                base,
                fiber: _,
                mu1,
                mu2,
            } => {
                if axis < *base {
                    AxisBound::Unbounded
                } else {
                    let rn = partial[..*base].iter().map(|x| x * x).sum::<f64>().sqrt();
                    let cap = (-mu1 * rn.powf(*mu2)).exp();
                    let used: f64 = partial[*base..axis].iter().map(|x| x * x).sum();
                    AxisBound::Bounded((cap - used).max(0.0).sqrt())
                }
            }
            ShadowKind::VEta { base, middle, eta } => {
                let rho_axis = base + middle;
                if axis == rho_axis {
                    return AxisBound::Unbounded;
                }
                let rho_sq = partial[rho_axis] * partial[rho_axis];
                let mut used = 0.0;
                for j in 0..*base {
                    if j != axis && !partial[j].is_nan() && j < axis {
                        used += (eta[j] * rho_sq).exp() * partial[j] * partial[j];
                    }
                }
                for j in *base..base + middle {
                    if j != axis && j < axis {
                        used += partial[j] * partial[j];
                    }
                }
                let room = (1.0 - used).max(0.0);
                if axis < *base {
                    AxisBound::Bounded((room / (eta[axis] * rho_sq).exp()).sqrt())
                } else {
                    AxisBound::Bounded(room.sqrt())
                }
            }
            ShadowKind::Box { upper } => AxisBound::Bounded(upper[axis]),
            ShadowKind::Custom { bounding, .. } => match bounding[axis] {
                Some(u) => AxisBound::Bounded(u),
                None => AxisBound::Unbounded,
            },
        }
    }

    /// Whether the quadrature driver must multiply the integrand by the
    /// membership indicator (only for Custom regions, where axis bounds are
    /// merely bounding intervals).
    pub fn needs_indicator(&self) -> bool {
        matches!(self.kind, ShadowKind::Custom { .. })
    }

    /// True when the axis bound is a ball-type section radius, i.e. the
    /// region locally looks like x^2 < bound^2 - (used). Weights of the
    /// form (bound^2 - x^2)^p then have an endpoint derivative singularity
    /// that the substitution x = bound * sin(theta) removes.
    pub fn axis_is_ball_section(&self, axis: usize) -> bool {
        match &self.kind {
            ShadowKind::Ball { .. } => true,
            ShadowKind::Hartogs { base, .. } => axis >= *base,
            ShadowKind::VEta { base, middle, .. } => axis < base + middle,
            _ => false,
        }
    }

    pub fn describe(&self) -> serde_json::Value {
        match &self.kind {
            ShadowKind::PositiveOrthant => serde_json::json!({
                "kind": "positive_orthant", "arity": self.arity,
            }),
            ShadowKind::Ball { radius } => serde_json::json!({
                "kind": "ball", "arity": self.arity, "radius": radius,
            }),
            ShadowKind::Hartogs {
                base,
                fiber,
                mu1,
                mu2,
            } => serde_json::json!({
                "kind": "hartogs", "base": base, "fiber": fiber, "mu1": mu1, "mu2": mu2,
            }),
            ShadowKind::VEta { base, middle, eta } => serde_json::json!({
                "kind": "veta", "base": base, "middle": middle, "eta": eta,
            }),
            ShadowKind::Box { upper } => serde_json::json!({
                "kind": "box", "upper": upper,
            }),
            ShadowKind::Custom { bounding, .. } => serde_json::json!({
                "kind": "custom", "bounding": bounding,
            }),
        }
    }
}

impl fmt::Debug for ShadowRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn hartogs_origin_is_interior() {
        let s = ShadowRegion::hartogs(1, 1, 1.0, 2.0).unwrap();
        assert!(s.contains(&[0.0, 0.0]).unwrap());
    }

    #[test]
    fn hartogs_rejects_large_fiber() {
        // 1.5^2 = 2.25 >= e^0 = 1
        let s = ShadowRegion::hartogs(1, 1, 1.0, 2.0).unwrap();
        assert!(!s.contains(&[0.0, 1.5]).unwrap());
    }

    #[test]
    fn veta_sample_point() {
        // e^0 * 0.25 + 0.25 = 0.5 < 1
        let s = ShadowRegion::veta(1, 1, vec![1.0]).unwrap();
        assert!(s.contains(&[0.5, 0.5, 0.0]).unwrap());
        assert!(!s.contains(&[1.0, 0.1, 0.0]).unwrap());
    }

    #[test]
    fn negative_coordinate_is_an_error() {
        let s = ShadowRegion::ball(2, 1.0).unwrap();
        assert!(matches!(
            s.contains(&[0.5, -0.1]),
            Err(Error::NegativeCoordinate { axis: 1, .. })
        ));
    }

    #[test]
    fn arity_mismatch_is_an_error() {
        let s = ShadowRegion::ball(2, 1.0).unwrap();
        assert!(s.contains(&[0.5]).is_err());
    }

    #[test]
    fn boundary_is_excluded() {
        let s = ShadowRegion::ball(1, 1.0).unwrap();
        assert!(!s.contains(&[1.0]).unwrap());
        let b = ShadowRegion::boxed(vec![1.0]).unwrap();
        assert!(!b.contains(&[1.0]).unwrap());
    }

    /// Scaling any coordinate of a member point toward zero keeps it inside
    /// (sampled monotonicity check for the analytic families).
    #[test]
    fn shadows_are_monotone_under_shrinking() {
        let regions: Vec<ShadowRegion> = vec![
            ShadowRegion::positive_orthant(2),
            ShadowRegion::ball(3, 1.0).unwrap(),
            ShadowRegion::hartogs(2, 1, 0.7, 1.5).unwrap(),
            ShadowRegion::veta(2, 1, vec![0.5, 2.0]).unwrap(),
        ];
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for region in &regions {
            let n = region.arity();
            let mut found = 0;
            while found < 50 {
                let r: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..1.5)).collect();
                if !region.contains(&r).unwrap() {
                    continue;
                }
                found += 1;
                let s: Vec<f64> = r
                    .iter()
                    .map(|&x| x * rng.random_range(0.0..1.0))
                    .collect();
                assert!(
                    region.contains(&s).unwrap(),
                    "shrunk point {s:?} left {region:?} (from {r:?})"
                );
            }
        }
    }

    #[test]
    fn section_bounds_match_membership() {
        // points slightly inside the reported bound are members; slightly
        // outside are not
        let s = ShadowRegion::hartogs(1, 2, 1.0, 2.0).unwrap();
        let partial = [0.7, 0.3, f64::NAN];
        if let AxisBound::Bounded(b) = s.axis_bound(2, &partial) {
            assert!(s.contains(&[0.7, 0.3, b * 0.999]).unwrap());
            assert!(!s.contains(&[0.7, 0.3, b * 1.001]).unwrap());
        } else {
            panic!("fiber axis should be bounded");
        }

        let v = ShadowRegion::veta(1, 1, vec![1.3]).unwrap();
        // integration order: rho (axis 2) first, then r, then r'
        assert_eq!(v.integration_order(), vec![2, 0, 1]);
        let partial = [0.4, f64::NAN, 0.8];
        if let AxisBound::Bounded(b) = v.axis_bound(1, &partial) {
            assert!(v.contains(&[0.4, b * 0.999, 0.8]).unwrap());
            assert!(!v.contains(&[0.4, b * 1.001, 0.8]).unwrap());
        } else {
            panic!("middle axis should be bounded");
        }
    }
}
