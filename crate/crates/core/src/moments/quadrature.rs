//! Adaptive nested Gauss-Legendre quadrature over Reinhardt shadows.
//!
//! Each axis is integrated by an adaptive 1-D rule (paired 7/15-point
//! Gauss-Legendre panels, bisection driven by the two-level difference).
//! The analytic shadow kinds expose exact per-axis section bounds, so the
//! driver never rejects points for them; Custom shadows integrate over the
//! bounding box with the membership indicator folded into the integrand and
//! panel subdivision resolving the discontinuity.
//!
//! Unbounded axes are mapped to [0, 1) by r = t / (1 - t) with Jacobian
//! (1 - t)^{-2}.
//!
//! The integrand is handled in shifted log scale: a coarse probe grid finds
//! the rough maximum of the log integrand first so that high monomial
//! degrees cannot overflow the linear arithmetic inside the panels.

use std::cell::Cell;
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::index::MultiIndex;
use crate::shadow::{AxisBound, ShadowRegion};
use crate::weight::RadialWeight;

/// Knobs of the adaptive scheme. The defaults are sized for desk-scale
/// moments (arity <= 4, |alpha| <= ~200).
#[derive(Clone, Debug)]
pub struct QuadratureOptions {
    /// Panel budget per 1-D integral.
    pub max_panels: usize,
    /// Total integrand-evaluation budget per moment.
    pub eval_budget: u64,
    /// Probe-grid resolution per axis for the log-scale estimate.
    pub probe_points: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self {
            max_panels: 400,
            eval_budget: 200_000_000,
            probe_points: 8,
        }
    }
}

/// A quadrature moment: ln I(alpha) plus error information.
#[derive(Clone, Copy, Debug)]
pub struct QuadMoment {
    pub log_value: f64,
    /// Estimated relative error of the value.
    pub rel_error: f64,
    /// Estimated absolute error of exp(log_value), clamped to f64::MAX.
    pub abs_error: f64,
    /// Number of integrand evaluations spent.
    pub evals: u64,
}

pub(crate) fn validate_rel_tol(rel_tol: f64) -> Result<()> {
    if !(rel_tol > 1e-12 && rel_tol < 1e-2) {
        return Err(Error::InvalidParameter(format!(
            "quadrature rel_tol must lie in (1e-12, 1e-2), got {rel_tol:e}"
        )));
    }
    Ok(())
}

/// Numerically evaluates I(alpha) = (2 pi)^n * integral over the shadow of
/// r^{2 alpha + 1} phi(r) dr by nested adaptive quadrature.
pub fn moment_quadrature(
    shadow: &ShadowRegion,
    weight: &RadialWeight,
    alpha: &MultiIndex,
    rel_tol: f64,
    options: &QuadratureOptions,
) -> Result<QuadMoment> {
    validate_rel_tol(rel_tol)?;
    let n = alpha.len();
    if shadow.arity() != n || weight.arity() != n {
        return Err(Error::ArityMismatch {
            expected: n,
            got: shadow.arity().min(weight.arity()),
        });
    }

    let exponents: Vec<f64> = alpha
        .entries()
        .iter()
        .map(|&e| 2.0 * e as f64 + 1.0)
        .collect();
    let log_integrand = move |r: &[f64]| -> f64 {
        let mut g = weight.log_eval(r);
        for (x, p) in r.iter().zip(&exponents) {
            g += p * x.ln();
        }
        g
    };

    let driver = NestedQuad {
        shadow,
        order: shadow.integration_order(),
        log_integrand: &log_integrand,
        scale: 0.0,
        base_rel_tol: rel_tol,
        sine_on_sections: fractional_section_power(weight),
        options,
        evals: Cell::new(0),
        exhausted: Cell::new(false),
    };

    let scale = driver.probe_scale();
    if scale == f64::NEG_INFINITY {
        return Err(Error::InvalidParameter(
            "integrand vanishes on the probe grid; shadow appears empty".into(),
        ));
    }
    let driver = NestedQuad { scale, ..driver };

    let mut point = vec![f64::NAN; n];
    let (value, err) = driver.level(0, &mut point);
    let evals = driver.evals.get();

    if !(value > 0.0) || !value.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "quadrature produced non-positive value {value:e}; the moment integrand must be positive"
        )));
    }
    let rel_error = err / value;
    let log_value = value.ln() + driver.scale + n as f64 * (2.0 * PI).ln();
    if driver.exhausted.get() && rel_error > rel_tol {
        return Err(Error::QuadratureBudget {
            context: format!("moment {alpha}"),
            log_value,
            rel_error,
            evals,
        });
    }
    let abs = rel_error * log_value.exp();
    Ok(QuadMoment {
        log_value,
        rel_error,
        abs_error: if abs.is_finite() { abs } else { f64::MAX },
        evals,
    })
}

/// Whether the weight raises a section expression (cap - ||x||^2) to a
/// non-integer power, i.e. has an endpoint derivative singularity on
/// ball-section axes. Integer powers keep the integrand polynomial there,
/// where plain Gauss-Legendre is exact.
fn fractional_section_power(weight: &RadialWeight) -> bool {
    use crate::weight::WeightKind;
    match weight.kind() {
        WeightKind::HartogsPower { eta, .. } => eta.fract() != 0.0 || *eta < 0.0,
        WeightKind::VEtaPower { a, .. } => a.fract() != 0.0 || *a < 0.0,
        WeightKind::ExpPower { .. } | WeightKind::One => false,
        WeightKind::Custom(_) => true,
    }
}

struct NestedQuad<'a> {
    shadow: &'a ShadowRegion,
    order: Vec<usize>,
    log_integrand: &'a dyn Fn(&[f64]) -> f64,
    scale: f64,
    base_rel_tol: f64,
    sine_on_sections: bool,
    options: &'a QuadratureOptions,
    evals: Cell<u64>,
    exhausted: Cell<bool>,
}

impl NestedQuad<'_> {
    /// Relative target of the 1-D integral at nesting depth `level`.
    ///
    /// Inner levels run tighter so the error they pass up stays well below
    /// the enclosing level's own target; each panel's estimate combines the
    /// two-rule difference with the inherited inner estimates, so the
    /// outermost exit test bounds the total.
    fn tol_for(&self, level: usize) -> f64 {
        0.5 * self.base_rel_tol * 0.15f64.powi(level as i32)
    }
    /// Coarse recursive sweep to locate the magnitude of the integrand; the
    /// result only has to be within a few hundred e-folds of the true
    /// maximum, so a small grid per axis is plenty.
    fn probe_scale(&self) -> f64 {
        let mut point = vec![f64::NAN; self.shadow.arity()];
        self.probe_level(0, &mut point)
    }

    fn probe_level(&self, level: usize, point: &mut Vec<f64>) -> f64 {
        let k = self.options.probe_points;
        let axis = self.order[level];
        let mut best = f64::NEG_INFINITY;
        for i in 0..k {
            let frac = (i as f64 + 0.5) / k as f64;
            let x = match self.shadow.axis_bound(axis, point) {
                AxisBound::Bounded(b) => {
                    if b <= 0.0 {
                        continue;
                    }
                    b * frac
                }
                AxisBound::Unbounded => frac / (1.0 - frac),
            };
            point[axis] = x;
            let v = if level + 1 == self.order.len() {
                if self.shadow.needs_indicator()
                    && !self.shadow.contains(point).unwrap_or(false)
                {
                    f64::NEG_INFINITY
                } else {
                    (self.log_integrand)(point)
                }
            } else {
                self.probe_level(level + 1, point)
            };
            if v > best {
                best = v;
            }
        }
        point[axis] = f64::NAN;
        best
    }

    /// Integrates out the axis at `level`, returning (value, error estimate)
    /// in the shifted scale. The error estimate combines this axis's
    /// two-level differences with the inherited inner-level estimates.
    ///
    /// Ball-section axes are integrated in the angle of x = b sin(theta):
    /// weights (b^2 - x^2)^p become smooth cos^{2p} factors instead of
    /// endpoint singularities, which keeps the panel counts flat across
    /// the nesting.
    fn level(&self, level: usize, point: &mut Vec<f64>) -> (f64, f64) {
        let axis = self.order[level];
        let result = match self.shadow.axis_bound(axis, point) {
            AxisBound::Bounded(b) if b <= 0.0 => (0.0, 0.0),
            AxisBound::Bounded(b) => {
                if self.sine_on_sections && self.shadow.axis_is_ball_section(axis) {
                    self.adapt_1d(
                        level,
                        point,
                        axis,
                        0.0,
                        std::f64::consts::FRAC_PI_2,
                        AxisMap::Sine { radius: b },
                    )
                } else {
                    self.adapt_1d(level, point, axis, 0.0, b, AxisMap::Identity)
                }
            }
            AxisBound::Unbounded => self.adapt_1d(level, point, axis, 0.0, 1.0, AxisMap::Rational),
        };
        point[axis] = f64::NAN;
        result
    }

    fn eval_inner(
        &self,
        level: usize,
        point: &mut Vec<f64>,
        axis: usize,
        x: f64,
        map: AxisMap,
    ) -> (f64, f64) {
        let (coord, jacobian) = match map {
            AxisMap::Identity => (x, 1.0),
            AxisMap::Rational => {
                let denom = 1.0 - x;
                (x / denom, 1.0 / (denom * denom))
            }
            AxisMap::Sine { radius } => (radius * x.sin(), radius * x.cos()),
        };
        point[axis] = coord;
        if level + 1 == self.order.len() {
            self.evals.set(self.evals.get() + 1);
            if self.shadow.needs_indicator() && !self.shadow.contains(point).unwrap_or(false) {
                return (0.0, 0.0);
            }
            let g = (self.log_integrand)(point) - self.scale;
            ((g.exp()) * jacobian, 0.0)
        } else {
            let (v, e) = self.level(level + 1, point);
            (v * jacobian, e * jacobian)
        }
    }

    fn adapt_1d(
        &self,
        level: usize,
        point: &mut Vec<f64>,
        axis: usize,
        a: f64,
        b: f64,
        map: AxisMap,
    ) -> (f64, f64) {
        let mut heap: BinaryHeap<Panel> = BinaryHeap::new();
        let mid = 0.5 * (a + b);
        heap.push(self.make_panel(level, point, axis, a, mid, map));
        heap.push(self.make_panel(level, point, axis, mid, b, map));

        let tol = self.tol_for(level);
        loop {
            let total: f64 = heap.iter().map(|p| p.value).sum();
            let err: f64 = heap.iter().map(|p| p.error).sum();
            if err <= tol * total.abs().max(1e-300) {
                return (total, err);
            }
            if heap.len() >= self.options.max_panels
                || self.evals.get() >= self.options.eval_budget
            {
                self.exhausted.set(true);
                return (total, err);
            }
            let worst = heap.pop().expect("heap is never empty here");
            let m = 0.5 * (worst.a + worst.b);
            if m <= worst.a || m >= worst.b {
                // interval at floating-point resolution; keep it as is
                let mut p = worst;
                p.error = 0.0;
                heap.push(p);
                continue;
            }
            heap.push(self.make_panel(level, point, axis, worst.a, m, map));
            heap.push(self.make_panel(level, point, axis, m, worst.b, map));
        }
    }

    fn make_panel(
        &self,
        level: usize,
        point: &mut Vec<f64>,
        axis: usize,
        a: f64,
        b: f64,
        map: AxisMap,
    ) -> Panel {
        let half = 0.5 * (b - a);
        let center = 0.5 * (a + b);
        let mut low = 0.0;
        let mut high = 0.0;
        let mut inner_err = 0.0;
        for &(x, w) in gl_rule(GL_LOW) {
            let (v, _) = self.eval_inner(level, point, axis, center + half * x, map);
            low += w * v;
        }
        for &(x, w) in gl_rule(GL_HIGH) {
            let (v, e) = self.eval_inner(level, point, axis, center + half * x, map);
            high += w * v;
            inner_err += w * e;
        }
        low *= half;
        high *= half;
        inner_err *= half;
        Panel {
            a,
            b,
            value: high,
            error: (high - low).abs() + inner_err,
        }
    }
}

/// Coordinate map of one integration axis.
#[derive(Clone, Copy)]
enum AxisMap {
    /// x itself, on [0, b].
    Identity,
    /// r = x / (1 - x) on x in [0, 1), for unbounded axes.
    Rational,
    /// r = radius * sin(x) on x in [0, pi/2], for ball-section axes.
    Sine { radius: f64 },
}

#[derive(Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

const GL_LOW: usize = 7;
const GL_HIGH: usize = 15;

fn gl_rule(order: usize) -> &'static [(f64, f64)] {
    static LOW: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    static HIGH: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    match order {
        GL_LOW => LOW.get_or_init(|| gauss_legendre(GL_LOW)),
        GL_HIGH => HIGH.get_or_init(|| gauss_legendre(GL_HIGH)),
        _ => unreachable!("only the paired rules are used"),
    }
}

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1], by
/// Newton iteration on the Legendre recurrence.
fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-15 * x.abs().max(1.0) {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                x -= p / d;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((x, w));
    }
    out
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}
