//! The generalized Fock-Bargmann-Hartogs family: the domain
//! ||w||^2 < exp(-mu1 ||z||^mu2) in C^n x C^m with weight
//! (exp(-mu1 ||z||^mu2) - ||w||^2)^eta.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand::RngCore;

use crate::error::{Error, Result};
use crate::index::MultiIndex;
use crate::moments::dnm_log_moment;
use crate::point::ComplexPoint;
use crate::sampling::{sample_complex_ball_moduli, ShadowSampler, TabulatedRadial};
use crate::series::KernelValue;
use crate::shadow::ShadowRegion;
use crate::specfn::ln_gamma;
use crate::weight::RadialWeight;

use super::{sample_polydisc, KernelEvaluator, KernelFamily};

pub struct DnmFamily {
    n: usize,
    m: usize,
    mu1: f64,
    mu2: f64,
    eta: f64,
}

const MAX_OUTER: u32 = 3000;
const MAX_INNER: u32 = 3000;

/// ln Gamma(s + step) - ln Gamma(s), using the Gamma recurrence when the
/// step is an integer (the mu2 = 1 and mu2 = 2 loops) and log-Gamma calls
/// otherwise (fractional steps have no algebraic recurrence).
fn gamma_log_step(s: f64, step: f64) -> f64 {
    if step == 1.0 {
        s.ln()
    } else if step == 2.0 {
        (s * (s + 1.0)).ln()
    } else {
        ln_gamma(s + step) - ln_gamma(s)
    }
}

impl DnmFamily {
    pub fn new(n: usize, m: usize, mu1: f64, mu2: f64, eta: f64) -> Result<Self> {
        RadialWeight::hartogs_power(n.max(1), m.max(1), mu1, mu2, eta)?;
        if n < 1 || m < 1 {
            return Err(Error::InvalidParameter(
                "dnm family needs n >= 1 and m >= 1".into(),
            ));
        }
        Ok(Self {
            n,
            m,
            mu1,
            mu2,
            eta,
        })
    }

    fn check_point(&self, label: &str, p: &ComplexPoint) -> Result<()> {
        if !self.contains(p)? {
            return Err(Error::OutsideDomain(format!(
                "{label} = {p:?} violates ||w||^2 < exp(-mu1 ||z||^mu2)"
            )));
        }
        Ok(())
    }

    /// Inner series over the base index at a fixed fiber index:
    /// sum_{k1} Gamma(k1+n) lambda^{s1} u^{k1} / (k1! Gamma(s1)),
    /// with s1 = (2 k1 + 2n) / mu2. Entire in u.
    fn base_series(&self, lambda: f64, u: Complex64, rel_tol: f64) -> (Complex64, bool) {
        let n = self.n as f64;
        let step = 2.0 / self.mu2;
        let log_lambda = lambda.ln();
        let abs_u = u.norm();
        let phase_u = if abs_u > 0.0 {
            u / abs_u
        } else {
            Complex64::ZERO
        };

        // k1 = 0 term
        let s0 = 2.0 * n / self.mu2;
        let mut log_mag = ln_gamma(n) - ln_gamma(s0) + s0 * log_lambda;
        let mut phase = Complex64::ONE;
        let mut sum = Complex64::new(log_mag.exp(), 0.0);
        if phase_u == Complex64::ZERO {
            return (sum, true);
        }
        let mut quiet = 0u32;
        for k1 in 1..MAX_INNER {
            let prev = k1 as f64 - 1.0;
            let s_prev = (2.0 * prev + 2.0 * n) / self.mu2;
            log_mag += (prev + n).ln() - (prev + 1.0).ln() - gamma_log_step(s_prev, step)
                + step * log_lambda
                + abs_u.ln();
            phase *= phase_u;
            let term = log_mag.exp() * phase;
            sum += term;
            if term.norm() < rel_tol * sum.norm() {
                quiet += 1;
                if quiet >= 3 {
                    return (sum, true);
                }
            } else {
                quiet = 0;
            }
        }
        (sum, false)
    }

    /// The double series of the general parameter range, fiber index
    /// outermost. The fiber variable has Hartogs radius < 1 so the outer
    /// series is the geometrically convergent one; the inner base series is
    /// entire.
    pub fn eval_double_series(
        &self,
        x: &ComplexPoint,
        y: &ComplexPoint,
        rel_tol: f64,
    ) -> Result<KernelValue> {
        self.check_point("x", x)?;
        self.check_point("y", y)?;
        let (z, w) = x.split(self.n);
        let (s, t) = y.split(self.n);
        let u = z.hermitian(&s)?;
        let v = w.hermitian(&t)?;

        let n = self.n as f64;
        let m = self.m as f64;
        let prefactor_log =
            self.mu2.ln() - std::f64::consts::LN_2 - (n + m) * PI.ln() - ln_gamma(self.eta + 1.0);
        let abs_v = v.norm();
        let phase_v = if abs_v > 0.0 {
            v / abs_v
        } else {
            Complex64::ZERO
        };

        let mut sum = Complex64::ZERO;
        let mut quiet = 0u32;
        let mut fiber_used = 0u32;
        let mut last = 0.0f64;
        let mut all_converged = true;
        for k2 in 0..MAX_OUTER {
            if k2 > 0 && phase_v == Complex64::ZERO {
                // only the k2 = 0 block survives
                return Ok(KernelValue {
                    value: sum,
                    truncation_estimate: 0.0,
                    degree_used: 0,
                    converged: all_converged,
                });
            }
            let k2f = k2 as f64;
            let lambda = self.mu1 * (k2f + m + self.eta);
            let (inner, inner_ok) = self.base_series(lambda, u, rel_tol * 0.1);
            all_converged &= inner_ok;
            let log_c2 = prefactor_log + ln_gamma(k2f + m + self.eta + 1.0)
                - crate::specfn::ln_factorial(k2)
                + k2f * if abs_v > 0.0 { abs_v.ln() } else { 0.0 };
            let block = log_c2.exp()
                * inner
                * if k2 == 0 {
                    Complex64::ONE
                } else {
                    phase_v.powu(k2)
                };
            sum += block;
            last = block.norm();
            if last >= rel_tol * sum.norm() {
                fiber_used = k2;
                quiet = 0;
            } else {
                quiet += 1;
                if quiet >= 3 {
                    return Ok(KernelValue {
                        value: sum,
                        truncation_estimate: last,
                        degree_used: fiber_used,
                        converged: all_converged,
                    });
                }
            }
        }
        Ok(KernelValue {
            value: sum,
            truncation_estimate: last,
            degree_used: fiber_used,
            converged: false,
        })
    }

    /// mu2 = 2 route: the base series collapses to lambda^n exp(lambda u),
    /// leaving a single fiber series
    /// sum_{k2} Gamma(k2+m+eta+1) lambda^n e^{lambda u} v^{k2}
    ///          / (pi^{n+m} k2! Gamma(eta+1)).
    fn eval_fiber_series(&self, u: Complex64, v: Complex64, rel_tol: f64) -> KernelValue {
        let n = self.n as f64;
        let m = self.m as f64;
        let prefactor_log = -(n + m) * PI.ln() - ln_gamma(self.eta + 1.0);
        let abs_v = v.norm();
        let phase_v = if abs_v > 0.0 {
            v / abs_v
        } else {
            Complex64::ZERO
        };

        let mut sum = Complex64::ZERO;
        let mut quiet = 0u32;
        let mut fiber_used = 0u32;
        let mut last = 0.0f64;
        for k2 in 0..MAX_OUTER {
            if k2 > 0 && phase_v == Complex64::ZERO {
                return KernelValue {
                    value: sum,
                    truncation_estimate: 0.0,
                    degree_used: 0,
                    converged: true,
                };
            }
            let k2f = k2 as f64;
            let lambda = self.mu1 * (k2f + m + self.eta);
            let log_mag = prefactor_log + ln_gamma(k2f + m + self.eta + 1.0)
                - crate::specfn::ln_factorial(k2)
                + n * lambda.ln()
                + lambda * u.re
                + k2f * if abs_v > 0.0 { abs_v.ln() } else { 0.0 };
            let arg = lambda * u.im
                + if k2 > 0 {
                    k2f * phase_v.arg()
                } else {
                    0.0
                };
            let block = log_mag.exp() * Complex64::from_polar(1.0, arg);
            sum += block;
            last = block.norm();
            if last >= rel_tol * sum.norm() {
                fiber_used = k2;
                quiet = 0;
            } else {
                quiet += 1;
                if quiet >= 3 {
                    return KernelValue {
                        value: sum,
                        truncation_estimate: last,
                        degree_used: fiber_used,
                        converged: true,
                    };
                }
            }
        }
        KernelValue {
            value: sum,
            truncation_estimate: last,
            degree_used: fiber_used,
            converged: false,
        }
    }
}

impl KernelEvaluator for DnmFamily {
    fn arity(&self) -> usize {
        self.n + self.m
    }

    fn eval(&self, x: &ComplexPoint, y: &ComplexPoint, rel_tol: f64) -> Result<KernelValue> {
        if self.mu2 == 2.0 {
            self.check_point("x", x)?;
            self.check_point("y", y)?;
            let (z, w) = x.split(self.n);
            let (s, t) = y.split(self.n);
            let u = z.hermitian(&s)?;
            let v = w.hermitian(&t)?;
            Ok(self.eval_fiber_series(u, v, rel_tol))
        } else {
            self.eval_double_series(x, y, rel_tol)
        }
    }
}

impl KernelFamily for DnmFamily {
    fn name(&self) -> &'static str {
        "dnm"
    }

    fn describe(&self) -> String {
        format!(
            "dnm(n={}, m={}, mu1={}, mu2={}, eta={})",
            self.n, self.m, self.mu1, self.mu2, self.eta
        )
    }

    fn weight(&self) -> RadialWeight {
        RadialWeight::hartogs_power(self.n, self.m, self.mu1, self.mu2, self.eta)
            .expect("validated at construction")
    }

    fn shadow(&self) -> ShadowRegion {
        ShadowRegion::hartogs(self.n, self.m, self.mu1, self.mu2)
            .expect("validated at construction")
    }

    fn log_moment(&self, idx: &MultiIndex) -> Result<f64> {
        if idx.len() != self.n + self.m {
            return Err(Error::ArityMismatch {
                expected: self.n + self.m,
                got: idx.len(),
            });
        }
        let (alpha, beta) = idx.split(self.n);
        dnm_log_moment(&alpha, &beta, self.mu1, self.mu2, self.eta)
    }

    fn contains(&self, x: &ComplexPoint) -> Result<bool> {
        if x.len() != self.n + self.m {
            return Err(Error::ArityMismatch {
                expected: self.n + self.m,
                got: x.len(),
            });
        }
        let (z, w) = x.split(self.n);
        Ok(w.norm_sqr() < (-self.mu1 * z.norm_sqr().sqrt().powf(self.mu2)).exp())
    }

    fn boundary_slack(&self, x: &ComplexPoint) -> Result<f64> {
        if x.len() != self.n + self.m {
            return Err(Error::ArityMismatch {
                expected: self.n + self.m,
                got: x.len(),
            });
        }
        let (z, w) = x.split(self.n);
        Ok((-self.mu1 * z.norm_sqr().sqrt().powf(self.mu2)).exp() - w.norm_sqr())
    }

    fn sample_interior(&self, min_slack: f64, rng: &mut dyn RngCore) -> ComplexPoint {
        let slack = min_slack.clamp(0.0, 0.95);
        // the base point must keep exp(-mu1 ||z||^mu2) above the slack
        let base_cap = if slack > 0.0 {
            ((1.0 / slack).ln() / self.mu1).powf(1.0 / self.mu2)
        } else {
            1.0
        };
        loop {
            let z = sample_polydisc(&vec![base_cap / (self.n as f64).sqrt(); self.n], rng);
            let cap = (-self.mu1 * z.norm_sqr().sqrt().powf(self.mu2)).exp();
            if cap <= slack {
                continue;
            }
            let fiber_radius = (cap - slack).sqrt() * rng.random_range(0.0..1.0f64);
            let w_moduli_scale = fiber_radius / (self.m as f64).sqrt();
            let mut coords = z.coords().to_vec();
            for _ in 0..self.m {
                let r = w_moduli_scale * rng.random_range(0.0..1.0f64).sqrt();
                let theta = rng.random_range(0.0..2.0 * PI);
                coords.push(Complex64::from_polar(r, theta));
            }
            let candidate = ComplexPoint::new(coords).expect("arity >= 2");
            if self.boundary_slack(&candidate).unwrap() >= slack {
                return candidate;
            }
        }
    }

    fn shadow_sampler(&self) -> Option<Box<dyn ShadowSampler>> {
        Some(Box::new(DnmShadowSampler {
            n: self.n,
            m: self.m,
            mu1: self.mu1,
            mu2: self.mu2,
            radial: TabulatedRadial::new(self.mu1, self.mu2),
        }))
    }
}

/// Base moduli from the per-axis r e^{-mu1 r^mu2} profile, fiber moduli
/// uniform in volume on the Hartogs ball of radius exp(-mu1 ||r||^mu2 / 2).
struct DnmShadowSampler {
    n: usize,
    m: usize,
    mu1: f64,
    mu2: f64,
    radial: TabulatedRadial,
}

impl ShadowSampler for DnmShadowSampler {
    fn arity(&self) -> usize {
        self.n + self.m
    }

    fn sample(&self, rng: &mut dyn RngCore) -> (Vec<f64>, f64) {
        let mut q = 1.0;
        let mut r: Vec<f64> = (0..self.n)
            .map(|_| {
                let (x, qx) = self.radial.sample(rng);
                q *= qx;
                x
            })
            .collect();
        let norm = r.iter().map(|x| x * x).sum::<f64>().sqrt();
        let fiber_radius = (-self.mu1 * norm.powf(self.mu2) / 2.0).exp();
        let (fiber, q_fiber) = sample_complex_ball_moduli(self.m, fiber_radius, rng);
        r.extend(fiber);
        (r, q * q_fiber)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn pt(pairs: &[(f64, f64)]) -> ComplexPoint {
        ComplexPoint::from_pairs(pairs).unwrap()
    }

    #[test]
    fn all_zero_arguments_give_reciprocal_base_moment() {
        // n=m=1, mu1=1, mu2=2, eta=0 at the origin:
        // k1 = k2 = 0 term = Gamma(2) Gamma(1) (1*1)^1 / (pi^2) = 1/pi^2,
        // which equals 1 / I(0,0) with I = pi^2
        let f = DnmFamily::new(1, 1, 1.0, 2.0, 0.0).unwrap();
        let o = ComplexPoint::origin(2);
        let v = f.eval(&o, &o, 1e-13).unwrap();
        assert_abs_diff_eq!(v.value.re, 1.0 / (PI * PI), epsilon = 1e-14);
        let log_i = f.log_moment(&MultiIndex::zeros(2)).unwrap();
        assert_abs_diff_eq!(v.value.re, (-log_i).exp(), epsilon = 1e-14);
    }

    #[test]
    fn fiber_zero_collapses_to_single_series() {
        // w = t = 0 kills every k2 > 0 block
        let f = DnmFamily::new(1, 1, 1.0, 2.0, 0.5).unwrap();
        let x = pt(&[(0.4, 0.1), (0.0, 0.0)]);
        let y = pt(&[(0.2, -0.3), (0.0, 0.0)]);
        let full = f.eval(&x, &y, 1e-13).unwrap();
        // direct k2 = 0 block: Gamma(m+eta+1) lambda0^n e^{lambda0 u} / (pi^2 Gamma(eta+1))
        let u = pt(&[(0.4, 0.1)])
            .hermitian(&pt(&[(0.2, -0.3)]))
            .unwrap();
        let lambda0 = 1.0 * (1.0 + 0.5);
        let expected = (ln_gamma(1.0 + 0.5 + 1.0) - ln_gamma(1.5)).exp() / (PI * PI)
            * lambda0
            * (lambda0 * u).exp();
        assert!((full.value - expected).norm() <= 1e-12 * expected.norm());
        // the general double-series route factorizes the same way
        let general = f.eval_double_series(&x, &y, 1e-13).unwrap();
        assert!((general.value - expected).norm() <= 1e-11 * expected.norm());
    }

    #[test]
    fn mu2_2_reduction_matches_double_series() {
        // at mu2 = 2 the general double series and the reduced fiber series
        // are the same function
        let f = DnmFamily::new(1, 1, 1.0, 2.0, 0.5).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(21);
        for _ in 0..10 {
            let x = f.sample_interior(0.3, &mut rng);
            let y = f.sample_interior(0.3, &mut rng);
            let fast = f.eval(&x, &y, 1e-13).unwrap();
            let general = f.eval_double_series(&x, &y, 1e-13).unwrap();
            assert!(general.converged && fast.converged);
            assert!(
                (fast.value - general.value).norm() <= 1e-11 * fast.value.norm(),
                "{:?} vs {:?}",
                fast.value,
                general.value
            );
        }
    }

    #[test]
    fn interior_sampling_respects_slack() {
        let f = DnmFamily::new(2, 1, 0.5, 1.0, 0.0).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(33);
        for _ in 0..100 {
            let p = f.sample_interior(0.3, &mut rng);
            assert!(f.boundary_slack(&p).unwrap() >= 0.3 - 1e-12);
            assert!(f.contains(&p).unwrap());
        }
    }

    #[test]
    fn exterior_points_are_refused() {
        let f = DnmFamily::new(1, 1, 1.0, 2.0, 0.0).unwrap();
        let bad = pt(&[(0.0, 0.0), (1.2, 0.0)]);
        let ok = ComplexPoint::origin(2);
        assert!(matches!(
            f.eval(&bad, &ok, 1e-10),
            Err(Error::OutsideDomain(_))
        ));
    }

    #[test]
    fn hermitian_symmetry() {
        let f = DnmFamily::new(1, 2, 1.0, 1.0, 0.5).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(55);
        let x = f.sample_interior(0.4, &mut rng);
        let y = f.sample_interior(0.4, &mut rng);
        let kxy = f.eval(&x, &y, 1e-12).unwrap().value;
        let kyx = f.eval(&y, &x, 1e-12).unwrap().value;
        assert!((kxy - kyx.conj()).norm() <= 1e-11 * kxy.norm().max(1.0));
    }
}
