//! The V_eta family: the domain
//! sum_j exp(eta_j |w|^2) |z_j|^2 + ||z'||^2 < 1 in C^n x C^m x C,
//! with weight (1 - sum_j exp(eta_j |w|^2) |z_j|^2 - ||z'||^2)^a.
//!
//! The kernel resums to two principal-branch powers of
//! phi = 1 - sum_j e^{eta_j w conj(t)} z_j conj(s_j) - <z', s'>.
//! For interior point pairs a Cauchy-Schwarz argument keeps |1 - phi| < 1,
//! so Re(phi) > 0 and the principal branch is the right one; the evaluation
//! asserts this rather than assuming it.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand::RngCore;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::index::MultiIndex;
use crate::moments::veta_log_moment;
use crate::point::ComplexPoint;
use crate::sampling::{sample_complex_ball_moduli, ShadowSampler};
use crate::series::KernelValue;
use crate::shadow::ShadowRegion;
use crate::specfn::ln_gamma;
use crate::weight::RadialWeight;

use super::{KernelEvaluator, KernelFamily};

pub struct VEtaFamily {
    n: usize,
    m: usize,
    eta: Vec<f64>,
    a: f64,
}

const MIN_ABS_PHI: f64 = 1e-12;

impl VEtaFamily {
    pub fn new(n: usize, m: usize, eta: Vec<f64>, a: f64) -> Result<Self> {
        RadialWeight::veta_power(n.max(1), m.max(1), eta.clone(), a)?;
        if n < 1 || m < 1 {
            return Err(Error::InvalidParameter(
                "veta family needs n >= 1 and m >= 1".into(),
            ));
        }
        Ok(Self { n, m, eta, a })
    }

    pub fn eta(&self) -> &[f64] {
        &self.eta
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    fn eta_total(&self) -> f64 {
        self.eta.iter().sum()
    }

    fn defining_sum(&self, x: &ComplexPoint) -> f64 {
        let coords = x.coords();
        let w_sq = coords[self.n + self.m].norm_sqr();
        let mut s = 0.0;
        for j in 0..self.n {
            s += (self.eta[j] * w_sq).exp() * coords[j].norm_sqr();
        }
        for c in &coords[self.n..self.n + self.m] {
            s += c.norm_sqr();
        }
        s
    }
}

impl KernelEvaluator for VEtaFamily {
    fn arity(&self) -> usize {
        self.n + self.m + 1
    }

    fn eval(&self, x: &ComplexPoint, y: &ComplexPoint, _rel_tol: f64) -> Result<KernelValue> {
        for (label, p) in [("x", x), ("y", y)] {
            if !self.contains(p)? {
                return Err(Error::OutsideDomain(format!(
                    "{label} = {p:?} violates the defining inequality of V_eta"
                )));
            }
        }
        let xc = x.coords();
        let yc = y.coords();
        let wt = xc[self.n + self.m] * yc[self.n + self.m].conj();

        // zeta_j = e^{eta_j w conj(t)} z_j conj(s_j)
        let mut zeta_sum = Complex64::ZERO;
        let mut weighted_sum = Complex64::ZERO;
        for j in 0..self.n {
            let zeta = (self.eta[j] * wt).exp() * xc[j] * yc[j].conj();
            zeta_sum += zeta;
            weighted_sum += self.eta[j] * zeta;
        }
        let mut inner = Complex64::ZERO;
        for j in self.n..self.n + self.m {
            inner += xc[j] * yc[j].conj();
        }
        let phi = Complex64::ONE - zeta_sum - inner;

        if phi.norm() < MIN_ABS_PHI {
            return Err(Error::NearSingular {
                abs_phi: phi.norm(),
            });
        }
        if phi.re <= 0.0 {
            return Err(Error::BranchAmbiguity { re_phi: phi.re });
        }

        let kappa = (self.n + self.m) as f64 + self.a + 1.0;
        let prefactor = (self.eta_total() * wt).exp()
            / ((self.n + self.m + 1) as f64 * PI.ln() + ln_gamma(self.a + 1.0)).exp();
        let term_main =
            ln_gamma(kappa + 1.0).exp() * weighted_sum * phi.powf(-(kappa + 1.0));
        let term_rest = self.eta_total() * ln_gamma(kappa).exp() * phi.powf(-kappa);
        Ok(KernelValue::exact(prefactor * (term_main + term_rest)))
    }
}

impl KernelFamily for VEtaFamily {
    fn name(&self) -> &'static str {
        "veta"
    }

    fn describe(&self) -> String {
        format!(
            "veta(n={}, m={}, eta={:?}, a={})",
            self.n, self.m, self.eta, self.a
        )
    }

    fn weight(&self) -> RadialWeight {
        RadialWeight::veta_power(self.n, self.m, self.eta.clone(), self.a)
            .expect("validated at construction")
    }

    fn shadow(&self) -> ShadowRegion {
        ShadowRegion::veta(self.n, self.m, self.eta.clone()).expect("validated at construction")
    }

    fn log_moment(&self, idx: &MultiIndex) -> Result<f64> {
        if idx.len() != self.arity() {
            return Err(Error::ArityMismatch {
                expected: self.arity(),
                got: idx.len(),
            });
        }
        let entries = idx.entries();
        let alpha = MultiIndex::new(entries[..self.n].to_vec())?;
        let beta = MultiIndex::new(entries[self.n..self.n + self.m].to_vec())?;
        let gamma = entries[self.n + self.m];
        veta_log_moment(&alpha, &beta, gamma, &self.eta, self.a)
    }

    fn contains(&self, x: &ComplexPoint) -> Result<bool> {
        if x.len() != self.arity() {
            return Err(Error::ArityMismatch {
                expected: self.arity(),
                got: x.len(),
            });
        }
        Ok(self.defining_sum(x) < 1.0)
    }

    fn boundary_slack(&self, x: &ComplexPoint) -> Result<f64> {
        if x.len() != self.arity() {
            return Err(Error::ArityMismatch {
                expected: self.arity(),
                got: x.len(),
            });
        }
        Ok(1.0 - self.defining_sum(x))
    }

    fn sample_interior(&self, min_slack: f64, rng: &mut dyn RngCore) -> ComplexPoint {
        let slack = min_slack.clamp(0.0, 0.95);
        // fiber coordinate anywhere in the unit disc; scaling the base
        // block by e^{-eta_j |w|^2 / 2} turns a ball sample into a point
        // that satisfies the inequality with room to spare
        let r_w: f64 = rng.random_range(0.0..1.0f64).sqrt();
        let theta_w: f64 = rng.random_range(0.0..2.0 * PI);
        let w = Complex64::from_polar(r_w, theta_w);
        let w_sq = w.norm_sqr();

        let k = self.n + self.m;
        let radius = (1.0 - slack).sqrt();
        let ball: Vec<Complex64> = loop {
            let g: Vec<f64> = (0..2 * k).map(|_| rng.sample(StandardNormal)).collect();
            let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm <= 1e-12 {
                continue;
            }
            let u: f64 = rng.random_range(0.0..1.0);
            let scale = radius * u.powf(1.0 / (2.0 * k as f64)) / norm;
            break (0..k)
                .map(|j| Complex64::new(scale * g[2 * j], scale * g[2 * j + 1]))
                .collect();
        };
        let mut coords = Vec::with_capacity(k + 1);
        for (j, b) in ball.iter().enumerate() {
            if j < self.n {
                coords.push(b * (-self.eta[j] * w_sq / 2.0).exp());
            } else {
                coords.push(*b);
            }
        }
        coords.push(w);
        ComplexPoint::new(coords).expect("arity >= 3")
    }

    fn shadow_sampler(&self) -> Option<Box<dyn ShadowSampler>> {
        Some(Box::new(VEtaShadowSampler {
            n: self.n,
            m: self.m,
            eta: self.eta.clone(),
            eta_total: self.eta_total(),
        }))
    }
}

/// rho from the exact density 2|eta| rho e^{-|eta| rho^2}; the (base,
/// middle) block uniform in volume on the ellipsoid section at that rho.
struct VEtaShadowSampler {
    n: usize,
    m: usize,
    eta: Vec<f64>,
    eta_total: f64,
}

impl ShadowSampler for VEtaShadowSampler {
    fn arity(&self) -> usize {
        self.n + self.m + 1
    }

    fn sample(&self, rng: &mut dyn RngCore) -> (Vec<f64>, f64) {
        let u: f64 = rng.random_range(0.0..1.0);
        let rho = ((-(1.0 - u).ln()) / self.eta_total).sqrt();
        let q_rho = 2.0 * self.eta_total * rho * (-self.eta_total * rho * rho).exp();
        let rho_sq = rho * rho;

        let (ball, q_ball) = sample_complex_ball_moduli(self.n + self.m, 1.0, rng);
        // scale the base block into the ellipsoid section; q_ball is the
        // density at the pre-scaling moduli, so r_j = c_j t_j contributes
        // exactly the Jacobian factor 1/c_j
        let mut q = q_rho * q_ball;
        let mut r = Vec::with_capacity(self.arity());
        for (j, t) in ball.iter().enumerate() {
            if j < self.n {
                let c = (-self.eta[j] * rho_sq / 2.0).exp();
                r.push(c * t);
                q /= c;
            } else {
                r.push(*t);
            }
        }
        r.push(rho);
        (r, q)
    }
}
