//! The unweighted unit ball of C^n (the classical Bergman space).
//!
//! Its moments follow from the same polar factorization as the weighted
//! families and the kernel is the classical n! / (pi^n (1 - <z,w>)^{n+1});
//! at n = 1 (the `disc` alias) this is the quadrature + series workhorse
//! for cross-checking the general machinery against 1/(pi (1 - z conj w)^2).

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand::RngCore;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::index::MultiIndex;
use crate::moments::ball_log_moment;
use crate::point::ComplexPoint;
use crate::sampling::{sample_complex_ball_moduli, ShadowSampler};
use crate::series::KernelValue;
use crate::shadow::ShadowRegion;
use crate::specfn::ln_factorial;
use crate::weight::RadialWeight;

use super::{KernelEvaluator, KernelFamily};

pub struct BallFamily {
    n: usize,
}

impl BallFamily {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        Self { n }
    }
}

impl KernelEvaluator for BallFamily {
    fn arity(&self) -> usize {
        self.n
    }

    fn eval(&self, x: &ComplexPoint, y: &ComplexPoint, _rel_tol: f64) -> Result<KernelValue> {
        for (label, p) in [("x", x), ("y", y)] {
            if !self.contains(p)? {
                return Err(Error::OutsideDomain(format!(
                    "{label} = {p:?} is not inside the unit ball"
                )));
            }
        }
        let u = x.hermitian(y)?;
        let phi = Complex64::ONE - u;
        if phi.norm() < 1e-12 {
            return Err(Error::NearSingular {
                abs_phi: phi.norm(),
            });
        }
        let c = (ln_factorial(self.n as u32) - self.n as f64 * PI.ln()).exp();
        Ok(KernelValue::exact(c * phi.powi(-(self.n as i32) - 1)))
    }
}

impl KernelFamily for BallFamily {
    fn name(&self) -> &'static str {
        "ball"
    }

    fn describe(&self) -> String {
        format!("ball(n={})", self.n)
    }

    fn weight(&self) -> RadialWeight {
        RadialWeight::one(self.n)
    }

    fn shadow(&self) -> ShadowRegion {
        ShadowRegion::ball(self.n, 1.0).expect("unit radius is valid")
    }

    fn log_moment(&self, idx: &MultiIndex) -> Result<f64> {
        if idx.len() != self.n {
            return Err(Error::ArityMismatch {
                expected: self.n,
                got: idx.len(),
            });
        }
        Ok(ball_log_moment(idx))
    }

    fn contains(&self, x: &ComplexPoint) -> Result<bool> {
        if x.len() != self.n {
            return Err(Error::ArityMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        Ok(x.norm_sqr() < 1.0)
    }

    fn boundary_slack(&self, x: &ComplexPoint) -> Result<f64> {
        if x.len() != self.n {
            return Err(Error::ArityMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        Ok(1.0 - x.norm_sqr())
    }

    fn sample_interior(&self, min_slack: f64, rng: &mut dyn RngCore) -> ComplexPoint {
        // uniform in the complex ball of radius sqrt(1 - min_slack)
        let radius = (1.0 - min_slack.clamp(0.0, 0.999)).sqrt();
        loop {
            let g: Vec<f64> = (0..2 * self.n).map(|_| rng.sample(StandardNormal)).collect();
            let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm <= 1e-12 {
                continue;
            }
            let u: f64 = rng.random_range(0.0..1.0);
            let scale = radius * u.powf(1.0 / (2.0 * self.n as f64)) / norm;
            let coords: Vec<Complex64> = (0..self.n)
                .map(|j| Complex64::new(scale * g[2 * j], scale * g[2 * j + 1]))
                .collect();
            return ComplexPoint::new(coords).expect("n >= 1");
        }
    }

    fn shadow_sampler(&self) -> Option<Box<dyn ShadowSampler>> {
        Some(Box::new(BallShadowSampler { n: self.n }))
    }
}

struct BallShadowSampler {
    n: usize,
}

impl ShadowSampler for BallShadowSampler {
    fn arity(&self) -> usize {
        self.n
    }

    fn sample(&self, rng: &mut dyn RngCore) -> (Vec<f64>, f64) {
        sample_complex_ball_moduli(self.n, 1.0, rng)
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
    fn disc_kernel_is_classical() {
        let f = BallFamily::new(1);
        let z = pt(&[(0.3, 0.0)]);
        let w = pt(&[(0.2, 0.0)]);
        let v = f.eval(&z, &w, 1e-12).unwrap();
        assert_abs_diff_eq!(
            v.value.re,
            1.0 / (PI * (1.0 - 0.06f64).powi(2)),
            epsilon = 1e-14
        );
    }

    #[test]
    fn exterior_point_refused() {
        let f = BallFamily::new(2);
        let z = pt(&[(0.9, 0.0), (0.9, 0.0)]);
        let w = pt(&[(0.1, 0.0), (0.0, 0.0)]);
        assert!(matches!(
            f.eval(&z, &w, 1e-12),
            Err(Error::OutsideDomain(_))
        ));
    }

    #[test]
    fn sampled_points_respect_slack() {
        let f = BallFamily::new(3);
        let mut rng = ChaCha12Rng::seed_from_u64(9);
        for _ in 0..200 {
            let z = f.sample_interior(0.3, &mut rng);
            assert!(f.boundary_slack(&z).unwrap() >= 0.3 - 1e-12);
        }
    }
}
