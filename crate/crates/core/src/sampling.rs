//! Seeded sampling machinery for Monte-Carlo verification.
//!
//! Every sampler reports the exact density it draws from, so importance
//! ratios stay unbiased. The radial proposals are matched to the weight
//! families: tabulated inverse-CDF sampling of r e^{-mu1 r^mu2} profiles on
//! the unbounded axes, and uniform-in-volume complex-ball sampling on the
//! bounded blocks.

use num_complex::Complex64;
use rand::Rng;
use rand::RngCore;
use rand_distr::StandardNormal;

use crate::point::ComplexPoint;
use crate::specfn::ln_factorial;
use crate::weight::RadialWeight;

/// Draws modulus tuples on a Reinhardt shadow together with the proposal
/// density q(r) with respect to Lebesgue measure dr on the shadow.
pub trait ShadowSampler: Send + Sync {
    fn arity(&self) -> usize;
    fn sample(&self, rng: &mut dyn RngCore) -> (Vec<f64>, f64);
}

/// A Monte-Carlo estimate of a complex integral.
#[derive(Clone, Copy, Debug)]
pub struct McEstimate {
    pub mean: Complex64,
    pub std_error: f64,
    pub samples: u64,
}

/// Estimates the weighted domain integral of g over the Reinhardt domain:
/// integral of g(w) phi(|w|) dV(w), by sampling moduli from the proposal
/// and phases uniformly.
pub fn mc_domain_integral<G>(
    sampler: &dyn ShadowSampler,
    weight: &RadialWeight,
    mut g: G,
    samples: u64,
    rng: &mut dyn RngCore,
) -> crate::error::Result<McEstimate>
where
    G: FnMut(&ComplexPoint) -> crate::error::Result<Complex64>,
{
    let n = sampler.arity();
    let two_pi = 2.0 * std::f64::consts::PI;
    let angular_factor = two_pi.powi(n as i32);
    let mut sum = Complex64::ZERO;
    let mut sum_sq = 0.0f64;
    for _ in 0..samples {
        let (r, q) = sampler.sample(rng);
        let coords: Vec<Complex64> = r
            .iter()
            .map(|&radius| {
                let theta: f64 = rng.random_range(0.0..two_pi);
                Complex64::from_polar(radius, theta)
            })
            .collect();
        let w = ComplexPoint::new(coords)?;
        let radial_volume: f64 = r.iter().product();
        let h = g(&w)? * (weight.eval(&r) * radial_volume * angular_factor / q);
        sum += h;
        sum_sq += h.norm_sqr();
    }
    let nf = samples as f64;
    let mean = sum / nf;
    let variance = ((sum_sq - mean.norm_sqr() * nf) / (nf - 1.0)).max(0.0);
    Ok(McEstimate {
        mean,
        std_error: (variance / nf).sqrt(),
        samples,
    })
}

/// Uniform point on the unit sphere of R^n (normalized Gaussians).
pub fn sample_unit_sphere(n: usize, rng: &mut dyn RngCore) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// Surface area of the unit sphere in R^n: 2 pi^{n/2} / Gamma(n/2).
pub fn unit_sphere_area(n: usize) -> f64 {
    let nf = n as f64;
    (std::f64::consts::LN_2
        + (nf / 2.0) * std::f64::consts::PI.ln()
        - crate::specfn::ln_gamma(nf / 2.0))
    .exp()
}

/// Moduli of a uniform point in the complex ball of C^k with the given
/// radius. The modulus tuple has density 2^k k! prod(r_j) / R^{2k} on the
/// quadrant ball, which is exactly "uniform in volume".
pub fn sample_complex_ball_moduli(k: usize, radius: f64, rng: &mut dyn RngCore) -> (Vec<f64>, f64) {
    loop {
        let g: Vec<f64> = (0..2 * k).map(|_| rng.sample(StandardNormal)).collect();
        let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm <= 1e-12 {
            continue;
        }
        let u: f64 = rng.random_range(0.0..1.0);
        let scale = radius * u.powf(1.0 / (2.0 * k as f64)) / norm;
        let moduli: Vec<f64> = (0..k)
            .map(|j| scale * (g[2 * j] * g[2 * j] + g[2 * j + 1] * g[2 * j + 1]).sqrt())
            .collect();
        let log_density = k as f64 * std::f64::consts::LN_2 + ln_factorial(k as u32)
            + moduli.iter().map(|r| r.ln()).sum::<f64>()
            - 2.0 * k as f64 * radius.ln();
        let q = log_density.exp();
        if q > 0.0 && q.is_finite() {
            return (moduli, q);
        }
        // a modulus underflowed to zero; redraw
    }
}

/// Piecewise-linear density on [0, cutoff] proportional to
/// x * exp(-c x^p). Sampling and the reported density use the same
/// piecewise-linear profile, so the importance ratio is exact.
pub struct TabulatedRadial {
    xs: Vec<f64>,
    ys: Vec<f64>,
    cumulative: Vec<f64>,
    total: f64,
}

impl TabulatedRadial {
    pub fn new(c: f64, p: f64) -> Self {
        assert!(c > 0.0 && p > 0.0);
        // cutoff where c x^p = 45: truncated mass ~ e^-45, far below any
        // Monte-Carlo resolution
        let cutoff = (45.0 / c).powf(1.0 / p);
        let cells = 4096;
        let xs: Vec<f64> = (0..=cells)
            .map(|i| cutoff * i as f64 / cells as f64)
            .collect();
        let ys: Vec<f64> = xs.iter().map(|&x| x * (-c * x.powf(p)).exp()).collect();
        let mut cumulative = Vec::with_capacity(cells + 1);
        cumulative.push(0.0);
        let mut acc = 0.0;
        for i in 0..cells {
            acc += 0.5 * (ys[i] + ys[i + 1]) * (xs[i + 1] - xs[i]);
            cumulative.push(acc);
        }
        Self {
            xs,
            ys,
            cumulative,
            total: acc,
        }
    }

    /// Draws x and returns (x, density(x)).
    pub fn sample(&self, rng: &mut dyn RngCore) -> (f64, f64) {
        let target: f64 = rng.random_range(0.0..1.0) * self.total;
        let cell = match self
            .cumulative
            .binary_search_by(|c| c.total_cmp(&target))
        {
            Ok(i) => i.min(self.xs.len() - 2),
            Err(i) => (i - 1).min(self.xs.len() - 2),
        };
        let x0 = self.xs[cell];
        let x1 = self.xs[cell + 1];
        let y0 = self.ys[cell];
        let y1 = self.ys[cell + 1];
        let h = x1 - x0;
        let m = target - self.cumulative[cell];
        // solve y0 t + (y1 - y0) t^2 / (2h) = m for t in [0, h]
        let a = (y1 - y0) / (2.0 * h);
        let t = if a.abs() < 1e-300 {
            if y0 > 0.0 {
                m / y0
            } else {
                0.5 * h
            }
        } else {
            let disc = (y0 * y0 + 4.0 * a * m).max(0.0);
            (-y0 + disc.sqrt()) / (2.0 * a)
        };
        let t = t.clamp(0.0, h);
        let x = x0 + t;
        let density = (y0 + (y1 - y0) * t / h) / self.total;
        (x, density.max(1e-300))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;
    use std::f64::consts::PI;

    #[test]
    fn sphere_area_small_dims() {
        assert_abs_diff_eq!(unit_sphere_area(2), 2.0 * PI, epsilon = 1e-12);
        assert_abs_diff_eq!(unit_sphere_area(3), 4.0 * PI, epsilon = 1e-12);
    }

    #[test]
    fn tabulated_radial_normalizes() {
        // density x e^{-x^2}: integral = 1/2
        let t = TabulatedRadial::new(1.0, 2.0);
        assert_abs_diff_eq!(t.total, 0.5, epsilon = 1e-6);
    }

    #[test]
    fn tabulated_radial_mean_matches() {
        // X ~ 2 x e^{-x^2}: E[X] = sqrt(pi)/2
        let t = TabulatedRadial::new(1.0, 2.0);
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        let n = 200_000;
        let mut sum = 0.0;
        for _ in 0..n {
            let (x, q) = t.sample(&mut rng);
            assert!(q > 0.0);
            sum += x;
        }
        let mean = sum / n as f64;
        assert_abs_diff_eq!(mean, PI.sqrt() / 2.0, epsilon = 3e-3);
    }

    #[test]
    fn importance_ratio_is_unbiased() {
        // estimate integral of x e^{-x^2} dx over [0, inf) = 1/2 using the
        // sampler's own reported density
        let t = TabulatedRadial::new(1.0, 2.0);
        let mut rng = ChaCha12Rng::seed_from_u64(17);
        let n = 200_000;
        let mut sum = 0.0;
        for _ in 0..n {
            let (x, q) = t.sample(&mut rng);
            sum += x * (-x * x).exp() / q;
        }
        assert_abs_diff_eq!(sum / n as f64, 0.5, epsilon = 2e-3);
    }

    #[test]
    fn complex_ball_moduli_stay_inside() {
        let mut rng = ChaCha12Rng::seed_from_u64(23);
        for _ in 0..500 {
            let (m, q) = sample_complex_ball_moduli(3, 0.8, &mut rng);
            let norm_sq: f64 = m.iter().map(|x| x * x).sum();
            assert!(norm_sq <= 0.64 + 1e-12);
            assert!(q > 0.0);
        }
    }

    #[test]
    fn complex_ball_density_is_exact() {
        // E[prod r_j / q] recovers the normalization R^{2k} / (2^k k!)
        // with zero variance; E[prod r_j (r_1^2 + r_2^2) / q] integrates a
        // smooth function over the quadrant ball (1/12 for k = 2, R = 1)
        let mut rng = ChaCha12Rng::seed_from_u64(31);
        let n = 200_000;
        let mut norm = 0.0;
        let mut smooth = 0.0;
        for _ in 0..n {
            let (m, q) = sample_complex_ball_moduli(2, 1.0, &mut rng);
            norm += m[0] * m[1] / q;
            smooth += m[0] * m[1] * (m[0] * m[0] + m[1] * m[1]) / q;
        }
        assert_abs_diff_eq!(norm / n as f64, 1.0 / 8.0, epsilon = 1e-9);
        assert_abs_diff_eq!(smooth / n as f64, 1.0 / 12.0, epsilon = 1e-3);
    }

    #[test]
    fn mc_integral_of_gaussian_weight() {
        // integral over C of e^{-|z|^2} dV = pi
        struct Radial(TabulatedRadial);
        impl ShadowSampler for Radial {
            fn arity(&self) -> usize {
                1
            }
            fn sample(&self, rng: &mut dyn RngCore) -> (Vec<f64>, f64) {
                let (x, q) = self.0.sample(rng);
                (vec![x], q)
            }
        }
        let sampler = Radial(TabulatedRadial::new(1.0, 2.0));
        let weight = RadialWeight::exp_power(1, 1.0, 2.0).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(41);
        let est = mc_domain_integral(
            &sampler,
            &weight,
            |_w| Ok(Complex64::ONE),
            100_000,
            &mut rng,
        )
        .unwrap();
        assert!((est.mean.re - PI).abs() <= 4.0 * est.std_error.max(1e-4));
        assert!(est.mean.im.abs() <= 1e-10);
    }
}
