//! Closed-form moment formulas for the analytic families, all in log space.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::index::MultiIndex;
use crate::specfn::ln_gamma;

const LN_2: f64 = std::f64::consts::LN_2;

/// Log of the sphere integral of |x_1|^{2a_1+1} ... |x_n|^{2a_n+1} over the
/// unit sphere of R^n: ln( 2 * alpha! / Gamma(|alpha| + n) ).
///
/// At n = 1 the "sphere" degenerates to the two points {-1, +1} and the
/// formula still returns 2, which is what the counting measure gives.
pub fn sphere_monomial_log_integral(alpha: &MultiIndex) -> f64 {
    let n = alpha.len() as f64;
    LN_2 + alpha.log_factorial() - ln_gamma(alpha.degree() as f64 + n)
}

/// Log moment of the weight exp(-mu1 ||z||^mu2) on C^n:
///
/// I(alpha) = 2 pi^n alpha! Gamma(s) / (Gamma(|alpha| + n) mu1^s mu2),
/// with s = (2|alpha| + 2n) / mu2.
pub fn cn_log_moment(alpha: &MultiIndex, mu1: f64, mu2: f64) -> Result<f64> {
    if !(mu1 > 0.0) || !(mu2 > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "cn moment needs mu1 > 0 and mu2 > 0, got mu1={mu1}, mu2={mu2}"
        )));
    }
    let n = alpha.len() as f64;
    let deg = alpha.degree() as f64;
    let s = (2.0 * deg + 2.0 * n) / mu2;
    Ok(LN_2 + n * PI.ln() + alpha.log_factorial() + ln_gamma(s)
        - ln_gamma(deg + n)
        - s * mu1.ln()
        - mu2.ln())
}

/// Log moment of the weight (e^{-mu1 ||z||^mu2} - ||w||^2)^eta on the
/// generalized Fock-Bargmann-Hartogs domain D_{n,m}:
///
/// I(alpha, beta) = 2 alpha! beta! Gamma(eta+1) Gamma(s) pi^{n+m}
///   / ( mu2 Gamma(|beta|+m+eta+1) Gamma(|alpha|+n) [mu1(|beta|+m+eta)]^s ),
/// with s = (2|alpha| + 2n) / mu2.
pub fn dnm_log_moment(
    alpha: &MultiIndex,
    beta: &MultiIndex,
    mu1: f64,
    mu2: f64,
    eta: f64,
) -> Result<f64> {
    if !(mu1 > 0.0) || !(mu2 > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "dnm moment needs mu1 > 0 and mu2 > 0, got mu1={mu1}, mu2={mu2}"
        )));
    }
    if !(eta > -1.0) {
        return Err(Error::InvalidParameter(format!(
            "dnm moment needs eta > -1, got {eta}"
        )));
    }
    let n = alpha.len() as f64;
    let m = beta.len() as f64;
    let adeg = alpha.degree() as f64;
    let bdeg = beta.degree() as f64;
    let s = (2.0 * adeg + 2.0 * n) / mu2;
    let lam = mu1 * (bdeg + m + eta);
    Ok(LN_2
        + (n + m) * PI.ln()
        + alpha.log_factorial()
        + beta.log_factorial()
        + ln_gamma(eta + 1.0)
        + ln_gamma(s)
        - mu2.ln()
        - ln_gamma(bdeg + m + eta + 1.0)
        - ln_gamma(adeg + n)
        - s * lam.ln())
}

/// Log moment of the weight (1 - sum_j e^{eta_j |w|^2} |z_j|^2 - ||z'||^2)^a
/// on the domain V_eta:
///
/// I(alpha, beta, gamma) = pi^{n+m+1} Gamma(a+1) alpha! beta! gamma!
///   / ( Gamma(|alpha|+|beta|+n+m+a+1) (<alpha,eta> + |eta|)^{gamma+1} ).
pub fn veta_log_moment(
    alpha: &MultiIndex,
    beta: &MultiIndex,
    gamma: u32,
    eta: &[f64],
    a: f64,
) -> Result<f64> {
    if eta.len() != alpha.len() {
        return Err(Error::ArityMismatch {
            expected: alpha.len(),
            got: eta.len(),
        });
    }
    if eta.iter().any(|&e| !(e > 0.0)) {
        return Err(Error::InvalidParameter(format!(
            "veta moment needs every eta_j > 0, got {eta:?}"
        )));
    }
    if !(a > -1.0) {
        return Err(Error::InvalidParameter(format!(
            "veta moment needs a > -1, got {a}"
        )));
    }
    let n = alpha.len() as f64;
    let m = beta.len() as f64;
    let adeg = alpha.degree() as f64;
    let bdeg = beta.degree() as f64;
    let alpha_dot_eta: f64 = alpha
        .entries()
        .iter()
        .zip(eta)
        .map(|(&e, &h)| e as f64 * h)
        .sum();
    let eta_total: f64 = eta.iter().sum();
    Ok((n + m + 1.0) * PI.ln()
        + ln_gamma(a + 1.0)
        + alpha.log_factorial()
        + beta.log_factorial()
        + crate::specfn::ln_factorial(gamma)
        - ln_gamma(adeg + bdeg + n + m + a + 1.0)
        - (gamma as f64 + 1.0) * (alpha_dot_eta + eta_total).ln())
}

/// Log moment of the constant weight 1 on the unit ball of C^n:
///
/// I(alpha) = pi^n alpha! / Gamma(|alpha| + n + 1).
///
/// Obtained from the defining integral by the same polar-coordinate
/// factorization used for the other families; the radial factor is
/// 1 / (2|alpha| + 2n). For n = 1 this is the classical pi / (k + 1).
pub fn ball_log_moment(alpha: &MultiIndex) -> f64 {
    let n = alpha.len() as f64;
    n * PI.ln() + alpha.log_factorial() - ln_gamma(alpha.degree() as f64 + n + 1.0)
}
