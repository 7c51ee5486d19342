//! Shell-by-shell evaluation of the kernel power series.
//!
//! The kernel is K(z, w) = sum over alpha of I(alpha)^{-1} z^alpha
//! conj(w)^alpha. Since both points enter through the same exponent, every
//! term depends only on the componentwise products zeta_j = z_j conj(w_j);
//! the series is summed by total degree ("shells"), matching the regrouping
//! that collapses each shell to a power of <z, w> whenever the coefficient
//! depends only on |alpha|.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::index::degree_shell;
use crate::moments::MomentTable;
use crate::point::ComplexPoint;
use crate::specfn::ln_factorial;

/// Default shell cut-off. With log-Gamma coefficient arithmetic the terms
/// stay representable well past this degree; points close enough to the
/// boundary to need more shells get the non-convergence flag instead.
pub const DEFAULT_MAX_DEGREE: u32 = 120;

/// Number of consecutive negligible shells required before the sum is
/// declared converged. One shell is not enough: shells can vanish by
/// symmetry, e.g. when a coordinate of z is zero.
const QUIET_SHELLS: u32 = 3;

/// A kernel evaluation together with its error bookkeeping.
#[derive(Clone, Copy, Debug)]
pub struct KernelValue {
    pub value: Complex64,
    /// Magnitude of the last degree shell (raw, no extrapolation).
    pub truncation_estimate: f64,
    /// Highest degree that contributed significantly.
    pub degree_used: u32,
    /// False when the stop rule was still failing at max_degree; the value
    /// and truncation estimate are still reported.
    pub converged: bool,
}

impl KernelValue {
    pub fn exact(value: Complex64) -> Self {
        Self {
            value,
            truncation_estimate: 0.0,
            degree_used: 0,
            converged: true,
        }
    }
}

/// The general kernel evaluator: a moment table plus a degree budget.
#[derive(Clone)]
pub struct SeriesKernel {
    table: Arc<MomentTable>,
    max_degree: u32,
}

impl SeriesKernel {
    pub fn new(table: Arc<MomentTable>, max_degree: u32) -> Self {
        Self { table, max_degree }
    }

    pub fn with_default_degree(table: Arc<MomentTable>) -> Self {
        Self::new(table, DEFAULT_MAX_DEGREE)
    }

    pub fn table(&self) -> &MomentTable {
        &self.table
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    /// Sums the series at (z, w) shell by shell in increasing degree.
    ///
    /// Stops once [`QUIET_SHELLS`] consecutive shells each contribute less
    /// than rel_tol times the current partial sum, or at max_degree with
    /// the non-convergence flag set. Missing moments are computed on demand
    /// through the table.
    pub fn eval(&self, z: &ComplexPoint, w: &ComplexPoint, rel_tol: f64) -> Result<KernelValue> {
        let n = self.table.arity();
        if z.len() != n || w.len() != n {
            return Err(Error::ArityMismatch {
                expected: n,
                got: if z.len() != n { z.len() } else { w.len() },
            });
        }
        if !(rel_tol > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "rel_tol must be positive, got {rel_tol}"
            )));
        }
        for (label, p) in [("z", z), ("w", w)] {
            if !self.table.shadow().contains(&p.moduli())? {
                return Err(Error::OutsideDomain(format!(
                    "{label} = {p:?} is not an interior point"
                )));
            }
        }

        let zeta = z.pair_products(w)?;
        // |zeta_j| and unit phases; exact zeros kill all terms with a
        // positive exponent on that axis.
        let log_abs: Vec<f64> = zeta.iter().map(|c| c.norm().ln()).collect();
        let phases: Vec<Complex64> = zeta
            .iter()
            .map(|c| {
                let r = c.norm();
                if r > 0.0 {
                    c / r
                } else {
                    Complex64::ZERO
                }
            })
            .collect();

        let mut sum = Complex64::ZERO;
        let mut quiet = 0u32;
        let mut degree_used = 0u32;
        let mut last_shell = 0.0f64;

        for d in 0..=self.max_degree {
            let mut shell = Complex64::ZERO;
            for idx in degree_shell(n, d) {
                let mut log_mag = -self.table.log_moment(&idx)?;
                let mut phase = Complex64::ONE;
                let mut zero = false;
                for (j, &e) in idx.entries().iter().enumerate() {
                    if e == 0 {
                        continue;
                    }
                    if phases[j] == Complex64::ZERO {
                        zero = true;
                        break;
                    }
                    log_mag += e as f64 * log_abs[j];
                    phase *= phases[j].powu(e);
                }
                if zero {
                    continue;
                }
                shell += log_mag.exp() * phase;
            }
            sum += shell;
            last_shell = shell.norm();
            if last_shell >= rel_tol * sum.norm() {
                degree_used = d;
                quiet = 0;
            } else {
                quiet += 1;
                if quiet >= QUIET_SHELLS {
                    return Ok(KernelValue {
                        value: sum,
                        truncation_estimate: last_shell,
                        degree_used,
                        converged: true,
                    });
                }
            }
        }
        Ok(KernelValue {
            value: sum,
            truncation_estimate: last_shell,
            degree_used,
            converged: false,
        })
    }
}

/// The degree-d shell of the multinomial expansion:
/// sum over |alpha| = d of (d! / alpha!) z^alpha conj(w)^alpha,
/// which equals <z, w>^d.
pub fn multinomial_collapse(z: &ComplexPoint, w: &ComplexPoint, degree: u32) -> Result<Complex64> {
    let zeta = z.pair_products(w)?;
    let n = zeta.len();
    let log_d_factorial = ln_factorial(degree);
    let mut sum = Complex64::ZERO;
    for idx in degree_shell(n, degree) {
        let coeff = (log_d_factorial - idx.log_factorial()).exp();
        let mut term = Complex64::ONE;
        for (c, &e) in zeta.iter().zip(idx.entries()) {
            if e > 0 {
                term *= c.powu(e);
            }
        }
        sum += coeff * term;
    }
    Ok(sum)
}
