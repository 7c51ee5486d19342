//! Points of C^n and the handful of operations kernels need on them.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index::MultiIndex;

/// A point of C^n, n >= 1. Immutable once built.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ComplexPoint(Vec<Complex64>);

impl ComplexPoint {
    pub fn new(coords: Vec<Complex64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidParameter(
                "point must have at least one coordinate".into(),
            ));
        }
        Ok(Self(coords))
    }

    /// The origin of C^n.
    pub fn origin(arity: usize) -> Self {
        assert!(arity >= 1);
        Self(vec![Complex64::ZERO; arity])
    }

    /// Convenience constructor from (re, im) pairs.
    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        Self::new(pairs.iter().map(|&(re, im)| Complex64::new(re, im)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.0
    }

    fn check_arity(&self, expected: usize) -> Result<()> {
        if self.len() != expected {
            return Err(Error::ArityMismatch {
                expected,
                got: self.len(),
            });
        }
        Ok(())
    }

    /// The monomial z^alpha = prod z_j^{alpha_j}. Zero exponents contribute
    /// an exact factor 1, so the empty product convention holds even at the
    /// origin.
    pub fn monomial(&self, alpha: &MultiIndex) -> Result<Complex64> {
        self.check_arity(alpha.len())?;
        let mut acc = Complex64::ONE;
        for (z, &e) in self.0.iter().zip(alpha.entries()) {
            if e > 0 {
                acc *= z.powu(e);
            }
        }
        Ok(acc)
    }

    /// The point shadow: the tuple of coordinate moduli.
    pub fn moduli(&self) -> Vec<f64> {
        self.0.iter().map(|z| z.norm()).collect()
    }

    /// <z, w> = sum z_j * conj(w_j).
    pub fn hermitian(&self, other: &Self) -> Result<Complex64> {
        self.check_arity(other.len())?;
        Ok(self
            .0
            .iter()
            .zip(&other.0)
            .map(|(z, w)| z * w.conj())
            .sum())
    }

    /// Squared Euclidean norm <z, z>, always real and nonnegative.
    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Componentwise products zeta_j = z_j * conj(w_j).
    ///
    /// Since every series in this crate pairs z^alpha with conj(w)^alpha,
    /// the whole kernel depends on z and w only through these products.
    pub fn pair_products(&self, other: &Self) -> Result<Vec<Complex64>> {
        self.check_arity(other.len())?;
        Ok(self
            .0
            .iter()
            .zip(&other.0)
            .map(|(z, w)| z * w.conj())
            .collect())
    }

    /// Splits into two blocks, e.g. the (z, w) blocks of a D_{n,m} point.
    pub fn split(&self, at: usize) -> (Self, Self) {
        assert!(at >= 1 && at < self.len());
        (Self(self.0[..at].to_vec()), Self(self.0[at..].to_vec()))
    }
}

impl std::fmt::Debug for ComplexPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[")?;
        for (i, z) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}{:+}i", z.re, z.im)?;
        }
        write!(f, "]")
    }
}
