//! Sparse polynomials in several complex variables, used as verification
//! test functions.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;
use rand::RngCore;

use crate::error::Result;
use crate::index::{degree_shell, MultiIndex};
use crate::point::ComplexPoint;

/// A polynomial as a coefficient map multi-index -> complex coefficient.
#[derive(Clone, Debug)]
pub struct Polynomial {
    arity: usize,
    terms: BTreeMap<MultiIndex, Complex64>,
}

impl Polynomial {
    pub fn monomial(idx: &MultiIndex, coeff: Complex64) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(idx.clone(), coeff);
        Self {
            arity: idx.len(),
            terms,
        }
    }

    pub fn constant(arity: usize, coeff: Complex64) -> Self {
        Self::monomial(&MultiIndex::zeros(arity), coeff)
    }

    pub fn with_term(mut self, idx: MultiIndex, coeff: Complex64) -> Self {
        assert_eq!(idx.len(), self.arity, "term arity mismatch");
        *self.terms.entry(idx).or_insert(Complex64::ZERO) += coeff;
        self
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Complex64)> {
        self.terms.iter()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(MultiIndex::degree).max().unwrap_or(0)
    }

    pub fn eval(&self, z: &ComplexPoint) -> Result<Complex64> {
        let mut acc = Complex64::ZERO;
        for (idx, coeff) in &self.terms {
            acc += coeff * z.monomial(idx)?;
        }
        Ok(acc)
    }

    /// A random sparse polynomial: `n_terms` terms at uniformly chosen
    /// degrees <= max_degree, coefficients uniform in the complex unit
    /// square.
    pub fn random_sparse(
        arity: usize,
        max_degree: u32,
        n_terms: usize,
        rng: &mut dyn RngCore,
    ) -> Self {
        let mut poly = Self {
            arity,
            terms: BTreeMap::new(),
        };
        for _ in 0..n_terms {
            let d = rng.random_range(0..=max_degree);
            let shell = degree_shell(arity, d);
            let idx = shell[rng.random_range(0..shell.len())].clone();
            let coeff = Complex64::new(
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            );
            poly = poly.with_term(idx, coeff);
        }
        poly
    }

    pub fn describe(&self) -> String {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(idx, c)| format!("({:.3}{:+.3}i) z^{idx}", c.re, c.im))
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}
