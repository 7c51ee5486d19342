//! Multi-indices and their graded enumeration.
//!
//! A multi-index is an ordered tuple of nonnegative integer exponents. The
//! ordering used everywhere in this crate is graded lexicographic: indices
//! compare first by total degree and then lexicographically, so a
//! `BTreeMap<MultiIndex, _>` iterates shell by shell.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfn::ln_factorial;

/// An ordered tuple of nonnegative integer exponents, length >= 1.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidParameter(
                "multi-index must have length >= 1".into(),
            ));
        }
        Ok(Self(entries))
    }

    /// The zero index of the given length.
    pub fn zeros(arity: usize) -> Self {
        assert!(arity >= 1, "multi-index arity must be >= 1");
        Self(vec![0; arity])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    /// Total degree |alpha|.
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// ln(alpha!) = sum of ln Gamma(alpha_j + 1).
    pub fn log_factorial(&self) -> f64 {
        self.0.iter().map(|&e| ln_factorial(e)).sum()
    }

    /// The index alpha + e_axis.
    pub fn bump(&self, axis: usize) -> Self {
        let mut v = self.0.clone();
        v[axis] += 1;
        Self(v)
    }

    /// Componentwise sum; errors on mismatched lengths.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::ArityMismatch {
                expected: self.len(),
                got: other.len(),
            });
        }
        Ok(Self(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        ))
    }

    /// Splits the index at `at`, e.g. a D_{n,m} index into its (alpha, beta)
    /// blocks.
    pub fn split(&self, at: usize) -> (Self, Self) {
        assert!(at >= 1 && at < self.len());
        (
            Self(self.0[..at].to_vec()),
            Self(self.0[at..].to_vec()),
        )
    }

    /// Concatenation of two index blocks.
    pub fn concat(&self, other: &Self) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Self(v)
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// All multi-indices of the given length with |alpha| = degree, in
/// lexicographic (and hence graded-lex) order. The count is
/// C(degree + arity - 1, arity - 1).
pub fn degree_shell(arity: usize, degree: u32) -> Vec<MultiIndex> {
    assert!(arity >= 1);
    let mut out = Vec::with_capacity(shell_size(arity, degree) as usize);
    let mut current = vec![0u32; arity];
    fill_shell(&mut out, &mut current, 0, degree);
    out
}

fn fill_shell(out: &mut Vec<MultiIndex>, current: &mut Vec<u32>, pos: usize, remaining: u32) {
    if pos + 1 == current.len() {
        current[pos] = remaining;
        out.push(MultiIndex(current.clone()));
        return;
    }
    for e in 0..=remaining {
        current[pos] = e;
        fill_shell(out, current, pos + 1, remaining - e);
    }
}

/// Number of multi-indices of the given length and degree,
/// C(degree + arity - 1, arity - 1), exactly in integer arithmetic.
pub fn shell_size(arity: usize, degree: u32) -> u64 {
    let k = arity as u64 - 1;
    let mut c = 1u64;
    for i in 1..=k {
        // stays integral at every step: c is C(degree + i - 1, i - 1) * (degree + i) before the division
        c = c * (degree as u64 + i) / i;
    }
    c
}

/// All multi-indices with |alpha| <= max_degree, graded-lex order.
pub fn indices_up_to(arity: usize, max_degree: u32) -> Vec<MultiIndex> {
    (0..=max_degree)
        .flat_map(|d| degree_shell(arity, d))
        .collect()
}
