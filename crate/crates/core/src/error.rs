//! Error type shared by all numeric operations in this crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A multi-index, point, weight or shadow of the wrong length was passed.
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Shadow coordinates are moduli and must be nonnegative.
    #[error("negative coordinate at axis {axis}: {value}")]
    NegativeCoordinate { axis: usize, value: f64 },

    /// Adaptive quadrature ran out of subdivision budget. The partial
    /// estimate and its error estimate are carried so callers can decide
    /// whether the result is still usable.
    #[error("quadrature did not converge ({context}): value {log_value:.6e} (log), rel. error {rel_error:.3e} after {evals} evaluations")]
    QuadratureBudget {
        context: String,
        log_value: f64,
        rel_error: f64,
        evals: u64,
    },

    /// The closed-form kernel denominator phi came numerically too close
    /// to zero for a principal-branch power to be trustworthy.
    #[error("kernel denominator nearly singular: |phi| = {abs_phi:.3e}")]
    NearSingular { abs_phi: f64 },

    /// Re(phi) <= 0 puts the principal branch outside its validity region.
    #[error("principal branch undefined: Re(phi) = {re_phi:.3e} <= 0")]
    BranchAmbiguity { re_phi: f64 },

    /// Evaluation was requested at a point outside the (open) domain.
    #[error("point outside domain: {0}")]
    OutsideDomain(String),

    #[error("unknown kernel family '{0}'")]
    UnknownFamily(String),

    /// A Monte-Carlo scheme was requested without a seed, or with an
    /// unsupported target.
    #[error("invalid scheme: {0}")]
    InvalidScheme(String),
}
