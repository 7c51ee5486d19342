//! Weighted Bergman kernels on Reinhardt domains.
//!
//! The kernel of a weighted Bergman space over a Reinhardt domain containing
//! the origin is a power series K(z, w) = sum over multi-indices of
//! I(alpha)^{-1} z^alpha conj(w)^alpha, where I(alpha) is the weighted
//! squared norm of the monomial z^alpha. This crate evaluates such kernels
//! two independent ways and cross-checks them:
//!
//! * the moment-series route: I(alpha) by closed form or adaptive
//!   quadrature, the series summed shell by shell ([`series`]);
//! * closed forms for three weighted families (Gaussian-type weights on
//!   C^n, the generalized Fock-Bargmann-Hartogs domain, and the V_eta
//!   domain), all behind the [`family::KernelFamily`] trait and selectable
//!   by name through [`family::FamilyRegistry`].
//!
//! The [`verify`] module turns the defining properties of a reproducing
//! kernel (reproduction, monomial orthogonality, the Parseval identity)
//! into numerical checks with deterministic or seeded Monte-Carlo schemes.

pub mod error;
pub mod family;
pub mod index;
pub mod moments;
pub mod point;
pub mod sampling;
pub mod series;
pub mod shadow;
pub mod specfn;
pub mod verify;
pub mod weight;

pub use error::{Error, Result};
pub use family::{default_registry, FamilyRegistry, KernelEvaluator, KernelFamily};
pub use index::{degree_shell, indices_up_to, shell_size, MultiIndex};
pub use moments::{MomentEntry, MomentMethod, MomentTable};
pub use point::ComplexPoint;
pub use series::{multinomial_collapse, KernelValue, SeriesKernel};
pub use shadow::ShadowRegion;
pub use verify::VerificationReport;
pub use weight::RadialWeight;
