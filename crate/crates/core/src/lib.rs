//! Discrete spectrum and wavefunctions of a charged scalar particle bound to
//! a nucleus carrying electric and magnetic charge, on three-dimensional
//! space of constant negative curvature.
//!
//! The closed-form spectrum lives in [`spectrum`]; [`oracle`] recomputes it
//! independently by shooting on the radial equation.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod oracle;
pub mod params;
pub mod quadrature;
pub mod quantum_numbers;
pub mod specialfn;
pub mod spectrum;
pub mod wavefunction;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/parameters.md")]
    pub mod parameters {}
    #[doc = include_str!("../../../book/src/spectrum.md")]
    pub mod spectrum {}
    #[doc = include_str!("../../../book/src/wavefunctions.md")]
    pub mod wavefunctions {}
    #[doc = include_str!("../../../book/src/harmonics.md")]
    pub mod harmonics {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    pub mod oracle {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
