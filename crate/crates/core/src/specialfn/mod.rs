//! Special functions: Jacobi polynomials, the Gauss hypergeometric series and
//! monopole spherical harmonics.

pub mod harmonics;
pub mod hypergeometric;
pub mod jacobi;

pub use harmonics::{overlap_phase, Chart, HarmonicSection, SphereQuadrature};
pub use hypergeometric::gauss_2f1;
pub use jacobi::{jacobi_eval, JacobiPoly};
