//! Closed-form discrete energy levels.
//!
//! With `N = n + kappa + 1/2` below the cap `N0`, the dimensionless energy is
//!
//! ```text
//! eps = Z alpha + N sqrt(mu^2 + 1 - N^2 - (Z alpha)^2) / sqrt(N^2 + (Z alpha)^2)
//! ```
//!
//! and the decay exponent `lambda = sqrt(mu^2 + 1 - eps^2)` simplifies to
//! `Z alpha sqrt(mu^2 + 1 - N^2 - (Z alpha)^2) / sqrt(N^2 + (Z alpha)^2) - N`,
//! which is what gets evaluated: it has no cancellation between numbers of
//! size `mu^2`. Every level is checked against the quantization condition
//! `A+ = -n` before it is returned.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{from_physical, DimensionlessParams, PhysicalParams};
use crate::quantum_numbers::{enumerate_levels, QuantumNumbers, SpectrumBounds, spectrum_caps};

/// Tolerance of the back-substitution check, scaled by `max(1, N)`.
pub const QUANTIZATION_TOL: f64 = 1e-9;

/// One entry of the discrete spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub qn: QuantumNumbers,
    pub kappa: f64,
    /// Principal number `N`.
    pub principal: f64,
    /// Dimensionless energy `E a / (hbar c)`.
    pub eps: f64,
    pub lambda: f64,
    /// Energy in erg, when physical parameters were supplied.
    pub energy_erg: Option<f64>,
    /// `2l + 1`.
    pub degeneracy: u64,
}

impl Level {
    pub fn new(
        qn: QuantumNumbers,
        params: &DimensionlessParams,
        physical: Option<&PhysicalParams>,
    ) -> Result<Level> {
        let kappa = qn.kappa(params.z_alpha)?;
        let principal = qn.principal(params.z_alpha)?;
        let eps = epsilon_of(principal, params.mu, params.z_alpha)?;
        let lambda = lambda_of(principal, params.mu, params.z_alpha)?;
        let idx = hypergeometric_indices(kappa, lambda, eps, params.z_alpha);
        let defect = idx.a_plus + qn.n as f64;
        if defect.abs() > QUANTIZATION_TOL * principal.max(1.0) {
            return Err(Error::DomainError(format!(
                "quantization check failed for {qn:?}: A+ + n = {defect:e}"
            )));
        }
        let energy_erg = physical.map(|p| energy_of(principal, p)).transpose()?;
        Ok(Level {
            qn,
            kappa,
            principal,
            eps,
            lambda,
            energy_erg,
            degeneracy: qn.degeneracy(),
        })
    }

    /// Whether `eps < mu`, i.e. the energy lies below the rest energy.
    pub fn below_rest_energy(&self, mu: f64) -> bool {
        self.eps < mu
    }
}

fn check_principal(principal: f64, mu: f64, z_alpha: f64) -> Result<f64> {
    let cap = spectrum_caps(mu, z_alpha).n0_cap;
    if !(principal > 0.0 && principal < cap) {
        return Err(Error::OutOfSpectrum { principal, cap });
    }
    let radicand = mu * mu + 1.0 - principal * principal - z_alpha * z_alpha;
    assert!(radicand > 0.0, "N < N0 must keep the energy radicand positive");
    Ok(radicand.sqrt() / (principal * principal + z_alpha * z_alpha).sqrt())
}

/// Dimensionless energy of the level with principal number `principal`.
pub fn epsilon_of(principal: f64, mu: f64, z_alpha: f64) -> Result<f64> {
    let ratio = check_principal(principal, mu, z_alpha)?;
    Ok(z_alpha + principal * ratio)
}

/// Decay exponent `lambda = sqrt(mu^2 + 1 - eps^2)` at the energy of
/// [`epsilon_of`].
pub fn lambda_of(principal: f64, mu: f64, z_alpha: f64) -> Result<f64> {
    let ratio = check_principal(principal, mu, z_alpha)?;
    Ok(z_alpha * ratio - principal)
}

/// Energy in erg evaluated directly in CGS quantities.
pub fn energy_of(principal: f64, p: &PhysicalParams) -> Result<f64> {
    let d = from_physical(p)?;
    check_principal(principal, d.mu, d.z_alpha)?;
    let za = d.z_alpha;
    let hc_a = p.hbar * p.c / p.a;
    let rest = p.m0 * p.c * p.c;
    let coulomb = p.z as f64 * p.e * p.e / p.a;
    let inner = rest * rest + (1.0 - principal * principal - za * za) * hc_a * hc_a;
    Ok(coulomb + principal * inner.sqrt() / (principal * principal + za * za).sqrt())
}

/// Parameters of the regular hypergeometric solution `F(A+, B+; C+; x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypergeometricIndices {
    pub a_plus: f64,
    pub b_plus: f64,
    pub c_plus: f64,
}

pub fn hypergeometric_indices(kappa: f64, lambda: f64, eps: f64, z_alpha: f64) -> HypergeometricIndices {
    let shift = 4.0 * z_alpha * (eps - z_alpha);
    let root = (lambda * lambda + shift).sqrt();
    // lambda + 1 - root rewritten as 1 - shift / (lambda + root)
    let small = if lambda + root > 0.0 {
        1.0 - shift / (lambda + root)
    } else {
        lambda + 1.0 - root
    };
    HypergeometricIndices {
        a_plus: kappa + 0.5 * small,
        b_plus: kappa + 0.5 * (lambda + 1.0 + root),
        c_plus: 2.0 * kappa + 1.0,
    }
}

/// Result of [`build_spectrum`].
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    /// Sorted by `eps` ascending.
    pub levels: Vec<Level>,
    pub truncated: bool,
    pub bounds: SpectrumBounds,
}

pub fn build_spectrum(
    params: &DimensionlessParams,
    physical: Option<&PhysicalParams>,
    max_count: usize,
) -> Result<Spectrum> {
    let listing = enumerate_levels(params, max_count);
    let mut levels = listing
        .levels
        .iter()
        .map(|&qn| Level::new(qn, params, physical))
        .collect::<Result<Vec<_>>>()?;
    levels.sort_by(|a, b| a.eps.total_cmp(&b.eps).then(a.qn.two_l.cmp(&b.qn.two_l)));
    Ok(Spectrum {
        levels,
        truncated: listing.truncated,
        bounds: listing.bounds,
    })
}
