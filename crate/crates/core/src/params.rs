//! Physical inputs and the dimensionless couplings derived from them.
//!
//! Everything downstream of this module works with three numbers: the
//! curvature-scaled mass `mu = m0 a c / hbar`, the Coulomb coupling
//! `z_alpha = Z e^2 / (hbar c)` and the doubled charge product
//! `two_q = 2 e gm / (hbar c)`, which must be an integer. CGS units appear
//! only at this boundary.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// CGS values of the constants used at the unit boundary.
pub mod cgs {
    /// Reduced Planck constant, erg s.
    pub const HBAR: f64 = 1.054_571_817e-27;
    /// Speed of light, cm/s.
    pub const C: f64 = 2.997_924_58e10;
    /// Elementary charge, esu.
    pub const E: f64 = 4.803_204_712_570_263e-10;
    /// Grams per MeV/c^2.
    pub const GRAM_PER_MEV: f64 = 1.782_661_921e-27;
    /// Charged pion mass, grams (139.57039 MeV/c^2).
    pub const PION_MASS_G: f64 = 139.570_39 * GRAM_PER_MEV;
    /// Present cosmological curvature scale used by the `pion-cosmological` preset, cm.
    pub const COSMOLOGICAL_RADIUS_CM: f64 = 1e28;
}

/// Relative tolerance for the Dirac quantization check.
pub const HALF_INTEGER_TOL: f64 = 1e-9;

/// Physical parameters in CGS units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    /// Curvature radius, cm.
    pub a: f64,
    /// Particle mass, g.
    pub m0: f64,
    /// Nuclear charge number.
    pub z: u32,
    /// Elementary charge, esu.
    pub e: f64,
    /// Magnetic charge of the nucleus.
    pub gm: f64,
    pub hbar: f64,
    pub c: f64,
}

impl PhysicalParams {
    /// Builds parameters with the CGS constants from [`cgs`].
    pub fn new(a: f64, m0: f64, z: u32, gm: f64) -> Result<Self> {
        let p = PhysicalParams {
            a,
            m0,
            z,
            e: cgs::E,
            gm,
            hbar: cgs::HBAR,
            c: cgs::C,
        };
        p.validate()?;
        Ok(p)
    }

    /// Same as [`PhysicalParams::new`] but with the magnetic charge chosen so
    /// that `2 e gm / (hbar c) = two_q` exactly.
    pub fn with_two_q(a: f64, m0: f64, z: u32, two_q: i64) -> Result<Self> {
        let gm = 0.5 * two_q as f64 * cgs::HBAR * cgs::C / cgs::E;
        Self::new(a, m0, z, gm)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64, name: &str| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidParams(format!("{name} must be positive and finite, got {v}")))
            }
        };
        positive(self.a, "a")?;
        positive(self.m0, "m0")?;
        positive(self.e, "e")?;
        positive(self.hbar, "hbar")?;
        positive(self.c, "c")?;
        if self.z < 1 {
            return Err(Error::InvalidParams("Z must be at least 1".into()));
        }
        if !self.gm.is_finite() {
            return Err(Error::InvalidParams("gm must be finite".into()));
        }
        self.two_q().map(|_| ())
    }

    /// The charge product `q = e gm / (hbar c)`, unrounded.
    pub fn charge_product(&self) -> f64 {
        self.e * self.gm / (self.hbar * self.c)
    }

    /// `2q` rounded to the nearest integer, if it is one within tolerance.
    pub fn two_q(&self) -> Result<i64> {
        let doubled = 2.0 * self.charge_product();
        let nearest = doubled.round();
        if (doubled - nearest).abs() > HALF_INTEGER_TOL * doubled.abs().max(1.0) {
            return Err(Error::NotHalfInteger {
                value: self.charge_product(),
            });
        }
        Ok(nearest as i64)
    }

    /// `hbar c / a`, the energy unit of the dimensionless problem.
    pub fn energy_unit(&self) -> f64 {
        self.hbar * self.c / self.a
    }
}

/// The dimensionless couplings of the radial problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimensionlessParams {
    pub mu: f64,
    pub z_alpha: f64,
    pub two_q: i64,
}

impl DimensionlessParams {
    pub fn new(mu: f64, z_alpha: f64, two_q: i64) -> Result<Self> {
        if !(mu.is_finite() && mu > 0.0) {
            return Err(Error::InvalidParams(format!("mu must be positive, got {mu}")));
        }
        if !(z_alpha.is_finite() && z_alpha >= 0.0) {
            return Err(Error::InvalidParams(format!(
                "z_alpha must be non-negative, got {z_alpha}"
            )));
        }
        if z_alpha >= 0.5 {
            return Err(Error::CouplingTooLarge { z_alpha });
        }
        Ok(DimensionlessParams { mu, z_alpha, two_q })
    }

    /// The charge product `q` as a float.
    pub fn q(&self) -> f64 {
        0.5 * self.two_q as f64
    }

    /// `|2q|`.
    pub fn two_q_abs(&self) -> u64 {
        self.two_q.unsigned_abs()
    }
}

/// Converts CGS inputs to the dimensionless couplings.
pub fn from_physical(p: &PhysicalParams) -> Result<DimensionlessParams> {
    p.validate()?;
    let mu = p.m0 * p.a * p.c / p.hbar;
    let z_alpha = p.z as f64 * p.e * p.e / (p.hbar * p.c);
    DimensionlessParams::new(mu, z_alpha, p.two_q()?)
}

/// `E = eps * hbar c / a`.
pub fn epsilon_to_energy(eps: f64, p: &PhysicalParams) -> f64 {
    eps * p.energy_unit()
}

/// `eps = E a / (hbar c)`.
pub fn energy_to_epsilon(energy: f64, p: &PhysicalParams) -> f64 {
    energy / p.energy_unit()
}

/// JSON parameter block.
///
/// Either the dimensionless keys `mu`, `z_alpha` or the physical keys
/// `a_cm`, `m0_g`, `Z` must be present; `two_q` (or `gm` in physical mode)
/// fixes the magnetic charge. When both forms are present the dimensionless
/// one wins.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z_alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub two_q: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a_cm: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m0_g: Option<f64>,
    #[serde(rename = "Z", default, skip_serializing_if = "Option::is_none")]
    pub z: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gm: Option<f64>,
}

/// Parameters after resolving a [`ParamsConfig`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolvedParams {
    pub dimensionless: DimensionlessParams,
    /// Present only in physical mode.
    pub physical: Option<PhysicalParams>,
}

impl ParamsConfig {
    /// Overlays `other` on top of `self`; fields set in `other` win.
    pub fn merged_with(&self, other: &ParamsConfig) -> ParamsConfig {
        ParamsConfig {
            mu: other.mu.or(self.mu),
            z_alpha: other.z_alpha.or(self.z_alpha),
            two_q: other.two_q.or(self.two_q),
            a_cm: other.a_cm.or(self.a_cm),
            m0_g: other.m0_g.or(self.m0_g),
            z: other.z.or(self.z),
            gm: other.gm.or(self.gm),
        }
    }

    pub fn resolve(&self) -> Result<ResolvedParams> {
        if self.mu.is_some() || self.z_alpha.is_some() {
            let (Some(mu), Some(z_alpha)) = (self.mu, self.z_alpha) else {
                return Err(Error::InvalidParams(
                    "dimensionless mode needs both mu and z_alpha".into(),
                ));
            };
            let two_q = self.two_q.unwrap_or(0);
            return Ok(ResolvedParams {
                dimensionless: DimensionlessParams::new(mu, z_alpha, two_q)?,
                physical: None,
            });
        }
        let (Some(a), Some(m0), Some(z)) = (self.a_cm, self.m0_g, self.z) else {
            return Err(Error::InvalidParams(
                "need either {mu, z_alpha} or {a_cm, m0_g, Z}".into(),
            ));
        };
        let physical = match (self.two_q, self.gm) {
            (Some(two_q), _) => PhysicalParams::with_two_q(a, m0, z, two_q)?,
            (None, Some(gm)) => PhysicalParams::new(a, m0, z, gm)?,
            (None, None) => PhysicalParams::new(a, m0, z, 0.0)?,
        };
        Ok(ResolvedParams {
            dimensionless: from_physical(&physical)?,
            physical: Some(physical),
        })
    }
}
