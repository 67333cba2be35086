//! Run settings: one struct read from both the command line and a JSON file.

use std::path::PathBuf;

use clap::{Args, ValueEnum};
use mesoatom::params::{cgs, ParamsConfig};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
pub enum Preset {
    #[serde(rename = "pion-cosmological")]
    #[value(name = "pion-cosmological")]
    PionCosmological,
}

/// Every key of a config file, each with a matching `--flag`.
#[derive(Debug, Clone, Default, PartialEq, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    /// Curvature-scaled mass m0 a c / hbar.
    #[arg(long, global = true, help_heading = "Parameters")]
    pub mu: Option<f64>,
    /// Coulomb coupling Z alpha, below 1/2.
    #[arg(long, global = true, help_heading = "Parameters")]
    pub z_alpha: Option<f64>,
    /// Doubled charge product 2 e gm / (hbar c).
    #[arg(long, global = true, allow_negative_numbers = true, help_heading = "Parameters")]
    pub two_q: Option<i64>,
    /// Curvature radius in cm.
    #[arg(long, global = true, help_heading = "Parameters")]
    pub a_cm: Option<f64>,
    /// Particle mass in grams.
    #[arg(long, global = true, help_heading = "Parameters")]
    pub m0_g: Option<f64>,
    /// Nuclear charge number.
    #[arg(long = "Z", global = true, help_heading = "Parameters")]
    #[serde(rename = "Z")]
    pub z: Option<u32>,
    /// Magnetic charge of the nucleus, esu.
    #[arg(long, global = true, allow_negative_numbers = true, help_heading = "Parameters")]
    pub gm: Option<f64>,
    /// Fill in a, Z and m0 for a pion around a unit charge at cosmological curvature.
    #[arg(long, global = true, help_heading = "Parameters")]
    pub preset: Option<Preset>,

    /// Stop enumerating after this many levels.
    #[arg(long, global = true, help_heading = "Output")]
    pub max_levels: Option<usize>,
    #[arg(long, global = true, help_heading = "Output")]
    pub format: Option<Format>,
    /// Write here instead of standard output.
    #[arg(long, global = true, help_heading = "Output")]
    pub out: Option<PathBuf>,

    /// Relative distance at which an oracle root counts as matching a level.
    #[arg(long, global = true, help_heading = "verify")]
    pub tol: Option<f64>,
    /// Gap kept between the oracle window and the continuum edges.
    #[arg(long, global = true, help_heading = "verify")]
    pub bracket_pad: Option<f64>,

    #[arg(long, global = true, help_heading = "wavefunction")]
    pub n: Option<u64>,
    /// Doubled angular momentum 2l.
    #[arg(long, global = true, help_heading = "wavefunction / harmonics")]
    pub l2: Option<u64>,
    /// Doubled azimuthal number 2m.
    #[arg(long, global = true, allow_negative_numbers = true, help_heading = "harmonics")]
    pub m2: Option<i64>,
    #[arg(long, global = true, help_heading = "wavefunction")]
    pub samples: Option<usize>,
    #[arg(long, global = true, help_heading = "wavefunction")]
    pub chi_min: Option<f64>,
    #[arg(long, global = true, help_heading = "wavefunction")]
    pub chi_max: Option<f64>,
    #[arg(long, global = true, help_heading = "harmonics")]
    pub theta_samples: Option<usize>,
    #[arg(long, global = true, help_heading = "harmonics")]
    pub phi_samples: Option<usize>,
}

macro_rules! overlay {
    ($base:expr, $top:expr, $($field:ident),*) => {
        Settings { $($field: $top.$field.clone().or($base.$field.clone()),)* }
    };
}

impl Settings {
    /// Fields set in `top` win.
    pub fn overlaid(&self, top: &Settings) -> Settings {
        overlay!(
            self, top, mu, z_alpha, two_q, a_cm, m0_g, z, gm, preset, max_levels, format, out, tol,
            bracket_pad, n, l2, m2, samples, chi_min, chi_max, theta_samples, phi_samples
        )
    }

    /// Parameter block, with preset values underneath explicit ones.
    pub fn params(&self) -> ParamsConfig {
        let own = ParamsConfig {
            mu: self.mu,
            z_alpha: self.z_alpha,
            two_q: self.two_q,
            a_cm: self.a_cm,
            m0_g: self.m0_g,
            z: self.z,
            gm: self.gm,
        };
        match self.preset {
            Some(preset) => preset.params().merged_with(&own),
            None => own,
        }
    }

    pub fn has_coupling_keys(&self) -> bool {
        self.preset.is_some()
            || self.mu.is_some()
            || self.z_alpha.is_some()
            || self.a_cm.is_some()
            || self.m0_g.is_some()
            || self.z.is_some()
            || self.gm.is_some()
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or(Format::Json)
    }
}

impl Preset {
    pub fn params(self) -> ParamsConfig {
        match self {
            Preset::PionCosmological => ParamsConfig {
                a_cm: Some(cgs::COSMOLOGICAL_RADIUS_CM),
                m0_g: Some(cgs::PION_MASS_G),
                z: Some(1),
                ..Default::default()
            },
        }
    }

    pub fn provenance(self) -> Provenance {
        match self {
            Preset::PionCosmological => Provenance {
                preset: "pion-cosmological",
                a_cm: cgs::COSMOLOGICAL_RADIUS_CM,
                m0_g: cgs::PION_MASS_G,
                z: 1,
                note: "a = 1e28 cm (order of the present curvature radius); \
                       m0 = charged pion, 139.57039 MeV/c^2; Z = 1",
            },
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub preset: &'static str,
    pub a_cm: f64,
    pub m0_g: f64,
    #[serde(rename = "Z")]
    pub z: u32,
    pub note: &'static str,
}
