use std::f64::consts::PI;
use std::time::Instant;

use mesoatom::oracle::{verify_spectrum, ShootingConfig};
use mesoatom::params::ResolvedParams;
use mesoatom::quantum_numbers::{QuantumNumbers, DEFAULT_MAX_LEVELS};
use mesoatom::specialfn::{Chart, HarmonicSection};
use mesoatom::spectrum::{build_spectrum, Level};
use mesoatom::wavefunction::{charge_functional, sobolev_norm, RadialProfile};
use mesoatom::Error;
use serde::Serialize;

use crate::output::{float, to_csv, to_json};
use crate::settings::{Format, Provenance, Settings};

pub const SPECTRUM_HEADER: [&str; 9] = ["two_q", "l2", "n", "kappa", "N", "eps", "lambda", "energy_erg", "degeneracy"];
pub const WAVEFUNCTION_HEADER: [&str; 4] = ["chi", "x", "Q", "dQ_dchi"];
pub const HARMONICS_HEADER: [&str; 5] = ["chart", "theta", "phi", "re", "im"];

/// What a command produced.
pub struct Output {
    pub body: Vec<u8>,
    /// Written next to `--out` as `<out>.meta.json`, or to stderr.
    pub sidecar: Option<Vec<u8>>,
    /// Lines for stderr.
    pub notes: Vec<String>,
}

impl Output {
    fn body(body: Vec<u8>) -> Self {
        Output { body, sidecar: None, notes: Vec::new() }
    }
}

/// A failure with its exit status.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn config(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }

    pub fn runtime(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into() }
    }

    fn no_such_level(n: u64, two_l: u64) -> Self {
        Failure { code: 3, message: format!("NoSuchLevel: {}", Error::NoSuchLevel { n, two_l }) }
    }

    fn oracle(e: Error) -> Self {
        Failure { code: 4, message: format!("{}: {e}", e.name()) }
    }
}

fn library(e: Error) -> Failure {
    match e {
        Error::InvalidParams(_) | Error::NotHalfInteger { .. } | Error::CouplingTooLarge { .. } => Failure::config(e.to_string()),
        _ => Failure::runtime(format!("{}: {e}", e.name())),
    }
}

struct Run {
    params: ResolvedParams,
    provenance: Option<Provenance>,
}

impl Run {
    fn new(settings: &Settings) -> Result<Self, Failure> {
        Ok(Run {
            params: settings.params().resolve().map_err(library)?,
            provenance: settings.preset.map(|p| p.provenance()),
        })
    }

    /// Provenance goes inside JSON documents and to stderr alongside CSV.
    fn csv_notes(&self) -> Vec<String> {
        self.provenance
            .iter()
            .map(|p| format!("provenance: {}", serde_json::to_string(p).unwrap_or_default()))
            .collect()
    }
}

#[derive(Serialize)]
#[allow(non_snake_case)]
pub struct LevelRecord {
    pub two_q: i64,
    pub l2: u64,
    pub n: u64,
    pub kappa: f64,
    pub N: f64,
    pub eps: f64,
    pub lambda: f64,
    pub energy_erg: Option<f64>,
    pub degeneracy: u64,
}

impl From<&Level> for LevelRecord {
    fn from(l: &Level) -> Self {
        LevelRecord {
            two_q: l.qn.two_q,
            l2: l.qn.two_l,
            n: l.qn.n,
            kappa: l.kappa,
            N: l.principal,
            eps: l.eps,
            lambda: l.lambda,
            energy_erg: l.energy_erg,
            degeneracy: l.degeneracy,
        }
    }
}

impl LevelRecord {
    fn csv_row(&self) -> Vec<String> {
        vec![
            self.two_q.to_string(),
            self.l2.to_string(),
            self.n.to_string(),
            float(self.kappa),
            float(self.N),
            float(self.eps),
            float(self.lambda),
            self.energy_erg.map(float).unwrap_or_default(),
            self.degeneracy.to_string(),
        ]
    }
}

#[derive(Serialize)]
#[allow(non_snake_case)]
struct SpectrumDoc {
    #[serde(skip_serializing_if = "Option::is_none")]
    provenance: Option<Provenance>,
    spectrum_empty: bool,
    truncated: bool,
    N0: f64,
    q0_cap: f64,
    levels: Vec<LevelRecord>,
}

pub fn spectrum(settings: &Settings) -> Result<Output, Failure> {
    let run = Run::new(settings)?;
    let max = settings.max_levels.unwrap_or(DEFAULT_MAX_LEVELS);
    let spec = build_spectrum(&run.params.dimensionless, run.params.physical.as_ref(), max).map_err(library)?;
    let levels: Vec<LevelRecord> = spec.levels.iter().map(LevelRecord::from).collect();
    Ok(match settings.format() {
        Format::Csv => {
            let mut out = Output::body(to_csv(&SPECTRUM_HEADER, levels.iter().map(LevelRecord::csv_row)));
            out.notes = run.csv_notes();
            if spec.truncated {
                out.notes.push(format!("truncated: listing stopped after {max} levels"));
            }
            out
        }
        Format::Json => Output::body(to_json(&SpectrumDoc {
            provenance: run.provenance,
            spectrum_empty: levels.is_empty(),
            truncated: spec.truncated,
            N0: spec.bounds.n0_cap,
            q0_cap: spec.bounds.q0_cap,
            levels,
        })),
    })
}

#[derive(Serialize)]
#[allow(non_snake_case)]
struct CapsDoc {
    #[serde(skip_serializing_if = "Option::is_none")]
    provenance: Option<Provenance>,
    N0: f64,
    q0_cap: f64,
    /// No level exists for this charge product.
    empty: bool,
}

pub fn caps(settings: &Settings) -> Result<Output, Failure> {
    let run = Run::new(settings)?;
    let p = run.params.dimensionless;
    let bounds = mesoatom::quantum_numbers::spectrum_caps(p.mu, p.z_alpha);
    let empty = !bounds.admits(p.two_q);
    Ok(match settings.format() {
        Format::Csv => {
            let row = vec![float(bounds.n0_cap), float(bounds.q0_cap), empty.to_string()];
            let mut out = Output::body(to_csv(&["N0", "q0_cap", "empty"], [row]));
            out.notes = run.csv_notes();
            out
        }
        Format::Json => Output::body(to_json(&CapsDoc {
            provenance: run.provenance,
            N0: bounds.n0_cap,
            q0_cap: bounds.q0_cap,
            empty,
        })),
    })
}

#[derive(Serialize)]
struct Root {
    l2: u64,
    eps: f64,
}

#[derive(Serialize)]
struct Missing {
    n: u64,
    l2: u64,
}

#[derive(Serialize)]
struct VerifyDoc {
    #[serde(skip_serializing_if = "Option::is_none")]
    provenance: Option<Provenance>,
    levels_checked: usize,
    max_rel_err: f64,
    completeness_ok: bool,
    runtime_s: f64,
    extra_roots: Vec<Root>,
    missing: Vec<Missing>,
}

pub const DEFAULT_MATCH_TOL: f64 = 1e-6;

pub fn verify(settings: &Settings) -> Result<Output, Failure> {
    let run = Run::new(settings)?;
    let mut cfg = ShootingConfig::default();
    if let Some(pad) = settings.bracket_pad {
        cfg.bracket_pad = pad;
    }
    cfg.validate().map_err(library)?;
    let tol = settings.tol.unwrap_or(DEFAULT_MATCH_TOL);
    if !(tol > 0.0) {
        return Err(Failure::config(format!("tol must be positive, got {tol}")));
    }
    let start = Instant::now();
    let report = verify_spectrum(&run.params.dimensionless, &cfg, tol).map_err(Failure::oracle)?;
    let runtime_s = start.elapsed().as_secs_f64();
    let doc = VerifyDoc {
        provenance: run.provenance.clone(),
        levels_checked: report.levels_checked,
        max_rel_err: report.max_rel_err,
        completeness_ok: report.completeness_ok,
        runtime_s,
        extra_roots: report.extra_roots.iter().map(|&(l2, eps)| Root { l2, eps }).collect(),
        missing: report.missing.iter().map(|&(n, l2)| Missing { n, l2 }).collect(),
    };
    Ok(match settings.format() {
        Format::Csv => {
            let header = ["levels_checked", "max_rel_err", "completeness_ok", "runtime_s"];
            let row = vec![
                doc.levels_checked.to_string(),
                float(doc.max_rel_err),
                doc.completeness_ok.to_string(),
                float(doc.runtime_s),
            ];
            let mut out = Output::body(to_csv(&header, [row]));
            out.notes = run.csv_notes();
            out.notes.extend(doc.extra_roots.iter().map(|r| format!("extra root: 2l = {}, eps = {}", r.l2, float(r.eps))));
            out.notes.extend(doc.missing.iter().map(|m| format!("missing: n = {}, 2l = {}", m.n, m.l2)));
            out
        }
        Format::Json => Output::body(to_json(&doc)),
    })
}

#[derive(Serialize)]
struct WaveMeta {
    #[serde(skip_serializing_if = "Option::is_none")]
    provenance: Option<Provenance>,
    two_q: i64,
    l2: u64,
    n: u64,
    #[serde(rename = "C")]
    c: f64,
    kappa: f64,
    lambda: f64,
    eps: f64,
    sobolev_norm: f64,
    charge: f64,
}

#[derive(Serialize)]
#[allow(non_snake_case)]
struct SampleRecord {
    chi: f64,
    x: f64,
    Q: f64,
    dQ_dchi: f64,
}

#[derive(Serialize)]
struct WaveDoc {
    #[serde(flatten)]
    meta: WaveMeta,
    samples: Vec<SampleRecord>,
}

pub const DEFAULT_SAMPLES: usize = 2001;
pub const DEFAULT_CHI_RANGE: (f64, f64) = (1e-3, 15.0);

pub fn wavefunction(settings: &Settings) -> Result<Output, Failure> {
    let run = Run::new(settings)?;
    let params = run.params.dimensionless;
    let n = settings.n.ok_or_else(|| Failure::config("wavefunction needs --n"))?;
    let two_l = settings.l2.ok_or_else(|| Failure::config("wavefunction needs --l2"))?;
    let qn = QuantumNumbers::new(n, two_l, params.two_q).map_err(|_| Failure::no_such_level(n, two_l))?;
    let level = match Level::new(qn, &params, run.params.physical.as_ref()) {
        Ok(level) => level,
        Err(Error::OutOfSpectrum { .. }) => return Err(Failure::no_such_level(n, two_l)),
        Err(e) => return Err(library(e)),
    };
    let profile = RadialProfile::from_level(&level, &params).map_err(library)?;
    let count = settings.samples.unwrap_or(DEFAULT_SAMPLES);
    let chi_min = settings.chi_min.unwrap_or(DEFAULT_CHI_RANGE.0);
    let chi_max = settings.chi_max.unwrap_or(DEFAULT_CHI_RANGE.1);
    if !(chi_min > 0.0 && chi_max > chi_min && chi_max.is_finite()) || count < 2 {
        return Err(Failure::config(format!(
            "need 0 < chi-min < chi-max and at least 2 samples, got [{chi_min}, {chi_max}] with {count}"
        )));
    }
    let samples = profile.sample(chi_min, chi_max, count).map_err(library)?;
    let meta = WaveMeta {
        provenance: run.provenance.clone(),
        two_q: params.two_q,
        l2: two_l,
        n,
        c: profile.norm_const,
        kappa: profile.kappa,
        lambda: profile.lambda,
        eps: profile.eps,
        sobolev_norm: sobolev_norm(&profile).map_err(library)?,
        charge: charge_functional(&profile, profile.eps, &params).map_err(library)?,
    };
    let records = samples.iter().map(|s| SampleRecord { chi: s.chi, x: s.x, Q: s.q, dQ_dchi: s.dq_dchi });
    Ok(match settings.format() {
        Format::Csv => Output {
            body: to_csv(
                &WAVEFUNCTION_HEADER,
                records.map(|r| vec![float(r.chi), float(r.x), float(r.Q), float(r.dQ_dchi)]),
            ),
            sidecar: Some(to_json(&meta)),
            notes: Vec::new(),
        },
        Format::Json => Output::body(to_json(&WaveDoc { meta, samples: records.collect() })),
    })
}

#[derive(Serialize)]
struct HarmonicPoint {
    chart: &'static str,
    theta: f64,
    phi: f64,
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct HarmonicsDoc {
    two_q: i64,
    l2: u64,
    m2: i64,
    points: Vec<HarmonicPoint>,
}

pub const DEFAULT_GRID: (usize, usize) = (32, 64);

/// Values of `Y_qlm` in both charts on a `theta` midpoint grid (so neither
/// pole is sampled) times an equally spaced `phi` grid starting at 0.
pub fn harmonics(settings: &Settings) -> Result<Output, Failure> {
    let two_q = if settings.has_coupling_keys() {
        Run::new(settings)?.params.dimensionless.two_q
    } else {
        settings.two_q.unwrap_or(0)
    };
    let two_l = settings.l2.ok_or_else(|| Failure::config("harmonics needs --l2"))?;
    let two_m = settings.m2.ok_or_else(|| Failure::config("harmonics needs --m2"))?;
    let n_theta = settings.theta_samples.unwrap_or(DEFAULT_GRID.0);
    let n_phi = settings.phi_samples.unwrap_or(DEFAULT_GRID.1);
    if n_theta == 0 || n_phi == 0 {
        return Err(Failure::config("grid sizes must be positive"));
    }
    let mut points = Vec::with_capacity(2 * n_theta * n_phi);
    for chart in [Chart::Plus, Chart::Minus] {
        let y = HarmonicSection::new(two_q, two_l, two_m, chart).map_err(|e| Failure::config(e.to_string()))?;
        for i in 0..n_theta {
            let theta = PI * (i as f64 + 0.5) / n_theta as f64;
            for j in 0..n_phi {
                let phi = 2.0 * PI * j as f64 / n_phi as f64;
                let v = y.eval(theta, phi).map_err(library)?;
                points.push(HarmonicPoint { chart: chart.name(), theta, phi, re: v.re, im: v.im });
            }
        }
    }
    Ok(match settings.format() {
        Format::Csv => Output::body(to_csv(
            &HARMONICS_HEADER,
            points
                .iter()
                .map(|p| vec![p.chart.to_string(), float(p.theta), float(p.phi), float(p.re), float(p.im)]),
        )),
        Format::Json => Output::body(to_json(&HarmonicsDoc { two_q, l2: two_l, m2: two_m, points })),
    })
}
