//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! A criterion listed in `KNOWN_FAILURES` is still checked and still prints
//! FAIL when it fails; it just does not turn the exit status red. Every other
//! failure does.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

#[path = "../../core/tests/support/mod.rs"]
mod support;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use mesoatom::oracle::{find_eigenvalues, verify_spectrum, ShootingConfig};
use mesoatom::params::{cgs, from_physical, DimensionlessParams, PhysicalParams};
use mesoatom::quantum_numbers::{QuantumNumbers, DEFAULT_MAX_LEVELS};
use mesoatom::spectrum::{build_spectrum, hypergeometric_indices, Level};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

const BANK_SEED: u64 = 2024;
const BANK_SIZE: usize = 200;

/// Criteria whose stated bound contradicts the closed form they test.
const KNOWN_FAILURES: [(u32, &str); 2] = [
    (2, "at a = 1e28 cm with the pion mass, |q|0 = N0^2 - N0 + (Z alpha)^2 is about 5e38, below the stated 1e39"),
    (4, "eps -> sqrt(mu^2 + 1) > mu as N -> N0, so levels near the cap sit above mu while still bound"),
];

type Outcome = Result<String, String>;

fn bank() -> Vec<DimensionlessParams> {
    support::bank(BANK_SEED, BANK_SIZE)
}

fn oracle_config() -> ShootingConfig {
    ShootingConfig { bracket_pad: 1e-12, ..ShootingConfig::default() }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let cfg = oracle_config();
    let (mut levels, mut worst) = (0, 0.0f64);
    for p in bank() {
        let r = verify_spectrum(&p, &cfg, 1e-6).map_err(|e| format!("{p:?}: {e}"))?;
        if !r.completeness_ok || !(r.max_rel_err < 1e-6) {
            return Err(format!("{p:?}: extra {:?}, missing {:?}, max err {:e}", r.extra_roots, r.missing, r.max_rel_err));
        }
        levels += r.levels_checked;
        worst = worst.max(r.max_rel_err);
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(120) {
        return Err(format!("took {elapsed:.1?}"));
    }
    Ok(format!("{BANK_SIZE} sets, {levels} levels, worst relative error {worst:.1e}, no extra roots, {elapsed:.1?}"))
}

fn criterion_2() -> Outcome {
    let phys = PhysicalParams::new(cgs::COSMOLOGICAL_RADIUS_CM, cgs::PION_MASS_G, 1, 0.0).map_err(|e| e.to_string())?;
    let p = from_physical(&phys).map_err(|e| e.to_string())?;
    // recomputed here from the constants, not read from the library's caps
    let mu = cgs::PION_MASS_G * cgs::COSMOLOGICAL_RADIUS_CM * cgs::C / cgs::HBAR;
    let za = cgs::E * cgs::E / (cgs::HBAR * cgs::C);
    let n0 = (za * ((mu * mu + 1.0).sqrt() - za)).sqrt();
    let q0 = n0 * n0 - n0 + za * za;
    let lib = build_spectrum(&p, Some(&phys), 10).map_err(|e| e.to_string())?.bounds;
    if (lib.n0_cap / n0 - 1.0).abs() > 1e-12 || (lib.q0_cap / q0 - 1.0).abs() > 1e-12 {
        return Err(format!("library caps {} {} disagree with {n0} {q0}", lib.n0_cap, lib.q0_cap));
    }
    let cli: Value = serde_json::from_slice(&run_cli(&["caps", "--preset", "pion-cosmological"])?).map_err(|e| e.to_string())?;
    if cli["N0"].as_f64() != Some(lib.n0_cap) || cli["q0_cap"].as_f64() != Some(lib.q0_cap) {
        return Err(format!("CLI caps {cli} differ from the library"));
    }
    let summary = format!("N0 = {n0:.3e}, |q|0 = {q0:.3e}");
    let n0_ok = 1e19 < n0 && n0 < 1e21;
    let q0_ok = 1e39 < q0 && q0 < 1e41;
    match (n0_ok, q0_ok) {
        (true, true) => Ok(summary),
        _ => Err(format!("{summary}; N0 in (1e19, 1e21): {n0_ok}, |q|0 in (1e39, 1e41): {q0_ok}")),
    }
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let za = 1.0 / 137.036;
    let mu = 1e12;
    let p = DimensionlessParams::new(mu, za, 0).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    let mut count = 0;
    for two_l in (0..=8).step_by(2) {
        for n in 0..6 {
            let qn = QuantumNumbers::new(n, two_l, 0).map_err(|e| e.to_string())?;
            let lvl = Level::new(qn, &p, None).map_err(|e| e.to_string())?;
            let l = 0.5 * two_l as f64;
            let kappa = ((l + 0.5).powi(2) - za * za).sqrt();
            let principal = n as f64 + kappa + 0.5;
            let flat = (1.0 + za * za / (principal * principal)).powf(-0.5);
            let err = (lvl.eps / mu / flat - 1.0).abs();
            if !(err < 1e-8) {
                return Err(format!("n={n} 2l={two_l}: E/m0c^2 = {} vs flat {flat}", lvl.eps / mu));
            }
            worst = worst.max(err);
            count += 1;
        }
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(1) {
        return Err(format!("took {elapsed:.1?}"));
    }
    Ok(format!("{count} levels at mu = 1e12, worst relative {worst:.1e}"))
}

fn criterion_4() -> Outcome {
    let (mut levels, mut above_mu, mut worst_a) = (0usize, Vec::new(), 0.0f64);
    for p in bank() {
        let spec = build_spectrum(&p, None, DEFAULT_MAX_LEVELS).map_err(|e| e.to_string())?;
        for lvl in &spec.levels {
            levels += 1;
            if !(lvl.eps > p.z_alpha) {
                return Err(format!("{p:?} {:?}: eps {} not above Z alpha", lvl.qn, lvl.eps));
            }
            let idx = hypergeometric_indices(lvl.kappa, lvl.lambda, lvl.eps, p.z_alpha);
            let defect = (idx.a_plus + lvl.qn.n as f64).abs();
            if !(defect < 1e-9) {
                return Err(format!("{p:?} {:?}: A+ + n = {defect:e}", lvl.qn));
            }
            worst_a = worst_a.max(defect);
            if !(lvl.eps < p.mu) {
                above_mu.push(format!("mu={:.4} za={:.4} 2q={} n={} 2l={}: eps-mu={:.2e}", p.mu, p.z_alpha, p.two_q, lvl.qn.n, lvl.qn.two_l, lvl.eps - p.mu));
            }
        }
    }
    let summary = format!("{levels} levels, all above Z alpha, worst |A+ + n| = {worst_a:.1e}");
    if above_mu.is_empty() {
        Ok(summary)
    } else {
        Err(format!("{summary}; {} levels have eps >= mu, e.g. {}", above_mu.len(), above_mu[0]))
    }
}

/// Emptiness by the lowest candidate level: `n = 0`, `l = |q|` has the
/// smallest `N`, so some level exists exactly when it lies below `N0`.
fn lowest_level_below_cap(p: &DimensionlessParams) -> bool {
    let q = 0.5 * p.two_q.unsigned_abs() as f64;
    let kappa = ((q + 0.5).powi(2) - p.z_alpha * p.z_alpha - q * q).sqrt();
    let n0 = (p.z_alpha * ((p.mu * p.mu + 1.0).sqrt() - p.z_alpha)).sqrt();
    kappa + 0.5 < n0
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    let mut empties = Vec::new();
    let mut checked = 0;
    for k in 0..4000 {
        let mu: f64 = rng.gen_range(0.1..60.0);
        let za = if k % 2 == 0 { rng.gen_range(1e-4..0.49) } else { rng.gen_range(1e-4f64..0.3 / mu).min(0.49) };
        let p = DimensionlessParams::new(mu, za, rng.gen_range(-9..=9)).map_err(|e| e.to_string())?;
        let n0 = (za * ((mu * mu + 1.0).sqrt() - za)).sqrt();
        let q0 = n0 * n0 - n0 + za * za;
        let q = 0.5 * p.two_q.unsigned_abs() as f64;
        let by_threshold = n0 <= 0.5 || q >= q0;
        let by_enumeration = build_spectrum(&p, None, DEFAULT_MAX_LEVELS).map_err(|e| e.to_string())?.levels.is_empty();
        let by_lowest = !lowest_level_below_cap(&p);
        if by_threshold != by_enumeration || by_threshold != by_lowest {
            return Err(format!("{p:?}: threshold {by_threshold}, enumeration {by_enumeration}, lowest level {by_lowest}"));
        }
        checked += 1;
        if by_threshold && empties.len() < 20 {
            let small_n0 = n0 <= 0.5;
            let wanted = if empties.len() < 10 { small_n0 } else { !small_n0 };
            if wanted {
                empties.push(p);
            }
        }
    }
    if empties.len() < 20 {
        return Err(format!("only {} empty sets drawn", empties.len()));
    }
    let cfg = oracle_config();
    for p in &empties {
        let r = verify_spectrum(p, &cfg, 1e-6).map_err(|e| format!("{p:?}: {e}"))?;
        if r.levels_checked != 0 || !r.extra_roots.is_empty() {
            return Err(format!("{p:?}: oracle found {:?}", r.extra_roots));
        }
        let lowest = p.two_q_abs();
        for two_l in (lowest..=lowest + 8).step_by(2) {
            let roots = find_eigenvalues(two_l, p, &cfg).map_err(|e| format!("{p:?} 2l={two_l}: {e}"))?;
            if !roots.is_empty() {
                return Err(format!("{p:?} 2l={two_l}: oracle roots {roots:?}"));
            }
        }
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(60) {
        return Err(format!("took {elapsed:.1?}"));
    }
    Ok(format!("{checked} sets agree three ways; oracle finds no root on 20 empty sets (10 with N0 <= 1/2); {elapsed:.1?}"))
}

fn criterion_6() -> Outcome {
    let parts = [
        ("Jacobi", support::jacobi_agreement(11, 2000)?),
        ("orthonormality", support::orthonormality()?),
        ("overlap", support::chart_overlap(4)?),
        ("Legendre", support::legendre_agreement()?),
    ];
    Ok(parts.iter().map(|(k, v)| format!("{k}: {v}")).collect::<Vec<_>>().join("; "))
}

fn criterion_7() -> Outcome {
    let (mut levels, mut cross) = (0, 0);
    for (p, lvls) in support::nonempty_bank(BANK_SEED, 25) {
        for lvl in &lvls {
            cross += support::wavefunction_level(&p, lvl)? as usize;
            levels += 1;
        }
    }
    Ok(format!("{levels} levels: residual, nodes, Sobolev, energy; {cross} also integrated independently in chi"))
}

fn binary() -> PathBuf {
    PathBuf::from(env!("CARGO_BIN_EXE_mesoatom"))
}

fn run_cli(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(binary()).args(args).output().map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?} exited {}: {}", out.status, String::from_utf8_lossy(&out.stderr)));
    }
    Ok(out.stdout)
}

fn param_args(p: &DimensionlessParams) -> Vec<String> {
    vec![
        "--mu".into(),
        format!("{:e}", p.mu),
        "--z-alpha".into(),
        format!("{:e}", p.z_alpha),
        "--two-q".into(),
        p.two_q.to_string(),
    ]
}

fn run_with(command: &str, p: &DimensionlessParams, extra: &[&str]) -> Result<Vec<u8>, String> {
    let mut args: Vec<String> = vec![command.into()];
    args.extend(param_args(p));
    args.extend(extra.iter().map(|s| s.to_string()));
    run_cli(&args.iter().map(String::as_str).collect::<Vec<_>>())
}

fn without_runtime(bytes: &[u8]) -> Result<Value, String> {
    let mut v: Value = serde_json::from_slice(bytes).map_err(|e| e.to_string())?;
    v.as_object_mut().ok_or("not an object")?.remove("runtime_s");
    Ok(v)
}

/// CSV rows and JSON records of one spectrum, compared field by field after
/// parsing; floats must be bit-identical.
fn same_records(json: &[u8], csv_bytes: &[u8]) -> Result<usize, String> {
    let doc: Value = serde_json::from_slice(json).map_err(|e| e.to_string())?;
    let records = doc["levels"].as_array().ok_or("no levels array")?;
    let mut reader = csv::Reader::from_reader(csv_bytes);
    let header: Vec<String> = reader.headers().map_err(|e| e.to_string())?.iter().map(String::from).collect();
    let rows: Vec<csv::StringRecord> = reader.records().collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    if rows.len() != records.len() {
        return Err(format!("{} CSV rows vs {} JSON records", rows.len(), records.len()));
    }
    if doc["spectrum_empty"].as_bool() != Some(records.is_empty()) {
        return Err("spectrum_empty marker disagrees with the record count".into());
    }
    for (row, rec) in rows.iter().zip(records) {
        let obj = rec.as_object().ok_or("record is not an object")?;
        if obj.len() != header.len() {
            return Err(format!("record keys {:?} vs header {header:?}", obj.keys().collect::<Vec<_>>()));
        }
        for (key, cell) in header.iter().zip(row.iter()) {
            let value = &obj[key];
            let same = match value {
                Value::Null => cell.is_empty(),
                Value::Number(n) if n.is_f64() => cell.parse::<f64>().ok().map(f64::to_bits) == n.as_f64().map(f64::to_bits),
                Value::Number(n) => cell.parse::<i64>().ok() == n.as_i64(),
                _ => false,
            };
            if !same {
                return Err(format!("{key}: JSON {value} vs CSV {cell:?}"));
            }
        }
    }
    Ok(records.len())
}

fn criterion_8() -> Outcome {
    let sets = bank();
    let mut records = 0;
    for p in &sets {
        let json_a = run_with("spectrum", p, &[])?;
        let json_b = run_with("spectrum", p, &[])?;
        let csv_a = run_with("spectrum", p, &["--format", "csv"])?;
        let csv_b = run_with("spectrum", p, &["--format", "csv"])?;
        if json_a != json_b || csv_a != csv_b {
            return Err(format!("{p:?}: spectrum output differs between runs"));
        }
        records += same_records(&json_a, &csv_a).map_err(|e| format!("{p:?}: {e}"))?;
    }

    let example = support::dp(10.0, 0.3, 0);
    for extra in [&["--format", "csv"][..], &[]] {
        let wf: Vec<&str> = [&["--n", "0", "--l2", "0"][..], extra].concat();
        if run_with("wavefunction", &example, &wf)? != run_with("wavefunction", &example, &wf)? {
            return Err("wavefunction output differs between runs".into());
        }
        let h: Vec<&str> = [&["--two-q", "2", "--l2", "4", "--m2", "-2"][..], extra].concat();
        if run_cli(&[&["harmonics"][..], &h].concat())? != run_cli(&[&["harmonics"][..], &h].concat())? {
            return Err("harmonics output differs between runs".into());
        }
        if run_with("caps", &example, extra)? != run_with("caps", &example, extra)? {
            return Err("caps output differs between runs".into());
        }
    }
    for p in sets.iter().take(5) {
        let a = without_runtime(&run_with("verify", p, &[])?)?;
        let b = without_runtime(&run_with("verify", p, &[])?)?;
        if a != b {
            return Err(format!("{p:?}: verify reports differ beyond runtime_s"));
        }
    }
    Ok(format!(
        "{} sets, {records} records identical across runs and formats; wavefunction, harmonics, caps byte-identical; verify identical apart from runtime_s",
        sets.len()
    ))
}

fn main() {
    let criteria: [(u32, fn() -> Outcome); 8] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
    ];
    let known: BTreeMap<u32, &str> = KNOWN_FAILURES.into_iter().collect();
    let mut unexpected = 0;
    for (id, check) in criteria {
        match check() {
            Ok(detail) => println!("criterion {id}: PASS  {detail}"),
            Err(detail) => {
                println!("criterion {id}: FAIL  {detail}");
                match known.get(&id) {
                    Some(why) => println!("             expected: {why}"),
                    None => unexpected += 1,
                }
            }
        }
    }
    if unexpected > 0 {
        std::process::exit(1);
    }
}
