//! `mesoatom`: spectra, wavefunctions and oracle checks from the command line.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod output;
mod settings;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{Failure, Output};
use settings::Settings;

#[derive(Parser)]
#[command(name = "mesoatom", version, about = "Bound states of a charged scalar around a dyon on hyperbolic space")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON file with any of the flag names as keys (underscores for dashes); flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(flatten)]
    settings: Settings,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// List every bound level.
    Spectrum,
    /// Sample the charge-normalized radial function of one level.
    Wavefunction,
    /// Tabulate a monopole harmonic in both charts.
    Harmonics,
    /// Check the closed-form levels against the shooting oracle.
    Verify,
    /// Report the caps N0 and |q|0.
    Caps,
}

fn load(path: &Path) -> Result<Settings, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::config(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::config(format!("bad config {}: {e}", path.display())))
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    fs::write(path, bytes).map_err(|e| Failure::runtime(format!("cannot write {}: {e}", path.display())))
}

fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

fn emit(out: Output, target: Option<&Path>) -> Result<(), Failure> {
    let mut stderr = io::stderr().lock();
    for note in &out.notes {
        let _ = writeln!(stderr, "{note}");
    }
    match target {
        Some(path) => {
            write(path, &out.body)?;
            if let Some(meta) = &out.sidecar {
                write(&sidecar_path(path), meta)?;
            }
        }
        None => {
            io::stdout()
                .lock()
                .write_all(&out.body)
                .map_err(|e| Failure::runtime(format!("cannot write output: {e}")))?;
            if let Some(meta) = &out.sidecar {
                let _ = stderr.write_all(meta);
            }
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    let settings = match &cli.config {
        Some(path) => load(path)?.overlaid(&cli.settings),
        None => cli.settings,
    };
    let out = match cli.command {
        Command::Spectrum => commands::spectrum(&settings)?,
        Command::Wavefunction => commands::wavefunction(&settings)?,
        Command::Harmonics => commands::harmonics(&settings)?,
        Command::Verify => commands::verify(&settings)?,
        Command::Caps => commands::caps(&settings)?,
    };
    emit(out, settings.out.as_deref())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code as u8)
        }
    }
}
