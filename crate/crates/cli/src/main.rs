// SPDX-License-Identifier: Apache-2.0

//! `qbm`: command-line driver for the doubled-coordinate Brownian motion
//! library. Each subcommand resolves its inputs into a config, runs it, and
//! records the config in `manifest.json` next to its outputs.

mod commands;
mod error;
mod io;
mod manifest;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use commands::{evolve, flux, langevin, pattern, regime};
use error::{CliError, CliResult};
use io::{read_json, OutDir};
use manifest::{RunConfig, RunManifest, MANIFEST_NAME};

const UNITS_NOTE: &str = "Units: every quantity is in one coherent system chosen by the caller \
(mass M, friction R [mass/time], ħ [energy·time], kBT [energy]); ħ defaults to 1.\n\
Exit codes: 0 success, 2 config error, 3 numerical failure, 4 instability, 1 output i/o error.";

#[derive(Debug, Parser)]
#[command(name = "qbm", version, about = "Quantum Brownian motion in doubled coordinates", after_help = UNITS_NOTE)]
struct Cli {
    /// Worker threads; results do not depend on it [count].
    #[arg(long, global = true, env = "QBM_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Two-slit screen pattern by one route, or a comparison of two routes.
    #[command(after_help = UNITS_NOTE)]
    Pattern(pattern::PatternArgs),
    /// Evolve a density matrix under the Brownian master equation.
    #[command(after_help = UNITS_NOTE)]
    Evolve(evolve::EvolveArgs),
    /// Langevin ensemble: mean-square displacement and diffusion estimate.
    #[command(after_help = UNITS_NOTE)]
    Langevin(langevin::LangevinArgs),
    /// Dissipative flux between two paths and its interference phase.
    #[command(after_help = UNITS_NOTE)]
    Flux(flux::FluxArgs),
    /// Damping rate, crossover temperature and regime of a parameter set.
    #[command(after_help = UNITS_NOTE)]
    Regime(regime::RegimeArgs),
    /// Re-run the config stored in a manifest.
    #[command(after_help = UNITS_NOTE)]
    Replay(ReplayArgs),
}

#[derive(Debug, clap::Args)]
struct ReplayArgs {
    /// manifest.json written by an earlier run.
    #[arg(long)]
    manifest: PathBuf,
    /// Output directory for the replayed run.
    #[arg(long)]
    out: PathBuf,
}

fn resolve(command: &Command) -> CliResult<(RunConfig, Option<PathBuf>)> {
    Ok(match command {
        Command::Pattern(a) => (RunConfig::Pattern(pattern::resolve(a)?), Some(a.out.clone())),
        Command::Evolve(a) => (RunConfig::Evolve(evolve::resolve(a)?), Some(a.out.clone())),
        Command::Langevin(a) => (RunConfig::Langevin(langevin::resolve(a)?), Some(a.out.clone())),
        Command::Flux(a) => (RunConfig::Flux(flux::resolve(a)?), a.out.clone()),
        Command::Regime(a) => (RunConfig::Regime(regime::resolve(a)?), a.out.clone()),
        Command::Replay(a) => {
            let m: RunManifest = read_json(&a.manifest)?;
            (m.run, Some(a.out.clone()))
        }
    })
}

fn run(cli: &Cli) -> CliResult<()> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::config("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::config(format!("thread pool: {e}")))?;
    }
    let (config, out) = resolve(&cli.command)?;
    let start = Instant::now();
    let mut out = out.as_deref().map(OutDir::new).transpose()?;
    let summary = commands::execute(&config, out.as_mut())?;
    if let Some(out) = out.as_mut() {
        let manifest = RunManifest {
            seed: config.seed(),
            run: config,
            version: env!("CARGO_PKG_VERSION").to_string(),
            duration_s: start.elapsed().as_secs_f64(),
            outputs: out.written().to_vec(),
        };
        out.write_json(MANIFEST_NAME, &manifest)?;
    }
    let text = serde_json::to_string_pretty(&summary).expect("summary serializes");
    // A closed pipe (`qbm ... | head`) is not an error.
    let _ = writeln!(std::io::stdout(), "{text}");
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qbm: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
