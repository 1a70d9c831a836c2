// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use clap::Args;
use qbm_core::stochastic::{
    default_window, equipartition, estimate_diffusion, simulate_langevin, LangevinConfig,
};
use qbm_core::PhysParams;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};
use crate::io::{fmt_f64, OutDir};

#[derive(Debug, Args)]
pub struct LangevinArgs {
    /// Parameter JSON {"mass", "friction", "hbar", "kBT"}; unit values if omitted.
    #[arg(long)]
    pub params: Option<PathBuf>,
    /// Time step [time]; must be below M/(10 R).
    #[arg(long, default_value_t = 0.01)]
    pub dt: f64,
    /// Number of steps per trajectory.
    #[arg(long, default_value_t = 10_000)]
    pub steps: usize,
    /// Number of independent trajectories.
    #[arg(long, default_value_t = 10_000)]
    pub ensembles: usize,
    /// RNG seed; trajectory i draws from stream i of this seed.
    #[arg(long, default_value_t = 2024)]
    pub seed: u64,
    /// Initial position [length].
    #[arg(long, default_value_t = 0.0)]
    pub x0: f64,
    /// Initial velocity [length/time].
    #[arg(long, default_value_t = 0.0)]
    pub v0: f64,
    /// Record every N-th step in msd.csv.
    #[arg(long, default_value_t = 100)]
    pub stride: usize,
    /// MSD fit window start [time]; defaults to 10 M/R.
    #[arg(long)]
    pub window_start: Option<f64>,
    /// MSD fit window end [time]; defaults to 100 M/R.
    #[arg(long)]
    pub window_end: Option<f64>,
    /// Output directory for msd.csv, diffusion.json and the manifest.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LangevinRun {
    pub params: PhysParams,
    pub dt: f64,
    pub steps: usize,
    pub ensembles: usize,
    pub seed: u64,
    pub x0: f64,
    pub v0: f64,
    pub stride: usize,
    pub window: (f64, f64),
}

pub fn resolve(args: &LangevinArgs) -> CliResult<LangevinRun> {
    let params = super::load_params(args.params.as_deref())?;
    let (lo, hi) = default_window(&params)?;
    Ok(LangevinRun {
        params,
        dt: args.dt,
        steps: args.steps,
        ensembles: args.ensembles,
        seed: args.seed,
        x0: args.x0,
        v0: args.v0,
        stride: args.stride,
        window: (args.window_start.unwrap_or(lo), args.window_end.unwrap_or(hi)),
    })
}

pub fn execute(run: &LangevinRun, out: Option<&mut OutDir>) -> CliResult<Value> {
    let out = out.ok_or_else(|| CliError::config("langevin needs --out"))?;
    let cfg = LangevinConfig {
        dt: run.dt,
        n_steps: run.steps,
        n_ensembles: run.ensembles,
        seed: run.seed,
        x0: run.x0,
        v0: run.v0,
        record_stride: run.stride,
    };
    let ens = simulate_langevin(&cfg, &run.params)?;
    let est = estimate_diffusion(&ens, run.window, &run.params)?;
    let d_einstein = run.params.einstein_diffusion()?;
    let eq = equipartition(&ens, &run.params);

    let rows = ens
        .msd()
        .into_iter()
        .map(|(t, msd, se)| vec![fmt_f64(t), fmt_f64(msd), fmt_f64(se)]);
    out.write_csv("msd.csv", "t,msd,stderr", rows)?;
    let summary = json!({
        "D_hat": est.d_hat,
        "stderr": est.stderr,
        "D_einstein": d_einstein,
        "z_score": est.z_score(d_einstein),
        "window": est.window,
        "n_trajectories": est.n_trajectories,
        "equipartition": eq,
    });
    out.write_json("diffusion.json", &summary)?;
    Ok(summary)
}
