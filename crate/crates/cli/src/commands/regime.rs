// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use clap::Args;
use qbm_core::params::DEFAULT_REGIME_THRESHOLD;
use qbm_core::PhysParams;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::CliResult;
use crate::io::OutDir;

#[derive(Debug, Args)]
pub struct RegimeArgs {
    /// Parameter JSON {"mass", "friction", "hbar", "kBT"} in one coherent unit system.
    #[arg(long)]
    pub params: PathBuf,
    /// Ratio T/T_γ beyond which the regime is classical (its inverse marks quantum) [dimensionless].
    #[arg(long, default_value_t = DEFAULT_REGIME_THRESHOLD)]
    pub threshold: f64,
    /// Optional directory for regime.json and the run manifest.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegimeRun {
    pub params: PhysParams,
    pub threshold: f64,
}

pub fn resolve(args: &RegimeArgs) -> CliResult<RegimeRun> {
    Ok(RegimeRun {
        params: super::load_params(Some(&args.params))?,
        threshold: args.threshold,
    })
}

pub fn execute(run: &RegimeRun, out: Option<&mut OutDir>) -> CliResult<Value> {
    let p = &run.params;
    let regime = p.classify_regime(run.threshold)?;
    let summary = json!({
        "gamma": p.gamma(),
        "T_gamma_energy": p.crossover_temperature(),
        "D": p.einstein_diffusion()?,
        "ratio": regime.ratio,
        "regime": regime.tag,
    });
    if let Some(out) = out {
        out.write_json("regime.json", &summary)?;
    }
    Ok(summary)
}
