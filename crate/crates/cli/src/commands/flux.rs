// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use clap::Args;
use qbm_core::flux::{constructive_condition, interference_phase, oriented_area_between, PlanarPath};
use qbm_core::PhysParams;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::CliResult;
use crate::io::{read_path_csv, OutDir};

#[derive(Debug, Args)]
pub struct FluxArgs {
    /// First path, CSV with header x_plus,x_minus [length]. Alone, it is read as a closed loop.
    #[arg(long)]
    pub path1: PathBuf,
    /// Second path with the same endpoints as the first [length].
    #[arg(long)]
    pub path2: Option<PathBuf>,
    /// Parameter JSON {"mass", "friction", "hbar", "kBT"}; unit values if omitted.
    #[arg(long)]
    pub params: Option<PathBuf>,
    /// Optional directory for flux.json and the run manifest.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Vertices are stored inline so a manifest replays without the CSVs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FluxRun {
    pub params: PhysParams,
    pub path1: Vec<(f64, f64)>,
    pub path2: Option<Vec<(f64, f64)>>,
}

pub fn resolve(args: &FluxArgs) -> CliResult<FluxRun> {
    Ok(FluxRun {
        params: super::load_params(args.params.as_deref())?,
        path1: read_path_csv(&args.path1)?,
        path2: args.path2.as_deref().map(read_path_csv).transpose()?,
    })
}

/// A lone loop may list its first vertex again at the end.
fn closed_loop(mut vertices: Vec<(f64, f64)>) -> CliResult<PlanarPath> {
    if vertices.len() > 2 && vertices.first() == vertices.last() {
        vertices.pop();
    }
    Ok(PlanarPath::closed(vertices)?)
}

pub fn execute(run: &FluxRun, out: Option<&mut OutDir>) -> CliResult<Value> {
    let (p1, p2) = match &run.path2 {
        Some(second) => (
            PlanarPath::open(run.path1.clone())?,
            PlanarPath::open(second.clone())?,
        ),
        None => {
            let lp = closed_loop(run.path1.clone())?;
            let start = lp.vertices()[0];
            (lp, PlanarPath::open(vec![start, start])?)
        }
    };
    let sigma = oriented_area_between(&p1, &p2)?;
    let phase = interference_phase(&p1, &p2, &run.params)?;
    let q = constructive_condition(sigma, &run.params);
    let summary = json!({
        "sigma": sigma,
        "phase": phase,
        "n": q.n,
        "residual": q.residual,
    });
    if let Some(out) = out {
        out.write_json("flux.json", &summary)?;
    }
    Ok(summary)
}
