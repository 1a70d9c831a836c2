// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use clap::Args;
use qbm_core::evolver::{
    evolve, EvolverConfig, GaussianPacket, Potential, PotentialSpec, BOUNDARY_MASS_LIMIT,
};
use qbm_core::slit::{discretize, AnalyticDensity, DensityMatrixGrid, SlitGeometry, SlitProfile};
use qbm_core::PhysParams;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};
use crate::io::{fmt_f64, read_json, OutDir};

#[derive(Debug, Args)]
pub struct EvolveArgs {
    /// Run JSON: {"params", "initial", "potential", "evolver"}. Lengths, times and
    /// energies in the same coherent units as params; see README for the schema.
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory for snapshot_<step>.csv, trace.csv and the manifest.
    #[arg(long)]
    pub out: PathBuf,
}

/// Initial density matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialState {
    /// Pure Gaussian packet: center, sigma [length], wavenumber [1/length].
    GaussianPacket {
        center: f64,
        sigma: f64,
        wavenumber: f64,
    },
    /// The two-slit state sampled on the grid.
    TwoSlit {
        geometry: SlitGeometry,
        #[serde(default)]
        profile: SlitProfile,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolveRun {
    pub params: PhysParams,
    pub initial: InitialState,
    #[serde(default)]
    pub potential: PotentialSpec,
    pub evolver: EvolverConfig,
}

pub fn resolve(args: &EvolveArgs) -> CliResult<EvolveRun> {
    let mut run: EvolveRun = read_json(&args.config)?;
    // The padding rule needs the largest group speed; a packet knows its own.
    if let InitialState::GaussianPacket {
        center,
        sigma,
        wavenumber,
    } = run.initial
    {
        let speed = GaussianPacket::new(center, sigma, wavenumber)?.speed(&run.params);
        run.evolver.ballistic_speed = run.evolver.ballistic_speed.max(speed);
    }
    Ok(run)
}

fn initial_grid(run: &EvolveRun) -> CliResult<DensityMatrixGrid> {
    let axis = run.evolver.grid.axis()?;
    Ok(match run.initial {
        InitialState::GaussianPacket {
            center,
            sigma,
            wavenumber,
        } => GaussianPacket::new(center, sigma, wavenumber)?.to_grid(&axis),
        InitialState::TwoSlit { geometry, profile } => {
            discretize(&AnalyticDensity::two_slit_with_profile(&geometry, profile), &axis)?
        }
    })
}

pub fn execute(run: &EvolveRun, out: Option<&mut OutDir>) -> CliResult<Value> {
    let out = out.ok_or_else(|| CliError::config("evolve needs --out"))?;
    let rho0 = initial_grid(run)?;
    let potential = Potential::from_spec(&run.potential, rho0.axis())?;
    let evo = evolve(&rho0, &potential, &run.params, &run.evolver)?;

    for snap in &evo.snapshots {
        let axis = snap.rho.axis();
        let n = axis.len;
        let rows = (0..n * n).map(|k| {
            let (i, j) = (k / n, k % n);
            let v = snap.rho.get(i, j);
            vec![
                fmt_f64(axis.point(i)),
                fmt_f64(axis.point(j)),
                fmt_f64(v.re),
                fmt_f64(v.im),
            ]
        });
        out.write_csv(
            &format!("snapshot_{:06}.csv", snap.step),
            "x_plus,x_minus,re,im",
            rows,
        )?;
    }
    let rows = evo.traces.iter().map(|s| {
        vec![
            fmt_f64(s.t),
            fmt_f64(s.trace.re),
            fmt_f64(s.trace.im),
            fmt_f64(s.predicted),
        ]
    });
    out.write_csv("trace.csv", "t,re_trace,im_trace,predicted", rows)?;

    let last = evo.traces.last().expect("final sample recorded");
    let edge = evo.traces.iter().map(|s| s.boundary_mass).fold(0.0, f64::max);
    if edge > BOUNDARY_MASS_LIMIT {
        eprintln!("warning: boundary mass reached {edge:.3e}; wrap-around may contaminate the result");
    }
    Ok(json!({
        "dt": evo.dt,
        "steps": evo.steps,
        "snapshots": evo.snapshots.len(),
        "final_trace": last.trace.re,
        "predicted": last.predicted,
        "max_hermiticity": evo.traces.iter().map(|s| s.hermiticity).fold(0.0, f64::max),
        "max_boundary_mass": edge,
    }))
}
