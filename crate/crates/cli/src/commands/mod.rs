// SPDX-License-Identifier: Apache-2.0

pub mod evolve;
pub mod flux;
pub mod langevin;
pub mod pattern;
pub mod regime;

use std::path::Path;

use qbm_core::PhysParams;
use serde_json::Value;

use crate::error::CliResult;
use crate::io::{read_json, OutDir};
use crate::manifest::RunConfig;

/// Physical parameters from an optional JSON file, unit values otherwise.
pub(crate) fn load_params(path: Option<&Path>) -> CliResult<PhysParams> {
    match path {
        Some(p) => read_json(p),
        None => Ok(PhysParams::default()),
    }
}

/// Run a resolved config. Files go to `out` when given; the returned value
/// is the summary printed on stdout.
pub fn execute(run: &RunConfig, out: Option<&mut OutDir>) -> CliResult<Value> {
    match run {
        RunConfig::Pattern(r) => pattern::execute(r, out),
        RunConfig::Evolve(r) => evolve::execute(r, out),
        RunConfig::Langevin(r) => langevin::execute(r, out),
        RunConfig::Flux(r) => flux::execute(r, out),
        RunConfig::Regime(r) => regime::execute(r, out),
    }
}
