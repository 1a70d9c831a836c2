// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use crate::commands::{
    evolve::EvolveRun, flux::FluxRun, langevin::LangevinRun, pattern::PatternRun, regime::RegimeRun,
};

pub const MANIFEST_NAME: &str = "manifest.json";

/// A fully resolved run: every default is materialized, so replaying it
/// needs nothing but this value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "subcommand", content = "config", rename_all = "snake_case")]
pub enum RunConfig {
    Pattern(PatternRun),
    Evolve(EvolveRun),
    Langevin(LangevinRun),
    Flux(FluxRun),
    Regime(RegimeRun),
}

impl RunConfig {
    pub fn seed(&self) -> Option<u64> {
        match self {
            RunConfig::Langevin(run) => Some(run.seed),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    #[serde(flatten)]
    pub run: RunConfig,
    pub version: String,
    /// Wall-clock seconds.
    pub duration_s: f64,
    pub outputs: Vec<String>,
    pub seed: Option<u64>,
}
