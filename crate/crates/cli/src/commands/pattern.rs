// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use clap::{Args, ValueEnum};
use qbm_core::diffraction::{
    default_samples, pattern_closed_form, pattern_closed_form_derived, pattern_damped_rescaled,
    pattern_exact, pattern_farfield, DiffractionPattern, DEFAULT_KX_SPAN, DEFAULT_SAMPLES,
};
use qbm_core::kernel::pattern_damped_kernel;
use qbm_core::quadrature::QuadConfig;
use qbm_core::slit::{AnalyticDensity, PatternParams, SlitGeometry, SlitProfile};
use qbm_core::PhysParams;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};
use crate::io::{fmt_f64, read_json, OutDir};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PatternMethod {
    /// Fresnel-kernel quadrature over the slits.
    Exact,
    /// Linearized-phase integral, evaluated analytically.
    Farfield,
    /// Printed closed form (4βK/π) cos²(Kx) sinc²(βKx).
    Closed,
    /// Closed form of the far-field integral, (βK/π) cos²(Kx) sinc²(βKx/2).
    ClosedDerived,
    /// e^{−γt} times the far field at the renormalized time τ (T = 0).
    DampedRescaled,
    /// Quadrature of the full zero-temperature damped kernel.
    DampedKernel,
    /// Damped kernel with coth(γt) set to 1 in the cross term.
    #[value(name = "damped-paper50a")]
    #[serde(rename = "damped-paper50a")]
    DampedSimplified,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileArg {
    TopHat,
    Gaussian,
}

impl From<ProfileArg> for SlitProfile {
    fn from(p: ProfileArg) -> Self {
        match p {
            ProfileArg::TopHat => SlitProfile::TopHat,
            ProfileArg::Gaussian => SlitProfile::Gaussian,
        }
    }
}

#[derive(Debug, Args)]
pub struct PatternArgs {
    /// Geometry JSON {"w", "d", "D", "v"}: slit width, half-separation, screen distance [length], speed [length/time].
    #[arg(long)]
    pub geometry: PathBuf,
    /// Parameter JSON {"mass", "friction", "hbar", "kBT"}; unit values if omitted.
    #[arg(long)]
    pub params: Option<PathBuf>,
    /// Pattern route.
    #[arg(long, value_enum, default_value = "farfield", conflicts_with = "compare")]
    pub method: PatternMethod,
    /// Two routes `A,B` to compare; writes compare.csv with |P_A − P_B| / max|P_B|.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub compare: Option<Vec<PatternMethod>>,
    /// Time after the slits [time]; defaults to the flight time D/v.
    #[arg(long)]
    pub t: Option<f64>,
    /// Number of screen positions.
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    pub samples: usize,
    /// Screen positions span K·x ∈ [−span, span] [dimensionless, radians].
    #[arg(long, default_value_t = DEFAULT_KX_SPAN)]
    pub kx_span: f64,
    /// Slit aperture profile.
    #[arg(long, value_enum, default_value = "top-hat")]
    pub profile: ProfileArg,
    /// Absolute quadrature tolerance [probability density units].
    #[arg(long, default_value_t = QuadConfig::default().abs_tol)]
    pub abs_tol: f64,
    /// Relative quadrature tolerance [dimensionless].
    #[arg(long, default_value_t = QuadConfig::default().rel_tol)]
    pub rel_tol: f64,
    /// Output directory for pattern.csv (or compare.csv) and the manifest.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatternRun {
    pub geometry: SlitGeometry,
    pub params: PhysParams,
    /// One method, or two to compare.
    pub methods: Vec<PatternMethod>,
    pub t: f64,
    pub samples: usize,
    pub kx_span: f64,
    pub profile: ProfileArg,
    pub quad: QuadConfig,
}

pub fn resolve(args: &PatternArgs) -> CliResult<PatternRun> {
    let geometry: SlitGeometry = read_json(&args.geometry)?;
    let params = super::load_params(args.params.as_deref())?;
    if let Some(pair) = &args.compare {
        if pair.len() != 2 {
            return Err(CliError::config(format!(
                "--compare takes two methods A,B, got {}",
                pair.len()
            )));
        }
    }
    Ok(PatternRun {
        geometry,
        params,
        methods: args.compare.clone().unwrap_or_else(|| vec![args.method]),
        t: args.t.unwrap_or_else(|| geometry.flight_time()),
        samples: args.samples,
        kx_span: args.kx_span,
        profile: args.profile,
        quad: QuadConfig {
            abs_tol: args.abs_tol,
            rel_tol: args.rel_tol,
            ..QuadConfig::default()
        },
    })
}

fn validate(run: &PatternRun) -> CliResult<()> {
    if !(run.t.is_finite() && run.t > 0.0) {
        return Err(CliError::config(format!(
            "t must be finite and > 0, got {}",
            run.t
        )));
    }
    if run.samples == 0 {
        return Err(CliError::config("samples must be at least 1"));
    }
    if !(run.kx_span.is_finite() && run.kx_span > 0.0) {
        return Err(CliError::config(format!(
            "kx_span must be finite and > 0, got {}",
            run.kx_span
        )));
    }
    if !matches!(run.methods.len(), 1 | 2) {
        return Err(CliError::config("give one method or two to compare"));
    }
    Ok(())
}

fn compute(
    run: &PatternRun,
    method: PatternMethod,
    xs: &[f64],
    pp: &PatternParams,
) -> CliResult<DiffractionPattern> {
    let rho = AnalyticDensity::two_slit_with_profile(&run.geometry, run.profile.into());
    let (t, p) = (run.t, &run.params);
    let mut pattern = match method {
        PatternMethod::Exact => pattern_exact(&rho, t, xs, p, &run.quad)?,
        PatternMethod::Farfield => pattern_farfield(&rho, t, xs, p)?,
        PatternMethod::Closed => pattern_closed_form(pp, xs),
        PatternMethod::ClosedDerived => pattern_closed_form_derived(pp, xs),
        PatternMethod::DampedRescaled => pattern_damped_rescaled(&rho, t, xs, p)?,
        PatternMethod::DampedKernel => pattern_damped_kernel(&rho, t, xs, p, &run.quad)?.kernel,
        PatternMethod::DampedSimplified => pattern_damped_kernel(&rho, t, xs, p, &run.quad)?.simplified,
    };
    // The closed forms know only K and β; record the run's time and friction.
    pattern.meta.t = t;
    pattern.meta.gamma = p.gamma();
    Ok(pattern)
}

fn pattern_rows(pat: &DiffractionPattern) -> impl Iterator<Item = Vec<String>> + '_ {
    let m = pat.meta;
    let method = pat.method.to_string();
    pat.x.iter().zip(&pat.p).map(move |(&x, &p)| {
        vec![
            fmt_f64(x),
            fmt_f64(p),
            method.clone(),
            fmt_f64(m.t),
            fmt_f64(m.k),
            fmt_f64(m.beta),
            fmt_f64(m.gamma),
        ]
    })
}

pub fn execute(run: &PatternRun, out: Option<&mut OutDir>) -> CliResult<Value> {
    validate(run)?;
    let g = &run.geometry;
    let p = &run.params;
    // K at the requested time; equals M v d / (ħ D) at the flight time.
    let pp = PatternParams::new(
        p.mass() * g.half_separation() / (p.hbar() * run.t),
        g.width() / g.half_separation(),
    )?;
    let xs = default_samples(pp.k, run.kx_span, run.samples);
    let out = out.ok_or_else(|| CliError::config("pattern needs --out"))?;

    if let [method] = run.methods[..] {
        let pat = compute(run, method, &xs, &pp)?;
        out.write_csv("pattern.csv", "x,P,method,t,K,beta,gamma", pattern_rows(&pat))?;
        return Ok(json!({
            "method": pat.method.to_string(),
            "samples": pat.x.len(),
            "max": pat.max(),
            "negativity": pat.negativity(),
            "K": pat.meta.k,
            "beta": pat.meta.beta,
        }));
    }

    let a = compute(run, run.methods[0], &xs, &pp)?;
    let b = compute(run, run.methods[1], &xs, &pp)?;
    let scale = b.p.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return Err(CliError::Numerical(
            "reference pattern is identically zero".into(),
        ));
    }
    let dev: Vec<f64> = a.p.iter().zip(&b.p).map(|(x, y)| (x - y).abs() / scale).collect();
    let max = dev.iter().copied().fold(0.0, f64::max);
    let mean = dev.iter().sum::<f64>() / dev.len() as f64;
    let rows = xs
        .iter()
        .zip(a.p.iter().zip(&b.p))
        .zip(&dev)
        .map(|((&x, (&pa, &pb)), &d)| vec![fmt_f64(x), fmt_f64(pa), fmt_f64(pb), fmt_f64(d)]);
    out.write_csv("compare.csv", "x,P_a,P_b,rel_dev", rows)?;
    let summary = json!({
        "a": a.method.to_string(),
        "b": b.method.to_string(),
        "max_rel_dev": max,
        "mean_rel_dev": mean,
    });
    out.write_json("compare_summary.json", &summary)?;
    Ok(summary)
}
