// SPDX-License-Identifier: Apache-2.0

//! Two-slit screen patterns without dissipation, and the damped pattern
//! obtained by rescaling time.
//!
//! Routes:
//! - [`pattern_exact`]: Fresnel-kernel quadrature over the slit support.
//! - [`pattern_farfield`]: the linearized-phase integral, evaluated
//!   analytically term by term.
//! - [`pattern_closed_form`]: the printed fringe formula in `K`, `β`.
//! - [`pattern_closed_form_derived`]: the far-field integral in closed form.
//! - [`pattern_damped_rescaled`]: `e^{−γt}` times the far field at τ.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::renormalized_time;
use crate::params::PhysParams;
use crate::quadrature::{self, QuadConfig};
use crate::slit::{AnalyticDensity, PatternParams, SlitProfile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    ExactFresnel,
    FarField,
    ClosedForm,
    ClosedFormDerived,
    DampedRescaled,
    DampedKernel,
    /// Damped kernel with coth(γt) → 1 in the cross term. Its CSV tag is
    /// kept as `DampedPaper50a` for compatibility with existing outputs.
    DampedSimplified,
    EvolverDiagonal,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Method::ExactFresnel => "ExactFresnel",
            Method::FarField => "FarField",
            Method::ClosedForm => "ClosedForm",
            Method::ClosedFormDerived => "ClosedFormDerived",
            Method::DampedRescaled => "DampedRescaled",
            Method::DampedKernel => "DampedKernel",
            Method::DampedSimplified => "DampedPaper50a",
            Method::EvolverDiagonal => "EvolverDiagonal",
        };
        f.write_str(s)
    }
}

/// Parameters recorded alongside a pattern.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PatternMeta {
    pub t: f64,
    pub k: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl PatternMeta {
    /// `K = M d / (ħ t)` and `β = w / d` with `d` the largest slit offset.
    pub fn from_density(rho0: &AnalyticDensity, t: f64, params: &PhysParams) -> Self {
        let d = rho0
            .terms
            .iter()
            .flat_map(|term| [term.center_plus.abs(), term.center_minus.abs()])
            .fold(0.0, f64::max);
        PatternMeta {
            t,
            k: params.mass() * d / (params.hbar() * t),
            beta: if d > 0.0 { rho0.width / d } else { f64::NAN },
            gamma: params.gamma(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiffractionPattern {
    pub x: Vec<f64>,
    pub p: Vec<f64>,
    pub method: Method,
    pub meta: PatternMeta,
}

impl DiffractionPattern {
    pub fn new(x: Vec<f64>, p: Vec<f64>, method: Method, meta: PatternMeta) -> Self {
        debug_assert_eq!(x.len(), p.len());
        DiffractionPattern { x, p, method, meta }
    }

    pub fn max(&self) -> f64 {
        self.p.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Most negative sample relative to the peak (0 when none are negative).
    pub fn negativity(&self) -> f64 {
        let worst = self.p.iter().copied().fold(0.0, f64::min);
        if worst < 0.0 {
            -worst / self.max().max(f64::MIN_POSITIVE)
        } else {
            0.0
        }
    }
}

/// Hamilton-Jacobi action of a free particle, `M dx² / 2t`.
pub fn action_free(dx: f64, t: f64, params: &PhysParams) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::NonpositiveTime(t));
    }
    Ok(params.mass() * dx * dx / (2.0 * t))
}

/// `K x` samples: `n` uniform points over `[−span, span] / K`.
pub fn default_samples(k: f64, span: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![0.0];
    }
    let step = 2.0 * span / (n - 1) as f64;
    (0..n).map(|i| (-span + i as f64 * step) / k).collect()
}

/// Default span of `K x`: ±6π.
pub const DEFAULT_KX_SPAN: f64 = 6.0 * PI;
pub const DEFAULT_SAMPLES: usize = 1024;

fn sinc(u: f64) -> f64 {
    if u == 0.0 {
        1.0
    } else {
        u.sin() / u
    }
}

/// Fresnel-kernel pattern of a slit density at time `t`.
///
/// Each product term's double integral splits into a forward and a
/// conjugated backward single-slit amplitude, each computed by adaptive
/// quadrature. The common phase `exp(iMx²/2ħt)` cancels between them and is
/// dropped.
pub fn pattern_exact(
    rho0: &AnalyticDensity,
    t: f64,
    xs: &[f64],
    params: &PhysParams,
    cfg: &QuadConfig,
) -> Result<DiffractionPattern> {
    if !(t > 0.0) {
        return Err(Error::NonpositiveTime(t));
    }
    let kappa = params.mass() / (2.0 * params.hbar() * t);
    let prefactor = params.mass() / (2.0 * PI * params.hbar() * t);
    let reach = rho0.profile_reach();
    let mut centers: Vec<f64> = rho0
        .terms
        .iter()
        .flat_map(|term| [term.center_plus, term.center_minus])
        .collect();
    centers.sort_by(f64::total_cmp);
    centers.dedup();

    let eval = |x: f64| -> Result<f64> {
        let amplitudes = centers
            .iter()
            .map(|&c| {
                quadrature::integrate(
                    |s| {
                        let phi = rho0.profile.amplitude(rho0.width, s - c);
                        Complex64::from_polar(phi, kappa * s * (s - 2.0 * x))
                    },
                    c - reach,
                    c + reach,
                    cfg,
                )
                .map(|r| r.value)
            })
            .collect::<Result<Vec<_>>>()?;
        let lookup = |c: f64| amplitudes[centers.binary_search_by(|v| v.total_cmp(&c)).unwrap()];
        let total: Complex64 = rho0
            .terms
            .iter()
            .map(|term| term.weight * lookup(term.center_plus) * lookup(term.center_minus).conj())
            .sum();
        Ok(prefactor * total.re)
    };

    let p = xs.par_iter().map(|&x| eval(x)).collect::<Result<Vec<_>>>()?;
    Ok(DiffractionPattern::new(
        xs.to_vec(),
        p,
        Method::ExactFresnel,
        PatternMeta::from_density(rho0, t, params),
    ))
}

/// Fourier transform ∫ φ(u) e^{−iqu} du of a single slit profile.
fn profile_transform(profile: SlitProfile, width: f64, q: f64) -> f64 {
    match profile {
        SlitProfile::TopHat => width.sqrt() * sinc(0.5 * q * width),
        SlitProfile::Gaussian => {
            let s = width / 12f64.sqrt();
            (8.0 * PI * s * s).powf(0.25) * (-q * q * s * s).exp()
        }
    }
}

/// Linearized-phase pattern `(M/2πħt) ∬ exp[−iMx(x₊−x₋)/ħt] ρ₀`.
///
/// A term centred at `(a, b)` integrates to `Φ̂(q)² e^{−iq(a−b)}` with
/// `q = Mx/ħt` and `Φ̂` the profile's Fourier transform.
pub fn pattern_farfield(
    rho0: &AnalyticDensity,
    t: f64,
    xs: &[f64],
    params: &PhysParams,
) -> Result<DiffractionPattern> {
    if !(t > 0.0) {
        return Err(Error::NonpositiveTime(t));
    }
    let p = farfield_values(rho0, t, xs, params);
    Ok(DiffractionPattern::new(
        xs.to_vec(),
        p,
        Method::FarField,
        PatternMeta::from_density(rho0, t, params),
    ))
}

fn farfield_values(rho0: &AnalyticDensity, t: f64, xs: &[f64], params: &PhysParams) -> Vec<f64> {
    let prefactor = params.mass() / (2.0 * PI * params.hbar() * t);
    let q_per_x = params.mass() / (params.hbar() * t);
    xs.par_iter()
        .map(|&x| {
            let q = q_per_x * x;
            let f = profile_transform(rho0.profile, rho0.width, q);
            let interference: Complex64 = rho0
                .terms
                .iter()
                .map(|term| {
                    term.weight * Complex64::from_polar(1.0, -q * (term.center_plus - term.center_minus))
                })
                .sum();
            prefactor * f * f * interference.re
        })
        .collect()
}

/// `P = 4 / (πβKx²) · cos²(Kx) · sin²(βKx)`, with the value `4βK/π` at
/// `x = 0`.
pub fn pattern_closed_form(pp: &PatternParams, xs: &[f64]) -> DiffractionPattern {
    let (k, beta) = (pp.k, pp.beta);
    let p = xs
        .iter()
        .map(|&x| {
            let c = (k * x).cos();
            let s = sinc(beta * k * x);
            4.0 * beta * k / PI * c * c * s * s
        })
        .collect();
    DiffractionPattern::new(xs.to_vec(), p, Method::ClosedForm, closed_meta(pp))
}

/// Closed form of the far-field integral for two top-hat slits:
/// `P = 4 / (πβKx²) · cos²(Kx) · sin²(βKx/2)`, value `βK/π` at `x = 0`.
///
/// It differs from [`pattern_closed_form`] only in the envelope argument.
pub fn pattern_closed_form_derived(pp: &PatternParams, xs: &[f64]) -> DiffractionPattern {
    let (k, beta) = (pp.k, pp.beta);
    let p = xs
        .iter()
        .map(|&x| {
            let c = (k * x).cos();
            let s = sinc(0.5 * beta * k * x);
            beta * k / PI * c * c * s * s
        })
        .collect();
    DiffractionPattern::new(xs.to_vec(), p, Method::ClosedFormDerived, closed_meta(pp))
}

fn closed_meta(pp: &PatternParams) -> PatternMeta {
    PatternMeta {
        t: f64::NAN,
        k: pp.k,
        beta: pp.beta,
        gamma: 0.0,
    }
}

/// Zero-temperature damped pattern from the frictionless far field at the
/// renormalized time τ, scaled by the trace decay `e^{−γt}`.
pub fn pattern_damped_rescaled(
    rho0: &AnalyticDensity,
    t: f64,
    xs: &[f64],
    params: &PhysParams,
) -> Result<DiffractionPattern> {
    if !(t > 0.0) {
        return Err(Error::NonpositiveTime(t));
    }
    let tau = renormalized_time(t, params);
    let decay = (-params.gamma() * t).exp();
    let p = farfield_values(rho0, tau, xs, params)
        .into_iter()
        .map(|v| decay * v)
        .collect();
    Ok(DiffractionPattern::new(
        xs.to_vec(),
        p,
        Method::DampedRescaled,
        PatternMeta::from_density(rho0, t, params),
    ))
}
