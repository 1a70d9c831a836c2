// SPDX-License-Identifier: Apache-2.0

//! Zero-temperature dissipative propagator for the doubled coordinates.
//!
//! The kernel factorizes into a bilinear "dissipative flux" phase
//! `Φ = (R/2ħ)(x₊x₋' − x₋x₊')` and a translation-invariant envelope
//!
//! ```text
//! F₀(u₊, u₋, t) = Mγ / (2πħ sinh γt) · exp[ i Mγ coth(γt) (u₊² − u₋²) / 2ħ ]
//! ```
//!
//! evaluated at `u± = x± − x±'`. As γt → 0 the envelope becomes the free
//! Fresnel product kernel.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diffraction::{DiffractionPattern, Method, PatternMeta};
use crate::error::{Error, Result};
use crate::params::PhysParams;
use crate::quadrature::{self, QuadConfig};
use crate::slit::{AnalyticDensity, Axis, DensityMatrixGrid};

/// Below this γt the envelope is the free kernel; closed form and series
/// agree to ~1e-13 there.
pub const FREE_LIMIT_GAMMA_T: f64 = 1e-6;

/// Above this γt, γτ is exactly 1/2 in double precision.
pub const SATURATION_GAMMA_T: f64 = 50.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelEval {
    pub value: Complex64,
    /// Φ in radians.
    pub phase: f64,
    pub envelope: Complex64,
}

/// Φ(x₊, x₋, x₊', x₋') = (R/2ħ)(x₊x₋' − x₋x₊').
pub fn phase_phi(x_plus: f64, x_minus: f64, xp_plus: f64, xp_minus: f64, params: &PhysParams) -> f64 {
    params.friction() / (2.0 * params.hbar()) * (x_plus * xp_minus - x_minus * xp_plus)
}

/// Real prefactor and chirp coefficient of F₀: `(|F₀|, B)` with
/// `F₀ = |F₀| exp[i B (u₊² − u₋²)]`.
fn envelope_coefficients(t: f64, params: &PhysParams) -> Result<(f64, f64)> {
    if !(t > 0.0) {
        return Err(Error::NonpositiveTime(t));
    }
    let m = params.mass();
    let hbar = params.hbar();
    let gamma = params.gamma();
    let gt = gamma * t;
    if gt < FREE_LIMIT_GAMMA_T {
        let free = m / (2.0 * hbar * t);
        Ok((free / std::f64::consts::PI, free))
    } else {
        let modulus = m * gamma / (2.0 * std::f64::consts::PI * hbar * gt.sinh());
        let chirp = m * gamma / (2.0 * hbar * gt.tanh());
        Ok((modulus, chirp))
    }
}

/// F₀(x₊, x₋, t).
pub fn envelope_f0(x_plus: f64, x_minus: f64, t: f64, params: &PhysParams) -> Result<Complex64> {
    let (modulus, chirp) = envelope_coefficients(t, params)?;
    Ok(Complex64::from_polar(
        modulus,
        chirp * (x_plus - x_minus) * (x_plus + x_minus),
    ))
}

/// K₀(x₊, x₊', x₋, x₋', t) = exp(iΦ) F₀(x₊ − x₊', x₋ − x₋', t).
pub fn kernel_k0(
    x_plus: f64,
    xp_plus: f64,
    x_minus: f64,
    xp_minus: f64,
    t: f64,
    params: &PhysParams,
) -> Result<KernelEval> {
    let envelope = envelope_f0(x_plus - xp_plus, x_minus - xp_minus, t, params)?;
    let phase = phase_phi(x_plus, x_minus, xp_plus, xp_minus, params);
    Ok(KernelEval {
        value: Complex64::from_polar(1.0, phase) * envelope,
        phase,
        envelope,
    })
}

/// γτ = e^{−γt} sinh(γt), returned as τ.
pub fn renormalized_time(t: f64, params: &PhysParams) -> f64 {
    let gamma = params.gamma();
    let gt = gamma * t;
    if gt < FREE_LIMIT_GAMMA_T {
        // (1 − e^{−2x}) / 2x = 1 − x + 2x²/3 − ...
        t * (1.0 - gt + 2.0 / 3.0 * gt * gt)
    } else if gt > SATURATION_GAMMA_T {
        0.5 / gamma
    } else {
        -(-2.0 * gt).exp_m1() / (2.0 * gamma)
    }
}

/// K₀ at fixed `(x₊, x₋, t)` split into a forward factor in x₊' and a
/// backward factor in x₋': `K₀ = prefactor · forward(x₊') · backward(x₋')`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelFactors {
    pub prefactor: f64,
    flux: f64,
    chirp: f64,
    x_plus: f64,
    x_minus: f64,
}

impl KernelFactors {
    pub fn new(x_plus: f64, x_minus: f64, t: f64, params: &PhysParams) -> Result<Self> {
        let (prefactor, chirp) = envelope_coefficients(t, params)?;
        Ok(KernelFactors {
            prefactor,
            flux: params.friction() / (2.0 * params.hbar()),
            chirp,
            x_plus,
            x_minus,
        })
    }

    pub fn forward(&self, s: f64) -> Complex64 {
        let u = self.x_plus - s;
        Complex64::from_polar(1.0, -self.flux * self.x_minus * s + self.chirp * u * u)
    }

    pub fn backward(&self, s: f64) -> Complex64 {
        let u = self.x_minus - s;
        Complex64::from_polar(1.0, self.flux * self.x_plus * s - self.chirp * u * u)
    }
}

/// A product term `weight · f₊(x₊') · f₋(x₋')` of an initial density, with
/// the intervals outside of which each factor is negligible.
pub struct SeparableTerm<'a> {
    pub weight: Complex64,
    pub forward: Box<dyn Fn(f64) -> Complex64 + Sync + 'a>,
    pub backward: Box<dyn Fn(f64) -> Complex64 + Sync + 'a>,
    pub forward_support: (f64, f64),
    pub backward_support: (f64, f64),
}

impl AnalyticDensity {
    /// The density as separable terms, one per slit pair.
    pub fn separable_terms(&self) -> Vec<SeparableTerm<'_>> {
        let reach = self.profile_reach();
        self.terms
            .iter()
            .map(|t| {
                let (cp, cm) = (t.center_plus, t.center_minus);
                SeparableTerm {
                    weight: t.weight,
                    forward: Box::new(move |s| {
                        Complex64::new(self.profile.amplitude(self.width, s - cp), 0.0)
                    }),
                    backward: Box::new(move |s| {
                        Complex64::new(self.profile.amplitude(self.width, s - cm), 0.0)
                    }),
                    forward_support: (cp - reach, cp + reach),
                    backward_support: (cm - reach, cm + reach),
                }
            })
            .collect()
    }
}

/// ρ(x₊, x₋, t) = ∬ K₀ ρ₀ dx₊' dx₋' for a separable ρ₀.
pub fn propagate_point(
    terms: &[SeparableTerm<'_>],
    x_plus: f64,
    x_minus: f64,
    t: f64,
    params: &PhysParams,
    cfg: &QuadConfig,
) -> Result<Complex64> {
    let factors = KernelFactors::new(x_plus, x_minus, t, params)?;
    let mut total = Complex64::new(0.0, 0.0);
    for term in terms {
        let (a, b) = term.forward_support;
        let fwd = quadrature::integrate(|s| factors.forward(s) * (term.forward)(s), a, b, cfg)?;
        let (a, b) = term.backward_support;
        let bwd = quadrature::integrate(|s| factors.backward(s) * (term.backward)(s), a, b, cfg)?;
        total += term.weight * fwd.value * bwd.value;
    }
    Ok(total * factors.prefactor)
}

/// Kernel propagation of a separable ρ₀ onto every node of `axis × axis`.
pub fn propagate_to_grid(
    terms: &[SeparableTerm<'_>],
    axis: &Axis,
    t: f64,
    params: &PhysParams,
    cfg: &QuadConfig,
) -> Result<DensityMatrixGrid> {
    let n = axis.len;
    let rows: Vec<Vec<Complex64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let xp = axis.point(i);
            (0..n)
                .map(|j| propagate_point(terms, xp, axis.point(j), t, params, cfg))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    DensityMatrixGrid::from_values(*axis, rows.concat())
}

/// Output of [`pattern_damped_kernel`]: the full-kernel pattern and the
/// simplified form with coth(γt) → 1 in the x-linear cross term.
#[derive(Debug, Clone, PartialEq)]
pub struct DampedKernelPatterns {
    pub kernel: DiffractionPattern,
    pub simplified: DiffractionPattern,
}

/// Zero-temperature pattern P(x, t) = ∬ K₀(x, x₊', x, x₋', t) ρ₀ dx₊' dx₋'.
///
/// Each slit-pair term is integrated as a genuine double integral of the
/// kernel. The simplified variant keeps the full chirp but replaces
/// `(1 + coth γt)` by 2 in the coefficient of `x (x₊' − x₋')`.
pub fn pattern_damped_kernel(
    rho0: &AnalyticDensity,
    t: f64,
    xs: &[f64],
    params: &PhysParams,
    cfg: &QuadConfig,
) -> Result<DampedKernelPatterns> {
    let (modulus, chirp) = envelope_coefficients(t, params)?;
    let hbar = params.hbar();
    let cross_50a = -2.0 * params.mass() * params.gamma() / hbar;
    let reach = rho0.profile_reach();

    let eval = |x: f64, simplified: bool| -> Result<f64> {
        let mut total = Complex64::new(0.0, 0.0);
        for term in &rho0.terms {
            let (cp, cm) = (term.center_plus, term.center_minus);
            let profile = |xp: f64, xm: f64| {
                rho0.profile.amplitude(rho0.width, xp - cp) * rho0.profile.amplitude(rho0.width, xm - cm)
            };
            let r = if simplified {
                quadrature::integrate_2d(
                    |xp, xm| {
                        let phase = cross_50a * x * (xp - xm) + chirp * (xp - xm) * (xp + xm);
                        Complex64::from_polar(modulus * profile(xp, xm), phase)
                    },
                    (cp - reach, cp + reach),
                    (cm - reach, cm + reach),
                    cfg,
                )?
            } else {
                quadrature::integrate_2d(
                    |xp, xm| {
                        // Kernel evaluation cannot fail here: t > 0 was checked above.
                        let k = kernel_k0(x, xp, x, xm, t, params)
                            .map(|k| k.value)
                            .unwrap_or(Complex64::new(f64::NAN, f64::NAN));
                        k * profile(xp, xm)
                    },
                    (cp - reach, cp + reach),
                    (cm - reach, cm + reach),
                    cfg,
                )?
            };
            total += term.weight * r.value;
        }
        Ok(total.re)
    };

    let kernel_p = xs
        .par_iter()
        .map(|&x| eval(x, false))
        .collect::<Result<Vec<_>>>()?;
    let simplified_p = xs
        .par_iter()
        .map(|&x| eval(x, true))
        .collect::<Result<Vec<_>>>()?;
    let meta = PatternMeta::from_density(rho0, t, params);
    Ok(DampedKernelPatterns {
        kernel: DiffractionPattern::new(xs.to_vec(), kernel_p, Method::DampedKernel, meta),
        simplified: DiffractionPattern::new(xs.to_vec(), simplified_p, Method::DampedSimplified, meta),
    })
}
