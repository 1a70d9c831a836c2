// SPDX-License-Identifier: Apache-2.0

//! Grid evolution of the Brownian master equation
//!
//! ```text
//! iħ ∂ρ/∂t = [ (p₊ − (R/2)x₋)²/2M − (p₋ + (R/2)x₊)²/2M
//!              + U(x₊) − U(x₋) − (i kT R/ħ)(x₊ − x₋)² ] ρ
//! ```
//!
//! with periodic boundaries and classic RK4 in time. The kinetic squares are
//! expanded as `−ħ²∂±² ∓ iħR x∓ ∂± + (R²/4) x∓²`, which is exact because
//! `x∓` commutes with `∂±`.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diffraction::{DiffractionPattern, Method, PatternMeta};
use crate::error::{check_positive, Error, Result};
use crate::kernel::SeparableTerm;
use crate::params::PhysParams;
use crate::slit::{Axis, DensityMatrixGrid};
use crate::spectral::{DerivativeScheme, Differentiator};

/// Default safety factor in `dt <= c_stab · M Δx² / ħ`.
pub const DEFAULT_C_STAB: f64 = 0.2;

/// Bound on `dt · (spectral radius estimate)`; RK4 is stable up to about
/// 2.78 on the negative real axis and 2.83 on the imaginary axis.
pub const RK4_RADIUS: f64 = 2.5;

/// Largest tolerated fraction of spectral power above 2/3 of Nyquist.
pub const RESOLUTION_TOLERANCE: f64 = 1e-6;

/// Fraction of the period at each edge watched for wrap-around.
pub const BOUNDARY_BAND: f64 = 0.05;

/// Boundary mass above which a run is considered contaminated by wrap-around.
pub const BOUNDARY_MASS_LIMIT: f64 = 1e-6;

const C0: Complex64 = Complex64::new(0.0, 0.0);

/// Potential energy sampled on an axis.
#[derive(Clone)]
pub struct Potential {
    sampler: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    axis: Axis,
    values: Vec<f64>,
}

impl std::fmt::Debug for Potential {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Potential")
            .field("axis", &self.axis)
            .field("values", &self.values)
            .finish()
    }
}

impl Potential {
    pub fn new<F>(axis: &Axis, sampler: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let values: Vec<f64> = axis.points().into_iter().map(&sampler).collect();
        if let Some(i) = values.iter().position(|u| !u.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "potential",
                reason: format!("U({}) is not finite", axis.point(i)),
            });
        }
        Ok(Potential {
            sampler: Arc::new(sampler),
            axis: *axis,
            values,
        })
    }

    pub fn free(axis: &Axis) -> Self {
        Potential::new(axis, |_| 0.0).expect("zero is finite")
    }

    pub fn from_spec(spec: &PotentialSpec, axis: &Axis) -> Result<Self> {
        match *spec {
            PotentialSpec::Free => Ok(Potential::free(axis)),
            PotentialSpec::Harmonic { stiffness, center } => {
                Potential::new(axis, move |x| 0.5 * stiffness * (x - center).powi(2))
            }
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.sampler)(x)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn axis(&self) -> &Axis {
        &self.axis
    }

    fn spread(&self) -> f64 {
        let (lo, hi) = self
            .values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &u| {
                (lo.min(u), hi.max(u))
            });
        hi - lo
    }
}

/// Serializable potential choice.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PotentialSpec {
    #[default]
    Free,
    /// `U = stiffness (x − center)² / 2`.
    Harmonic {
        stiffness: f64,
        #[serde(default)]
        center: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    #[default]
    Periodic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub n: usize,
}

impl GridSpec {
    pub fn axis(&self) -> Result<Axis> {
        Axis::periodic(self.x_min, self.x_max, self.n)
    }
}

fn default_c_stab() -> f64 {
    DEFAULT_C_STAB
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolverConfig {
    pub grid: GridSpec,
    pub dt: f64,
    pub t_final: f64,
    #[serde(default)]
    pub boundary: Boundary,
    #[serde(default)]
    pub scheme: DerivativeScheme,
    /// Keep every `snapshot_stride`-th step; 0 keeps only the first and last.
    #[serde(default)]
    pub snapshot_stride: usize,
    #[serde(default = "default_c_stab")]
    pub c_stab: f64,
    /// Largest group speed in the initial state, for the padding rule.
    #[serde(default)]
    pub ballistic_speed: f64,
}

impl EvolverConfig {
    pub fn new(grid: GridSpec, dt: f64, t_final: f64) -> Self {
        EvolverConfig {
            grid,
            dt,
            t_final,
            boundary: Boundary::Periodic,
            scheme: DerivativeScheme::Spectral,
            snapshot_stride: 0,
            c_stab: DEFAULT_C_STAB,
            ballistic_speed: 0.0,
        }
    }

    /// Number of steps and the step actually taken: `t_final` is split into
    /// equal steps no longer than `dt`.
    pub fn steps(&self) -> Result<(usize, f64)> {
        check_positive("dt", self.dt)?;
        check_positive("t_final", self.t_final)?;
        let n = (self.t_final / self.dt * (1.0 - 1e-12)).ceil().max(1.0) as usize;
        Ok((n, self.t_final / n as f64))
    }

    /// `c_stab · M Δx² / ħ`.
    pub fn dt_limit(&self, params: &PhysParams) -> Result<f64> {
        let axis = self.grid.axis()?;
        Ok(self.c_stab * params.mass() * axis.spacing * axis.spacing / params.hbar())
    }

    fn validate(&self, params: &PhysParams) -> Result<(Axis, usize, f64)> {
        check_positive("c_stab", self.c_stab)?;
        if !(self.ballistic_speed >= 0.0 && self.ballistic_speed.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "ballistic_speed",
                reason: format!("must be finite and >= 0, got {}", self.ballistic_speed),
            });
        }
        let axis = self.grid.axis()?;
        let (steps, dt) = self.steps()?;
        let limit = self.dt_limit(params)?;
        if dt > limit {
            return Err(Error::UnstableConfig(format!(
                "dt = {dt} exceeds c_stab·MΔx²/ħ = {limit}"
            )));
        }
        Ok((axis, steps, dt))
    }
}

/// The operator `ℋ_Brownian` on a fixed grid.
#[derive(Debug, Clone)]
pub struct BrownianOperator {
    axis: Axis,
    diff: Differentiator,
    x: Vec<f64>,
    u: Vec<f64>,
    potential_spread: f64,
    params: PhysParams,
}

impl BrownianOperator {
    pub fn new(potential: &Potential, params: &PhysParams, scheme: DerivativeScheme) -> Self {
        let axis = *potential.axis();
        BrownianOperator {
            axis,
            diff: Differentiator::new(&axis, scheme),
            x: axis.points(),
            u: potential.values().to_vec(),
            potential_spread: potential.spread(),
            params: *params,
        }
    }

    pub fn axis(&self) -> &Axis {
        &self.axis
    }

    /// Upper estimate of the spectral radius of `(−i/ħ) ℋ`, summing the
    /// magnitudes of every term.
    pub fn spectral_radius_estimate(&self) -> f64 {
        let p = &self.params;
        let (m, hbar, r) = (p.mass(), p.hbar(), p.friction());
        let xmax = self.axis.start.abs().max(self.axis.last().abs());
        let dmax = self.axis.last() - self.axis.start;
        hbar / (2.0 * m) * self.diff.second_bound()
            + 2.0 * p.gamma() * xmax * self.diff.first_bound()
            + r * r * xmax * xmax / (8.0 * m * hbar)
            + self.potential_spread / hbar
            + p.thermal_energy() * r * dmax * dmax / (hbar * hbar)
    }

    /// Largest step accepted by the spectral-radius check.
    pub fn max_stable_dt(&self) -> f64 {
        RK4_RADIUS / self.spectral_radius_estimate()
    }

    fn check_stable(&self, dt: f64) -> Result<()> {
        let radius = self.spectral_radius_estimate();
        if dt * radius > RK4_RADIUS {
            return Err(Error::UnstableConfig(format!(
                "dt·ρ(ℋ/ħ) = {} exceeds {RK4_RADIUS} (dt = {dt}, radius {radius})",
                dt * radius
            )));
        }
        Ok(())
    }

    /// Rejects states with more than [`RESOLUTION_TOLERANCE`] of their
    /// spectral power in the top third of either axis.
    pub fn check_resolved(&self, rho: &DensityMatrixGrid) -> Result<()> {
        let n = self.axis.len;
        let scale = rho.max_abs();
        if scale == 0.0 {
            return Ok(());
        }
        let values: Vec<Complex64> = rho.values().iter().map(|v| v / scale).collect();
        let transposed = transpose(&values, n);
        let (mut high, mut total) = (0.0, 0.0);
        for data in [&values[..], &transposed[..]] {
            let (h, t) = data
                .par_chunks(n)
                .map_init(
                    || self.diff.scratch(),
                    |scratch, row| self.diff.high_mode_fraction(row, scratch),
                )
                .reduce(|| (0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
            high += h;
            total += t;
        }
        if total > 0.0 && high > RESOLUTION_TOLERANCE * total {
            return Err(Error::UnstableConfig(format!(
                "grid does not resolve the state: {:.3e} of spectral power above 2/3 Nyquist",
                high / total
            )));
        }
        Ok(())
    }

    fn check_grid(&self, rho: &DensityMatrixGrid) -> Result<()> {
        if rho.axis() != &self.axis {
            return Err(Error::ShapeMismatch(format!(
                "state axis {:?} differs from operator axis {:?}",
                rho.axis(),
                self.axis
            )));
        }
        Ok(())
    }

    /// Writes `(−i/ħ) ℋ ρ` into `out`.
    pub fn time_derivative(&self, rho: &[Complex64], out: &mut [Complex64]) {
        self.apply_scaled(rho, out, Complex64::new(0.0, -1.0 / self.params.hbar()));
    }

    fn apply_scaled(&self, rho: &[Complex64], out: &mut [Complex64], scale: Complex64) {
        let n = self.axis.len;
        let p = &self.params;
        let (m, hbar, r) = (p.mass(), p.hbar(), p.friction());
        let decoherence = p.thermal_energy() * r / hbar;
        let inv2m = 1.0 / (2.0 * m);
        let quarter_r2 = 0.25 * r * r;

        // Derivatives in x₋ run along rows; those in x₊ along rows of the transpose.
        let (d_minus, dd_minus) = self.row_derivatives(rho);
        let (d_plus_t, dd_plus_t) = self.row_derivatives(&transpose(rho, n));

        out.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
            let xp = self.x[i];
            for (j, slot) in row.iter_mut().enumerate() {
                let xm = self.x[j];
                let k = i * n + j;
                let kt = j * n + i;
                let v = rho[k];
                let forward = -hbar * hbar * dd_plus_t[kt]
                    + Complex64::new(0.0, hbar * r * xm) * d_plus_t[kt]
                    + v * (quarter_r2 * xm * xm);
                let backward = -hbar * hbar * dd_minus[k] - Complex64::new(0.0, hbar * r * xp) * d_minus[k]
                    + v * (quarter_r2 * xp * xp);
                let dx = xp - xm;
                let h = (forward - backward) * inv2m
                    + v * Complex64::new(self.u[i] - self.u[j], -decoherence * dx * dx);
                *slot = h * scale;
            }
        });
    }

    fn row_derivatives(&self, data: &[Complex64]) -> (Vec<Complex64>, Vec<Complex64>) {
        let n = self.axis.len;
        let mut d1 = vec![C0; n * n];
        let mut d2 = vec![C0; n * n];
        data.par_chunks(n)
            .zip(d1.par_chunks_mut(n).zip(d2.par_chunks_mut(n)))
            .for_each_init(
                || self.diff.scratch(),
                |scratch, (row, (a, b))| self.diff.both(row, a, b, scratch),
            );
        (d1, d2)
    }
}

fn transpose(data: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut out = vec![C0; n * n];
    out.par_chunks_mut(n).enumerate().for_each(|(j, row)| {
        for (i, slot) in row.iter_mut().enumerate() {
            *slot = data[i * n + j];
        }
    });
    out
}

/// Largest `dt` passing both the `c_stab` bound and the spectral-radius check.
pub fn production_dt(potential: &Potential, params: &PhysParams, cfg: &EvolverConfig) -> Result<f64> {
    let op = BrownianOperator::new(potential, params, cfg.scheme);
    Ok(cfg.dt_limit(params)?.min(op.max_stable_dt()))
}

/// `ℋ_Brownian ρ` on the state's grid.
pub fn apply_h_brownian(
    rho: &DensityMatrixGrid,
    potential: &Potential,
    params: &PhysParams,
    scheme: DerivativeScheme,
) -> Result<DensityMatrixGrid> {
    let op = BrownianOperator::new(potential, params, scheme);
    op.check_grid(rho)?;
    op.check_resolved(rho)?;
    let mut out = vec![C0; rho.values().len()];
    op.apply_scaled(rho.values(), &mut out, Complex64::new(1.0, 0.0));
    DensityMatrixGrid::from_values(*rho.axis(), out)
}

/// One classic RK4 step of `∂ₜρ = (−i/ħ) ℋ ρ`.
fn rk4_step(op: &BrownianOperator, rho: &mut [Complex64], dt: f64, work: &mut Rk4Work) {
    let Rk4Work { k, stage, acc } = work;
    op.time_derivative(rho, k);
    axpy_into(stage, rho, k, 0.5 * dt);
    acc.copy_from_slice(k);

    op.time_derivative(stage, k);
    axpy_into(stage, rho, k, 0.5 * dt);
    acc.par_iter_mut()
        .zip(k.par_iter())
        .for_each(|(a, b)| *a += b * 2.0);

    op.time_derivative(stage, k);
    axpy_into(stage, rho, k, dt);
    acc.par_iter_mut()
        .zip(k.par_iter())
        .for_each(|(a, b)| *a += b * 2.0);

    op.time_derivative(stage, k);
    let w = dt / 6.0;
    rho.par_iter_mut()
        .zip(acc.par_iter().zip(k.par_iter()))
        .for_each(|(r, (a, b))| *r += (a + b) * w);
}

fn axpy_into(out: &mut [Complex64], x: &[Complex64], y: &[Complex64], a: f64) {
    out.par_iter_mut()
        .zip(x.par_iter().zip(y.par_iter()))
        .for_each(|(o, (x, y))| *o = x + y * a);
}

struct Rk4Work {
    k: Vec<Complex64>,
    stage: Vec<Complex64>,
    acc: Vec<Complex64>,
}

impl Rk4Work {
    fn new(len: usize) -> Self {
        Rk4Work {
            k: vec![C0; len],
            stage: vec![C0; len],
            acc: vec![C0; len],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub step: usize,
    pub t: f64,
    pub rho: DensityMatrixGrid,
}

/// Diagnostics recorded with every snapshot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceSample {
    pub step: usize,
    pub t: f64,
    pub trace: Complex64,
    /// `trace(ρ₀) · e^{−γt}`.
    pub predicted: f64,
    pub hermiticity: f64,
    /// See [`boundary_mass`].
    pub boundary_mass: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evolution {
    pub dt: f64,
    pub steps: usize,
    pub snapshots: Vec<Snapshot>,
    pub traces: Vec<TraceSample>,
}

impl Evolution {
    pub fn final_state(&self) -> &DensityMatrixGrid {
        &self.snapshots.last().expect("initial snapshot always kept").rho
    }
}

/// rms distance of the diagonal mass from the centre of the domain.
fn support_radius(rho: &DensityMatrixGrid) -> f64 {
    let axis = rho.axis();
    let mid = axis.start + 0.5 * axis.period();
    let diag = rho.diagonal();
    let (mut mass, mut second) = (0.0, 0.0);
    for (i, v) in diag.iter().enumerate() {
        let w = v.norm();
        let dx = axis.point(i) - mid;
        mass += w;
        second += w * dx * dx;
    }
    if mass > 0.0 {
        (second / mass).sqrt()
    } else {
        0.0
    }
}

/// Share of `Σ|ρ|` on nodes where either coordinate lies in the outer
/// bands of the domain. Off-diagonal coherence counts too: it is what
/// wraps first at low temperature.
pub fn boundary_mass(rho: &DensityMatrixGrid) -> f64 {
    let axis = rho.axis();
    let n = axis.len;
    let band = BOUNDARY_BAND * axis.period();
    let lo = axis.start + band;
    let hi = axis.start + axis.period() - band;
    let edge: Vec<bool> = (0..n)
        .map(|i| {
            let x = axis.point(i);
            x < lo || x > hi
        })
        .collect();
    let (mut total, mut outer) = (0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            let v = rho.get(i, j).norm();
            total += v;
            if edge[i] || edge[j] {
                outer += v;
            }
        }
    }
    if total == 0.0 {
        0.0
    } else {
        outer / total
    }
}

/// Integrate the master equation from `rho0` to `cfg.t_final`.
pub fn evolve(
    rho0: &DensityMatrixGrid,
    potential: &Potential,
    params: &PhysParams,
    cfg: &EvolverConfig,
) -> Result<Evolution> {
    let (axis, steps, dt) = cfg.validate(params)?;
    if rho0.axis() != &axis || potential.axis() != &axis {
        return Err(Error::ShapeMismatch(
            "initial state, potential and config must share one axis".into(),
        ));
    }
    let half_width = 0.5 * axis.period();
    let needed = 4.0 * support_radius(rho0) + cfg.ballistic_speed * cfg.t_final;
    if half_width < needed {
        return Err(Error::UnstableConfig(format!(
            "domain half-width {half_width} below 4×support + ballistic excursion = {needed}"
        )));
    }
    if rho0
        .values()
        .iter()
        .any(|v| !(v.re.is_finite() && v.im.is_finite()))
    {
        return Err(Error::InvalidParameter {
            name: "rho0",
            reason: "contains non-finite values".into(),
        });
    }
    let scale = rho0.max_abs();
    if rho0.hermiticity_residual() > 1e-12 * scale {
        return Err(Error::InvalidParameter {
            name: "rho0",
            reason: format!("not Hermitian: residual {:e}", rho0.hermiticity_residual()),
        });
    }
    let op = BrownianOperator::new(potential, params, cfg.scheme);
    op.check_stable(dt)?;
    op.check_resolved(rho0)?;

    let trace0 = rho0.trace().re;
    let gamma = params.gamma();
    let sample = |step: usize, rho: &DensityMatrixGrid| {
        let t = step as f64 * dt;
        TraceSample {
            step,
            t,
            trace: rho.trace(),
            predicted: trace0 * (-gamma * t).exp(),
            hermiticity: rho.hermiticity_residual(),
            boundary_mass: boundary_mass(rho),
        }
    };

    let mut snapshots = vec![Snapshot {
        step: 0,
        t: 0.0,
        rho: rho0.clone(),
    }];
    let mut traces = vec![sample(0, rho0)];
    let mut state = rho0.values().to_vec();
    let mut work = Rk4Work::new(state.len());
    for step in 1..=steps {
        rk4_step(&op, &mut state, dt, &mut work);
        if state.par_iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::NaNDetected { step });
        }
        let keep = step == steps || (cfg.snapshot_stride > 0 && step % cfg.snapshot_stride == 0);
        if keep {
            let rho = DensityMatrixGrid::from_values(axis, state.clone())?;
            traces.push(sample(step, &rho));
            snapshots.push(Snapshot {
                step,
                t: step as f64 * dt,
                rho,
            });
        }
    }
    Ok(Evolution {
        dt,
        steps,
        snapshots,
        traces,
    })
}

/// Trace with its imaginary part relative to the real part.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceReport {
    pub value: Complex64,
    pub imag_residual: f64,
}

pub fn trace(rho: &DensityMatrixGrid) -> TraceReport {
    let value = rho.trace();
    TraceReport {
        value,
        imag_residual: value.im.abs() / value.re.abs().max(f64::MIN_POSITIVE),
    }
}

/// `tr(ρA) / tr(ρ)` for a local observable `A = a(x)` sampled on the axis.
pub fn normalized_expectation(rho: &DensityMatrixGrid, observable: &[f64]) -> Result<f64> {
    if observable.len() != rho.n() {
        return Err(Error::ShapeMismatch(format!(
            "observable has {} samples, grid has {}",
            observable.len(),
            rho.n()
        )));
    }
    let tr = rho.trace();
    if tr.norm() < 1e-12 {
        return Err(Error::ZeroTrace(tr.norm()));
    }
    let weighted: Complex64 = rho
        .diagonal()
        .iter()
        .zip(observable)
        .map(|(v, a)| v * a)
        .sum::<Complex64>()
        * rho.axis().spacing;
    Ok((weighted / tr).re)
}

/// max-norm of `[v₊, v₋] f − (iħR/M²) f` with
/// `v₊ = (p₊ − (R/2)x₋)/M`, `v₋ = −(p₋ + (R/2)x₊)/M`.
///
/// `f` lives on `axis × axis`, rows indexed by x₊.
pub fn velocity_commutator_residual(
    f: &[Complex64],
    axis: &Axis,
    params: &PhysParams,
    scheme: DerivativeScheme,
) -> Result<f64> {
    let n = axis.len;
    if f.len() != n * n {
        return Err(Error::ShapeMismatch(format!(
            "test function has {} samples, expected {}",
            f.len(),
            n * n
        )));
    }
    let diff = Differentiator::new(axis, scheme);
    let x = axis.points();
    let (m, hbar, r) = (params.mass(), params.hbar(), params.friction());
    let minus_i_hbar = Complex64::new(0.0, -hbar);

    let along_rows = |data: &[Complex64]| -> Vec<Complex64> {
        let mut d1 = vec![C0; n * n];
        let mut d2 = vec![C0; n * n];
        let mut scratch = diff.scratch();
        for ((row, a), b) in data.chunks(n).zip(d1.chunks_mut(n)).zip(d2.chunks_mut(n)) {
            diff.both(row, a, b, &mut scratch);
        }
        d1
    };
    let v_plus = |data: &[Complex64]| -> Vec<Complex64> {
        let dp = transpose(&along_rows(&transpose(data, n)), n);
        (0..n * n)
            .map(|k| (minus_i_hbar * dp[k] - data[k] * (0.5 * r * x[k % n])) / m)
            .collect()
    };
    let v_minus = |data: &[Complex64]| -> Vec<Complex64> {
        let dm = along_rows(data);
        (0..n * n)
            .map(|k| -(minus_i_hbar * dm[k] + data[k] * (0.5 * r * x[k / n])) / m)
            .collect()
    };
    let pm = v_plus(&v_minus(f));
    let mp = v_minus(&v_plus(f));
    let expected = Complex64::new(0.0, hbar * r / (m * m));
    Ok((0..n * n)
        .map(|k| (pm[k] - mp[k] - expected * f[k]).norm())
        .fold(0.0, f64::max))
}

/// Gaussian wave packet `ψ(x) = (2πσ²)^{−1/4} exp(−(x−c)²/4σ² + i k x)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaussianPacket {
    pub center: f64,
    pub sigma: f64,
    #[serde(default)]
    pub wavenumber: f64,
}

impl GaussianPacket {
    pub fn new(center: f64, sigma: f64, wavenumber: f64) -> Result<Self> {
        check_positive("sigma", sigma)?;
        Ok(GaussianPacket {
            center,
            sigma,
            wavenumber,
        })
    }

    pub fn psi(&self, x: f64) -> Complex64 {
        let s = self.sigma;
        let u = x - self.center;
        let norm = (2.0 * std::f64::consts::PI * s * s).powf(-0.25);
        Complex64::from_polar(norm * (-u * u / (4.0 * s * s)).exp(), self.wavenumber * x)
    }

    /// Pure-state density `ψ(x₊) ψ*(x₋)`, Hermitian bit for bit.
    pub fn to_grid(&self, axis: &Axis) -> DensityMatrixGrid {
        let psi: Vec<Complex64> = axis.points().into_iter().map(|x| self.psi(x)).collect();
        let n = axis.len;
        let values = (0..n * n).map(|k| psi[k / n] * psi[k % n].conj()).collect();
        DensityMatrixGrid::from_values(*axis, values).expect("square by construction")
    }

    /// Group speed `ħk/M`.
    pub fn speed(&self, params: &PhysParams) -> f64 {
        params.hbar() * self.wavenumber / params.mass()
    }

    /// Interval outside of which `|ψ|` is below 1e-18 of its peak.
    pub fn support(&self) -> (f64, f64) {
        let reach = 2.0 * self.sigma * (18.0 * std::f64::consts::LN_10).sqrt();
        (self.center - reach, self.center + reach)
    }

    pub fn separable_term(&self) -> SeparableTerm<'static> {
        let packet = *self;
        SeparableTerm {
            weight: Complex64::new(1.0, 0.0),
            forward: Box::new(move |s| packet.psi(s)),
            backward: Box::new(move |s| packet.psi(s).conj()),
            forward_support: self.support(),
            backward_support: self.support(),
        }
    }

    /// Free-particle position variance `σ² + (ħt / 2Mσ)²`.
    pub fn free_variance(&self, t: f64, params: &PhysParams) -> f64 {
        let s = self.sigma;
        s * s + (params.hbar() * t / (2.0 * params.mass() * s)).powi(2)
    }
}

/// Diagonal `ρ(x, x)` of a snapshot as a screen pattern.
pub fn pattern_from_snapshot(snapshot: &Snapshot, params: &PhysParams) -> DiffractionPattern {
    let rho = &snapshot.rho;
    DiffractionPattern::new(
        rho.axis().points(),
        rho.diagonal().iter().map(|v| v.re).collect(),
        Method::EvolverDiagonal,
        PatternMeta {
            t: snapshot.t,
            k: f64::NAN,
            beta: f64::NAN,
            gamma: params.gamma(),
        },
    )
}
