// SPDX-License-Identifier: Apache-2.0

//! Classical Langevin ensembles `M ẍ + R ẋ = f` and Monte Carlo checks of
//! the Gaussian noise identities.
//!
//! Every trajectory and every Monte Carlo sample owns a ChaCha8 stream
//! selected by its index, so results do not depend on the thread count.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_positive, Error, Result};
use crate::params::PhysParams;

/// Smallest accepted ensemble.
pub const MIN_ENSEMBLES: usize = 100;
/// Smallest accepted Monte Carlo sample for the noise average.
pub const MIN_NOISE_SAMPLES: usize = 1000;
/// Fit windows must start this many momentum-relaxation times `M/R` in.
pub const RELAXATION_TIMES: f64 = 10.0;

fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Pairwise (cascade) summation.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= 16 {
        return values.iter().sum();
    }
    let (a, b) = values.split_at(values.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

/// Mean and standard error of the mean of `values`, independent of their
/// order.
pub fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mean = pairwise_sum(&sorted) / n as f64;
    if n < 2 {
        return (mean, f64::NAN);
    }
    let dev: Vec<f64> = sorted.iter().map(|v| (v - mean) * (v - mean)).collect();
    let var = pairwise_sum(&dev) / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

fn default_stride() -> usize {
    1
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LangevinConfig {
    pub dt: f64,
    pub n_steps: usize,
    pub n_ensembles: usize,
    pub seed: u64,
    #[serde(default)]
    pub x0: f64,
    #[serde(default)]
    pub v0: f64,
    /// Record every `record_stride`-th step (step 0 is always recorded).
    #[serde(default = "default_stride")]
    pub record_stride: usize,
}

impl LangevinConfig {
    pub fn validate(&self, params: &PhysParams) -> Result<()> {
        check_positive("dt", self.dt)?;
        if params.friction() > 0.0 {
            let limit = params.mass() / (10.0 * params.friction());
            if self.dt >= limit {
                return Err(Error::UnstableDt { dt: self.dt, limit });
            }
        }
        if self.n_ensembles < MIN_ENSEMBLES {
            return Err(Error::InvalidParameter {
                name: "n_ensembles",
                reason: format!("need at least {MIN_ENSEMBLES}, got {}", self.n_ensembles),
            });
        }
        if self.n_steps == 0 {
            return Err(Error::InvalidParameter {
                name: "n_steps",
                reason: "must be positive".into(),
            });
        }
        if self.record_stride == 0 {
            return Err(Error::InvalidParameter {
                name: "record_stride",
                reason: "must be positive".into(),
            });
        }
        if !(self.x0.is_finite() && self.v0.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "x0/v0",
                reason: "initial conditions must be finite".into(),
            });
        }
        Ok(())
    }

    pub fn t_final(&self) -> f64 {
        self.n_steps as f64 * self.dt
    }
}

/// Positions and velocities of every trajectory at the recorded times.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    pub times: Vec<f64>,
    pub x: Vec<Vec<f64>>,
    pub v: Vec<Vec<f64>>,
    pub x0: f64,
}

impl Ensemble {
    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// Ensemble mean of `(x − x₀)²` with its standard error, per recorded time.
    pub fn msd(&self) -> Vec<(f64, f64, f64)> {
        (0..self.times.len())
            .map(|k| {
                let sq: Vec<f64> = self.x.iter().map(|x| (x[k] - self.x0).powi(2)).collect();
                let (m, se) = mean_and_stderr(&sq);
                (self.times[k], m, se)
            })
            .collect()
    }
}

/// One trajectory: exact exponential velocity relaxation over each step
/// with the force held constant, then `x += v dt`.
fn trajectory(cfg: &LangevinConfig, params: &PhysParams, index: usize) -> (Vec<f64>, Vec<f64>) {
    let (m, r, kt) = (params.mass(), params.friction(), params.thermal_energy());
    let dt = cfg.dt;
    let a = r * dt / m;
    let decay = (-a).exp();
    // Velocity gained per unit force over one step: (1 − e^{−a})/R, or dt/M without friction.
    let gain = if r > 0.0 { -(-a).exp_m1() / r } else { dt / m };
    let force_sd = (2.0 * r * kt / dt).sqrt();

    let mut rng = stream(cfg.seed, index as u64);
    let records = cfg.n_steps / cfg.record_stride + 1;
    let mut xs = Vec::with_capacity(records);
    let mut vs = Vec::with_capacity(records);
    let (mut x, mut v) = (cfg.x0, cfg.v0);
    xs.push(x);
    vs.push(v);
    for step in 1..=cfg.n_steps {
        let f = if force_sd > 0.0 {
            let z: f64 = StandardNormal.sample(&mut rng);
            force_sd * z
        } else {
            0.0
        };
        v = v * decay + f * gain;
        x += v * dt;
        if step % cfg.record_stride == 0 {
            xs.push(x);
            vs.push(v);
        }
    }
    (xs, vs)
}

pub fn simulate_langevin(cfg: &LangevinConfig, params: &PhysParams) -> Result<Ensemble> {
    cfg.validate(params)?;
    let (x, v): (Vec<_>, Vec<_>) = (0..cfg.n_ensembles)
        .into_par_iter()
        .map(|i| trajectory(cfg, params, i))
        .unzip();
    let times = (0..x[0].len())
        .map(|k| (k * cfg.record_stride) as f64 * cfg.dt)
        .collect();
    Ok(Ensemble {
        times,
        x,
        v,
        x0: cfg.x0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiffusionEstimate {
    pub d_hat: f64,
    pub stderr: f64,
    pub n_trajectories: usize,
    pub window: (f64, f64),
}

impl DiffusionEstimate {
    pub fn z_score(&self, expected: f64) -> f64 {
        (self.d_hat - expected) / self.stderr
    }
}

/// Default MSD fit window `[10, 100] · M/R`.
pub fn default_window(params: &PhysParams) -> Result<(f64, f64)> {
    if params.friction() == 0.0 {
        return Err(Error::ZeroFriction);
    }
    let tau = params.mass() / params.friction();
    Ok((10.0 * tau, 100.0 * tau))
}

/// Half the least-squares slope of MSD against t over `window`.
///
/// The slope is fitted per trajectory; its ensemble mean equals the slope of
/// the ensemble MSD, and the spread of the per-trajectory slopes gives a
/// standard error that accounts for correlations along each trajectory.
pub fn estimate_diffusion(
    ensemble: &Ensemble,
    window: (f64, f64),
    params: &PhysParams,
) -> Result<DiffusionEstimate> {
    if params.friction() == 0.0 {
        return Err(Error::ZeroFriction);
    }
    let required = RELAXATION_TIMES * params.mass() / params.friction();
    let (t0, t1) = window;
    if t0 < required * (1.0 - 1e-12) {
        return Err(Error::WindowTooEarly { start: t0, required });
    }
    let idx: Vec<usize> = ensemble
        .times
        .iter()
        .enumerate()
        .filter(|(_, &t)| t >= t0 * (1.0 - 1e-12) && t <= t1 * (1.0 + 1e-12))
        .map(|(k, _)| k)
        .collect();
    if idx.len() < 2 {
        return Err(Error::InvalidParameter {
            name: "window",
            reason: format!("fewer than two recorded times in [{t0}, {t1}]"),
        });
    }
    let ts: Vec<f64> = idx.iter().map(|&k| ensemble.times[k]).collect();
    let t_mean = pairwise_sum(&ts) / ts.len() as f64;
    let centred: Vec<f64> = ts.iter().map(|t| t - t_mean).collect();
    let sxx = pairwise_sum(&centred.iter().map(|c| c * c).collect::<Vec<_>>());

    let x0 = ensemble.x0;
    let slopes: Vec<f64> = ensemble
        .x
        .par_iter()
        .map(|x| {
            let terms: Vec<f64> = idx
                .iter()
                .zip(&centred)
                .map(|(&k, c)| c * (x[k] - x0).powi(2))
                .collect();
            pairwise_sum(&terms) / sxx
        })
        .collect();
    let (slope, se) = mean_and_stderr(&slopes);
    Ok(DiffusionEstimate {
        d_hat: 0.5 * slope,
        stderr: 0.5 * se,
        n_trajectories: slopes.len(),
        window,
    })
}

/// Long-time velocity variance against `kT/M`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Equipartition {
    pub variance: f64,
    pub stderr: f64,
    pub expected: f64,
    pub z_score: f64,
}

/// Velocity variance across the ensemble at the last recorded time.
pub fn equipartition(ensemble: &Ensemble, params: &PhysParams) -> Equipartition {
    let last: Vec<f64> = ensemble
        .v
        .iter()
        .map(|v| *v.last().expect("step 0 recorded"))
        .collect();
    let (mean, _) = mean_and_stderr(&last);
    let sq: Vec<f64> = last.iter().map(|v| (v - mean).powi(2)).collect();
    let (variance, stderr) = mean_and_stderr(&sq);
    let expected = params.thermal_energy() / params.mass();
    Equipartition {
        variance,
        stderr,
        expected,
        z_score: if stderr > 0.0 {
            (variance - expected) / stderr
        } else {
            0.0
        },
    }
}

/// Monte Carlo estimate of `⟨exp[(i/ħ) Σ yᵢ fᵢ dt]⟩` against its exact value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseAverage {
    pub lhs: Complex64,
    pub stderr: f64,
    pub rhs: f64,
}

impl NoiseAverage {
    /// `|lhs − rhs| <= 3 · stderr`.
    pub fn consistent(&self) -> bool {
        (self.lhs - self.rhs).norm() <= 3.0 * self.stderr
    }
}

/// Average of `exp[(i/ħ) Σ yᵢ fᵢ dt]` over forces with `⟨fᵢ fⱼ⟩ = (2RkT/dt) δᵢⱼ`.
/// The exact value is `exp[−(kT R/ħ²) Σ yᵢ² dt]`.
pub fn noise_average_check(
    y: &[f64],
    dt: f64,
    params: &PhysParams,
    n_samples: usize,
    seed: u64,
) -> Result<NoiseAverage> {
    check_positive("dt", dt)?;
    if n_samples < MIN_NOISE_SAMPLES {
        return Err(Error::InvalidParameter {
            name: "n_samples",
            reason: format!("need at least {MIN_NOISE_SAMPLES}, got {n_samples}"),
        });
    }
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "y",
            reason: "path contains non-finite values".into(),
        });
    }
    let (hbar, r, kt) = (params.hbar(), params.friction(), params.thermal_energy());
    let force_sd = (2.0 * r * kt / dt).sqrt();
    let samples: Vec<Complex64> = (0..n_samples)
        .into_par_iter()
        .map(|s| {
            let mut rng = stream(seed, s as u64);
            let terms: Vec<f64> = y
                .iter()
                .map(|&yi| {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    yi * force_sd * z * dt / hbar
                })
                .collect();
            Complex64::from_polar(1.0, pairwise_sum(&terms))
        })
        .collect();
    let re: Vec<f64> = samples.iter().map(|c| c.re).collect();
    let im: Vec<f64> = samples.iter().map(|c| c.im).collect();
    let (mre, sre) = mean_and_stderr(&re);
    let (mim, sim) = mean_and_stderr(&im);
    let y2: Vec<f64> = y.iter().map(|v| v * v).collect();
    Ok(NoiseAverage {
        lhs: Complex64::new(mre, mim),
        stderr: (sre * sre + sim * sim).sqrt(),
        rhs: (-kt * r * pairwise_sum(&y2) * dt / (hbar * hbar)).exp(),
    })
}

/// Empirical statistics of `yᵢ` drawn with variance `ħ²/(2RkT·dt)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct YCorrelator {
    pub dt: f64,
    pub expected_variance: f64,
    pub variance: f64,
    pub variance_stderr: f64,
    /// Normalized lag-1 correlation `⟨yᵢ yᵢ₊₁⟩ / σ²`.
    pub lag1: f64,
    pub lag1_stderr: f64,
}

impl YCorrelator {
    pub fn variance_z(&self) -> f64 {
        (self.variance - self.expected_variance) / self.variance_stderr
    }

    pub fn lag1_z(&self) -> f64 {
        self.lag1 / self.lag1_stderr
    }
}

pub fn y_correlator_check(params: &PhysParams, dt: f64, n_samples: usize, seed: u64) -> Result<YCorrelator> {
    check_positive("dt", dt)?;
    if params.thermal_energy() == 0.0 {
        return Err(Error::ZeroTemperature);
    }
    if params.friction() == 0.0 {
        return Err(Error::ZeroFriction);
    }
    if n_samples < 3 {
        return Err(Error::InvalidParameter {
            name: "n_samples",
            reason: format!("need at least 3, got {n_samples}"),
        });
    }
    let hbar = params.hbar();
    let expected = hbar * hbar / (2.0 * params.friction() * params.thermal_energy() * dt);
    let sd = expected.sqrt();
    let mut rng = stream(seed, 0);
    let y: Vec<f64> = (0..n_samples)
        .map(|_| {
            let z: f64 = StandardNormal.sample(&mut rng);
            sd * z
        })
        .collect();
    let sq: Vec<f64> = y.iter().map(|v| v * v).collect();
    let (variance, variance_stderr) = mean_and_stderr(&sq);
    let lag: Vec<f64> = y.windows(2).map(|w| w[0] * w[1] / expected).collect();
    let (lag1, lag1_stderr) = mean_and_stderr(&lag);
    Ok(YCorrelator {
        dt,
        expected_variance: expected,
        variance,
        variance_stderr,
        lag1,
        lag1_stderr,
    })
}
