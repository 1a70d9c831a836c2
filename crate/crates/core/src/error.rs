// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("friction R is zero; the Einstein relation and regime ratio are undefined")]
    ZeroFriction,

    #[error("time must be positive, got {0}")]
    NonpositiveTime(f64),

    #[error("grid too coarse: {points} points across a slit of width w, need at least {required}")]
    GridTooCoarse { points: usize, required: usize },

    #[error("grid does not cover the slit support [{lo}, {hi}]")]
    GridTooSmall { lo: f64, hi: f64 },

    #[error("quadrature failed on [{a}, {b}]: error estimate {estimate:e} above tolerance {tolerance:e} after {evaluations} evaluations")]
    QuadratureFailure {
        a: f64,
        b: f64,
        estimate: f64,
        tolerance: f64,
        evaluations: usize,
    },

    #[error("unstable configuration: {0}")]
    UnstableConfig(String),

    #[error("non-finite value detected at step {step}")]
    NaNDetected { step: usize },

    #[error("trace magnitude {0:e} too small to normalize")]
    ZeroTrace(f64),

    #[error("Langevin step dt = {dt} must be below M/(10 R) = {limit}")]
    UnstableDt { dt: f64, limit: f64 },

    #[error("fit window starts at t = {start}, before 10 momentum-relaxation times ({required})")]
    WindowTooEarly { start: f64, required: f64 },

    #[error("temperature is zero; the y-correlator diverges")]
    ZeroTemperature,

    #[error("path needs at least 2 vertices, got {0}")]
    DegeneratePath(usize),

    #[error("paths must share first and last vertices")]
    EndpointMismatch,

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
}

pub(crate) fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: format!("must be finite and > 0, got {value}"),
        })
    }
}

pub(crate) fn check_nonnegative(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: format!("must be finite and >= 0, got {value}"),
        })
    }
}
