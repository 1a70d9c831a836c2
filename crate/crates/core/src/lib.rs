// SPDX-License-Identifier: Apache-2.0

//! Quantum Brownian motion in doubled (forward/backward-in-time)
//! coordinates: two-slit diffraction with and without dissipation,
//! master-equation evolution of the density matrix, classical Langevin
//! checks and dissipative-flux phases.

// `!(x > 0.0)` is used on purpose: it rejects NaN along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod diffraction;
pub mod error;
pub mod evolver;
pub mod flux;
pub mod kernel;
pub mod params;
pub mod quadrature;
pub mod slit;
pub mod spectral;
pub mod stochastic;

pub use error::{Error, Result};
pub use params::{PhysParams, Regime, RegimeTag};
