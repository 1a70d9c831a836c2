// SPDX-License-Identifier: Apache-2.0

//! First and second derivatives of periodic samples.
//!
//! The spectral first derivative zeroes the Nyquist mode so that, as a
//! matrix, it is real and antisymmetric like the continuum operator. The
//! second derivative keeps it.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::slit::Axis;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DerivativeScheme {
    #[default]
    Spectral,
    /// Five-point centred stencils, fourth order in the spacing.
    CentralOrder4,
}

/// Derivatives along one periodic axis. Cheap to clone; FFT plans are shared.
#[derive(Clone)]
pub struct Differentiator {
    n: usize,
    spacing: f64,
    scheme: DerivativeScheme,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    // Fourier multipliers, already divided by n.
    first_symbol: Vec<Complex64>,
    second_symbol: Vec<f64>,
}

impl std::fmt::Debug for Differentiator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Differentiator")
            .field("n", &self.n)
            .field("spacing", &self.spacing)
            .field("scheme", &self.scheme)
            .finish()
    }
}

impl Differentiator {
    pub fn new(axis: &Axis, scheme: DerivativeScheme) -> Self {
        let n = axis.len;
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        let scale = 1.0 / n as f64;
        let mut first_symbol = Vec::with_capacity(n);
        let mut second_symbol = Vec::with_capacity(n);
        for m in 0..n {
            let signed = if 2 * m <= n { m as f64 } else { m as f64 - n as f64 };
            let k = 2.0 * PI * signed / axis.period();
            let k1 = if 2 * m == n { 0.0 } else { k };
            first_symbol.push(Complex64::new(0.0, k1 * scale));
            second_symbol.push(-k * k * scale);
        }
        Differentiator {
            n,
            spacing: axis.spacing,
            scheme,
            forward,
            inverse,
            first_symbol,
            second_symbol,
        }
    }

    pub fn scheme(&self) -> DerivativeScheme {
        self.scheme
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Largest |eigenvalue| of the first-derivative operator.
    pub fn first_bound(&self) -> f64 {
        let h = self.spacing;
        match self.scheme {
            DerivativeScheme::Spectral => self
                .first_symbol
                .iter()
                .map(|s| s.im.abs() * self.n as f64)
                .fold(0.0, f64::max),
            DerivativeScheme::CentralOrder4 => (0..self.n)
                .map(|m| {
                    let th = 2.0 * PI * m as f64 / self.n as f64;
                    ((8.0 * th.sin() - (2.0 * th).sin()) / (6.0 * h)).abs()
                })
                .fold(0.0, f64::max),
        }
    }

    /// Largest |eigenvalue| of the second-derivative operator.
    pub fn second_bound(&self) -> f64 {
        let h = self.spacing;
        match self.scheme {
            DerivativeScheme::Spectral => self
                .second_symbol
                .iter()
                .map(|s| s.abs() * self.n as f64)
                .fold(0.0, f64::max),
            DerivativeScheme::CentralOrder4 => (0..self.n)
                .map(|m| {
                    let th = 2.0 * PI * m as f64 / self.n as f64;
                    ((30.0 - 32.0 * th.cos() + 2.0 * (2.0 * th).cos()) / (12.0 * h * h)).abs()
                })
                .fold(0.0, f64::max),
        }
    }

    /// Scratch space sized for [`Differentiator::both`].
    pub fn scratch(&self) -> Vec<Complex64> {
        let len = self
            .forward
            .get_inplace_scratch_len()
            .max(self.inverse.get_inplace_scratch_len());
        vec![Complex64::new(0.0, 0.0); len + self.n]
    }

    /// Writes f′ into `d1` and f″ into `d2`.
    pub fn both(
        &self,
        f: &[Complex64],
        d1: &mut [Complex64],
        d2: &mut [Complex64],
        scratch: &mut [Complex64],
    ) {
        let n = self.n;
        assert!(f.len() == n && d1.len() == n && d2.len() == n);
        match self.scheme {
            DerivativeScheme::Spectral => {
                let (spec, work) = scratch.split_at_mut(n);
                spec.copy_from_slice(f);
                self.forward.process_with_scratch(spec, work);
                for m in 0..n {
                    d1[m] = spec[m] * self.first_symbol[m];
                    d2[m] = spec[m] * self.second_symbol[m];
                }
                self.inverse.process_with_scratch(d1, work);
                self.inverse.process_with_scratch(d2, work);
            }
            DerivativeScheme::CentralOrder4 => {
                let h = self.spacing;
                let c1 = 1.0 / (12.0 * h);
                let c2 = 1.0 / (12.0 * h * h);
                for i in 0..n {
                    let m2 = f[(i + n - 2) % n];
                    let m1 = f[(i + n - 1) % n];
                    let p1 = f[(i + 1) % n];
                    let p2 = f[(i + 2) % n];
                    d1[i] = (m2 - p2 + (p1 - m1) * 8.0) * c1;
                    d2[i] = ((p1 + m1) * 16.0 - (p2 + m2) - f[i] * 30.0) * c2;
                }
            }
        }
    }

    pub fn first(&self, f: &[Complex64]) -> Vec<Complex64> {
        let mut d1 = vec![Complex64::new(0.0, 0.0); self.n];
        let mut d2 = d1.clone();
        let mut scratch = self.scratch();
        self.both(f, &mut d1, &mut d2, &mut scratch);
        d1
    }

    pub fn second(&self, f: &[Complex64]) -> Vec<Complex64> {
        let mut d1 = vec![Complex64::new(0.0, 0.0); self.n];
        let mut d2 = d1.clone();
        let mut scratch = self.scratch();
        self.both(f, &mut d1, &mut d2, &mut scratch);
        d2
    }

    /// Fraction of `Σ|f̂|²` carried by modes above 2/3 of the Nyquist
    /// wavenumber.
    pub fn high_mode_fraction(&self, f: &[Complex64], scratch: &mut [Complex64]) -> (f64, f64) {
        let n = self.n;
        let (spec, work) = scratch.split_at_mut(n);
        spec.copy_from_slice(f);
        self.forward.process_with_scratch(spec, work);
        let cutoff = n / 3;
        let mut high = 0.0;
        let mut total = 0.0;
        for (m, v) in spec.iter().enumerate() {
            let signed = if 2 * m <= n { m } else { n - m };
            let p = v.norm_sqr();
            total += p;
            if signed > cutoff {
                high += p;
            }
        }
        (high, total)
    }
}
