// SPDX-License-Identifier: Apache-2.0

//! Resistive action and oriented area of polylines in the `(x₊, x₋)` plane.
//!
//! Sign convention: the integrand `x₋ dx₊ − x₊ dx₋` is used as written.
//! Around a counterclockwise loop it gives minus twice the usual shoelace
//! area, so the unit square traversed counterclockwise has `Σ = −1`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::PhysParams;

/// Polyline with vertices `(x₊, x₋)`. A closed path returns to its first
/// vertex implicitly; the first vertex must not be repeated at the end.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanarPath {
    vertices: Vec<(f64, f64)>,
    closed: bool,
}

impl PlanarPath {
    pub fn new(vertices: Vec<(f64, f64)>, closed: bool) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::DegeneratePath(vertices.len()));
        }
        if let Some(i) = vertices
            .iter()
            .position(|(a, b)| !(a.is_finite() && b.is_finite()))
        {
            return Err(Error::InvalidPath(format!("vertex {i} is not finite")));
        }
        if closed && vertices.first() == vertices.last() {
            return Err(Error::InvalidPath(
                "closed path repeats its first vertex; closure is implicit".into(),
            ));
        }
        Ok(PlanarPath { vertices, closed })
    }

    pub fn open(vertices: Vec<(f64, f64)>) -> Result<Self> {
        Self::new(vertices, false)
    }

    pub fn closed(vertices: Vec<(f64, f64)>) -> Result<Self> {
        Self::new(vertices, true)
    }

    pub fn vertices(&self) -> &[(f64, f64)] {
        &self.vertices
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    /// First and last points; a closed path ends where it starts.
    pub fn endpoints(&self) -> ((f64, f64), (f64, f64)) {
        let first = self.vertices[0];
        let last = if self.closed {
            first
        } else {
            *self.vertices.last().expect("at least two vertices")
        };
        (first, last)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        PlanarPath {
            vertices: self
                .vertices
                .iter()
                .map(|&(a, b)| (a * factor, b * factor))
                .collect(),
            closed: self.closed,
        }
    }

    /// `∫ (x₋ dx₊ − x₊ dx₋)`, exact for straight segments.
    pub fn circulation(&self) -> f64 {
        let segment = |p: (f64, f64), q: (f64, f64)| p.1 * q.0 - p.0 * q.1;
        let open: f64 = self.vertices.windows(2).map(|w| segment(w[0], w[1])).sum();
        if self.closed {
            open + segment(*self.vertices.last().expect("nonempty"), self.vertices[0])
        } else {
            open
        }
    }
}

/// `S_R = (R/2) ∫ (x₋ dx₊ − x₊ dx₋)`.
pub fn resistive_action(path: &PlanarPath, params: &PhysParams) -> f64 {
    0.5 * params.friction() * path.circulation()
}

/// `Σ = ½ ∮ (x₋ dx₊ − x₊ dx₋)` around `p1` followed by `p2` reversed.
pub fn oriented_area_between(p1: &PlanarPath, p2: &PlanarPath) -> Result<f64> {
    if p1.endpoints() != p2.endpoints() {
        return Err(Error::EndpointMismatch);
    }
    Ok(0.5 * (p1.circulation() - p2.circulation()))
}

/// `R Σ / ħ` in radians.
pub fn interference_phase(p1: &PlanarPath, p2: &PlanarPath, params: &PhysParams) -> Result<f64> {
    Ok(params.friction() * oriented_area_between(p1, p2)? / params.hbar())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quantization {
    pub n: i64,
    pub residual: f64,
}

/// Nearest `n` with `RΣ = 2πnħ`, and the leftover phase `RΣ/ħ − 2πn`.
///
/// Half-integer ratios round to the even `n`, so the residual is `+π` or
/// `−π` there. Ratios within a few ulps of an integer give residual 0.
pub fn constructive_condition(sigma: f64, params: &PhysParams) -> Quantization {
    let ratio = params.friction() * sigma / (2.0 * PI * params.hbar());
    let n = ratio.round_ties_even();
    let frac = ratio - n;
    let snap = 4.0 * f64::EPSILON * ratio.abs().max(1.0);
    Quantization {
        n: n as i64,
        residual: if frac.abs() <= snap { 0.0 } else { 2.0 * PI * frac },
    }
}
