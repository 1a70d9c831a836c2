// SPDX-License-Identifier: Apache-2.0

//! Two-slit initial states: the wavefunction through the slits, the
//! four-term density matrix it induces, and its sampling on a square grid.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_positive, Error, Result};
use crate::params::PhysParams;

/// Minimum number of grid nodes that must fall inside one slit.
pub const MIN_POINTS_PER_SLIT: usize = 8;

/// Default ratio used for the `w << d << D` diffraction-limit flag.
pub const DEFAULT_LIMIT_RATIO: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GeometryRaw", into = "GeometryRaw")]
pub struct SlitGeometry {
    width: f64,
    half_separation: f64,
    screen_distance: f64,
    speed: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GeometryRaw {
    w: f64,
    d: f64,
    #[serde(rename = "D")]
    screen: f64,
    v: f64,
}

impl TryFrom<GeometryRaw> for SlitGeometry {
    type Error = Error;

    fn try_from(raw: GeometryRaw) -> Result<Self> {
        SlitGeometry::new(raw.w, raw.d, raw.screen, raw.v)
    }
}

impl From<SlitGeometry> for GeometryRaw {
    fn from(g: SlitGeometry) -> Self {
        GeometryRaw {
            w: g.width,
            d: g.half_separation,
            screen: g.screen_distance,
            v: g.speed,
        }
    }
}

impl SlitGeometry {
    pub fn new(width: f64, half_separation: f64, screen_distance: f64, speed: f64) -> Result<Self> {
        check_positive("w", width)?;
        check_positive("d", half_separation)?;
        check_positive("D", screen_distance)?;
        check_positive("v", speed)?;
        if width >= 2.0 * half_separation {
            return Err(Error::InvalidParameter {
                name: "w",
                reason: format!(
                    "slits overlap: w = {width} must be < 2d = {}",
                    2.0 * half_separation
                ),
            });
        }
        Ok(SlitGeometry {
            width,
            half_separation,
            screen_distance,
            speed,
        })
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn half_separation(&self) -> f64 {
        self.half_separation
    }

    pub fn screen_distance(&self) -> f64 {
        self.screen_distance
    }

    pub fn speed(&self) -> f64 {
        self.speed
    }

    /// Flight time t = D / v from the slits to the screen.
    pub fn flight_time(&self) -> f64 {
        self.screen_distance / self.speed
    }

    /// True when `d / w >= ratio` and `D / d >= ratio`.
    pub fn regime_ok(&self, ratio: f64) -> bool {
        self.half_separation / self.width >= ratio && self.screen_distance / self.half_separation >= ratio
    }

    pub fn pattern_params(&self, params: &PhysParams) -> PatternParams {
        PatternParams {
            k: params.mass() * self.speed * self.half_separation / (params.hbar() * self.screen_distance),
            beta: self.width / self.half_separation,
        }
    }
}

/// Dimensionless fringe parameters: `K = M v d / (ħ D)`, `β = w / d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PatternParams {
    pub k: f64,
    pub beta: f64,
}

impl PatternParams {
    pub fn new(k: f64, beta: f64) -> Result<Self> {
        check_positive("K", k)?;
        check_positive("beta", beta)?;
        Ok(PatternParams { k, beta })
    }
}

/// Aperture profile of a single slit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SlitProfile {
    /// `1/√w` on the closed interval `|x| <= w/2`, zero elsewhere.
    #[default]
    TopHat,
    /// Normalized Gaussian amplitude with the top-hat's rms width `w/√12`.
    Gaussian,
}

impl SlitProfile {
    /// Single-slit amplitude φ(x) for a slit of width `w` centred at 0.
    pub fn amplitude(self, width: f64, x: f64) -> f64 {
        match self {
            SlitProfile::TopHat => {
                if x.abs() <= 0.5 * width {
                    1.0 / width.sqrt()
                } else {
                    0.0
                }
            }
            SlitProfile::Gaussian => {
                let s = gaussian_sigma(width);
                (2.0 * std::f64::consts::PI * s * s).powf(-0.25) * (-x * x / (4.0 * s * s)).exp()
            }
        }
    }
}

fn gaussian_sigma(width: f64) -> f64 {
    width / 12f64.sqrt()
}

/// ψ₀(x) = [φ(x − d) + φ(x + d)] / √2 with the top-hat profile.
pub fn slit_wavefunction(geom: &SlitGeometry, x: f64) -> f64 {
    let w = geom.width;
    let d = geom.half_separation;
    (SlitProfile::TopHat.amplitude(w, x - d) + SlitProfile::TopHat.amplitude(w, x + d))
        / std::f64::consts::SQRT_2
}

/// One product term `weight · φ(x₊ − center_plus) · φ(x₋ − center_minus)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityTerm {
    pub center_plus: f64,
    pub center_minus: f64,
    pub weight: Complex64,
}

/// Density matrix written as a sum of slit-profile products.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyticDensity {
    pub terms: Vec<DensityTerm>,
    pub width: f64,
    pub profile: SlitProfile,
}

impl AnalyticDensity {
    /// The two-slit density: slit 1 twice, slit 2 twice, and the two cross
    /// terms, each with weight 1/2.
    pub fn two_slit(geom: &SlitGeometry) -> Self {
        Self::two_slit_with_profile(geom, SlitProfile::TopHat)
    }

    pub fn two_slit_with_profile(geom: &SlitGeometry, profile: SlitProfile) -> Self {
        let d = geom.half_separation;
        let half = Complex64::new(0.5, 0.0);
        let terms = [(d, d), (-d, -d), (d, -d), (-d, d)]
            .into_iter()
            .map(|(center_plus, center_minus)| DensityTerm {
                center_plus,
                center_minus,
                weight: half,
            })
            .collect();
        AnalyticDensity {
            terms,
            width: geom.width,
            profile,
        }
    }

    /// A single slit of width `w` centred at the origin.
    pub fn single_slit(width: f64) -> Result<Self> {
        check_positive("w", width)?;
        Ok(AnalyticDensity {
            terms: vec![DensityTerm {
                center_plus: 0.0,
                center_minus: 0.0,
                weight: Complex64::new(1.0, 0.0),
            }],
            width,
            profile: SlitProfile::TopHat,
        })
    }

    /// Drops every term with `center_plus != center_minus`, leaving only the
    /// paths that pass the same slit forward and backward in time.
    pub fn diagonal_only(&self) -> Self {
        AnalyticDensity {
            terms: self
                .terms
                .iter()
                .copied()
                .filter(|t| t.center_plus == t.center_minus)
                .collect(),
            ..self.clone()
        }
    }

    pub fn eval(&self, x_plus: f64, x_minus: f64) -> Complex64 {
        self.terms
            .iter()
            .map(|t| {
                t.weight
                    * self.profile.amplitude(self.width, x_plus - t.center_plus)
                    * self.profile.amplitude(self.width, x_minus - t.center_minus)
            })
            .sum()
    }

    /// Analytic trace: only terms with coinciding centres overlap on the
    /// diagonal, and each profile is normalized.
    pub fn trace(&self) -> Complex64 {
        self.terms
            .iter()
            .map(|t| t.weight * self.profile_overlap(t.center_plus - t.center_minus))
            .sum()
    }

    /// ∫ φ(x − a) φ(x − b) dx as a function of `a − b`.
    fn profile_overlap(&self, shift: f64) -> f64 {
        match self.profile {
            SlitProfile::TopHat => ((self.width - shift.abs()) / self.width).max(0.0),
            SlitProfile::Gaussian => {
                let s = gaussian_sigma(self.width);
                (-shift * shift / (8.0 * s * s)).exp()
            }
        }
    }

    /// Every term (a, b, c) has a partner (b, a, conj c).
    pub fn is_hermitian_closed(&self) -> bool {
        self.terms.iter().all(|t| {
            self.terms.iter().any(|u| {
                u.center_plus == t.center_minus
                    && u.center_minus == t.center_plus
                    && u.weight == t.weight.conj()
            })
        })
    }

    /// Half-width of the region outside which a single profile is zero (top
    /// hat) or below 1e-16 of its peak (Gaussian).
    pub fn profile_reach(&self) -> f64 {
        match self.profile {
            SlitProfile::TopHat => 0.5 * self.width,
            SlitProfile::Gaussian => 2.0 * gaussian_sigma(self.width) * (16.0 * 10f64.ln()).sqrt(),
        }
    }
}

/// Uniform periodic axis `x_i = start + i * spacing`, `i < len`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub start: f64,
    pub spacing: f64,
    pub len: usize,
}

impl Axis {
    /// `n` points covering `[x_min, x_max)`.
    pub fn periodic(x_min: f64, x_max: f64, n: usize) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite() && x_max > x_min) {
            return Err(Error::InvalidParameter {
                name: "grid",
                reason: format!("need x_min < x_max, got [{x_min}, {x_max}]"),
            });
        }
        if n < 2 {
            return Err(Error::InvalidParameter {
                name: "grid",
                reason: format!("need at least 2 points, got {n}"),
            });
        }
        Ok(Axis {
            start: x_min,
            spacing: (x_max - x_min) / n as f64,
            len: n,
        })
    }

    pub fn point(&self, i: usize) -> f64 {
        self.start + i as f64 * self.spacing
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len).map(|i| self.point(i)).collect()
    }

    pub fn last(&self) -> f64 {
        self.point(self.len - 1)
    }

    pub fn period(&self) -> f64 {
        self.spacing * self.len as f64
    }
}

/// Complex samples ρ(x₊, x₋) on `axis × axis`, row-major with rows indexed
/// by x₊.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrixGrid {
    axis: Axis,
    values: Vec<Complex64>,
}

impl DensityMatrixGrid {
    pub fn from_values(axis: Axis, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != axis.len * axis.len {
            return Err(Error::ShapeMismatch(format!(
                "{} values for a {}x{} grid",
                values.len(),
                axis.len,
                axis.len
            )));
        }
        Ok(DensityMatrixGrid { axis, values })
    }

    pub fn from_fn<F>(axis: Axis, f: F) -> Self
    where
        F: Fn(f64, f64) -> Complex64,
    {
        let n = axis.len;
        let mut values = Vec::with_capacity(n * n);
        for i in 0..n {
            let xp = axis.point(i);
            for j in 0..n {
                values.push(f(xp, axis.point(j)));
            }
        }
        DensityMatrixGrid { axis, values }
    }

    pub fn axis(&self) -> &Axis {
        &self.axis
    }

    pub fn n(&self) -> usize {
        self.axis.len
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.values[i * self.axis.len + j]
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.n()).map(|i| self.get(i, i)).collect()
    }

    /// max |ρ(x₊, x₋) − conj ρ(x₋, x₊)|.
    pub fn hermiticity_residual(&self) -> f64 {
        let n = self.n();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Trapezoid rule on the periodic diagonal (all weights equal).
    pub fn trace(&self) -> Complex64 {
        self.diagonal().iter().sum::<Complex64>() * self.axis.spacing
    }
}

/// Sample `density` on `axis × axis`.
///
/// Top-hat slits are sampled at the nodes inside each closed slit interval,
/// with the amplitude normalized over those nodes so every slit carries unit
/// discrete norm. Gaussian slits are sampled pointwise.
pub fn discretize(density: &AnalyticDensity, axis: &Axis) -> Result<DensityMatrixGrid> {
    let w = density.width;
    let reach = density.profile_reach();
    let (lo, hi) = density
        .terms
        .iter()
        .flat_map(|t| [t.center_plus, t.center_minus])
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), c| {
            (lo.min(c - reach), hi.max(c + reach))
        });
    if lo < axis.start || hi > axis.last() {
        return Err(Error::GridTooSmall { lo, hi });
    }
    if density.profile == SlitProfile::Gaussian {
        let across = (w / axis.spacing * (1.0 + 1e-12)).floor() as usize;
        if across < MIN_POINTS_PER_SLIT {
            return Err(Error::GridTooCoarse {
                points: across,
                required: MIN_POINTS_PER_SLIT,
            });
        }
    }

    let profile_on_grid = |center: f64| -> Result<Vec<f64>> {
        match density.profile {
            SlitProfile::TopHat => {
                // Nodes that sit on an edge up to rounding count as inside.
                let edge = 0.5 * w + 1e-9 * axis.spacing;
                let inside: Vec<bool> = (0..axis.len)
                    .map(|i| (axis.point(i) - center).abs() <= edge)
                    .collect();
                let count = inside.iter().filter(|&&b| b).count();
                if count < MIN_POINTS_PER_SLIT {
                    return Err(Error::GridTooCoarse {
                        points: count,
                        required: MIN_POINTS_PER_SLIT,
                    });
                }
                let height = 1.0 / (count as f64 * axis.spacing).sqrt();
                Ok(inside.into_iter().map(|b| if b { height } else { 0.0 }).collect())
            }
            SlitProfile::Gaussian => Ok((0..axis.len)
                .map(|i| SlitProfile::Gaussian.amplitude(w, axis.point(i) - center))
                .collect()),
        }
    };

    let n = axis.len;
    let mut values = vec![Complex64::new(0.0, 0.0); n * n];
    for term in &density.terms {
        let fp = profile_on_grid(term.center_plus)?;
        let fm = profile_on_grid(term.center_minus)?;
        for i in 0..n {
            if fp[i] == 0.0 {
                continue;
            }
            for j in 0..n {
                values[i * n + j] += term.weight * (fp[i] * fm[j]);
            }
        }
    }
    if density.is_hermitian_closed() {
        // Summation order differs between (i, j) and (j, i); mirror the upper
        // triangle so the sampled matrix is Hermitian bit for bit.
        for i in 0..n {
            values[i * n + i].im = 0.0;
            for j in i + 1..n {
                values[j * n + i] = values[i * n + j].conj();
            }
        }
    }
    Ok(DensityMatrixGrid { axis: *axis, values })
}
