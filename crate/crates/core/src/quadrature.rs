// SPDX-License-Identifier: Apache-2.0

//! Adaptive Gauss-Kronrod (7/15) quadrature for complex integrands.
//!
//! Intervals are bisected globally, always splitting the one with the
//! largest error estimate, until the summed estimate meets
//! `max(abs_tol, rel_tol * |I|)` or the subdivision budget runs out.

// Node and weight tables are quoted to 30 digits as published.
#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5] and the centre.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Maximum number of intervals held at once.
    pub max_subdivisions: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            abs_tol: 1e-13,
            rel_tol: 1e-10,
            max_subdivisions: 2000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: Complex64,
    pub error: f64,
    pub evaluations: usize,
}

/// One 15-point Kronrod panel with its embedded 7-point Gauss estimate.
fn kronrod_panel<F>(f: &F, a: f64, b: f64) -> (Complex64, f64)
where
    F: Fn(f64) -> Complex64,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += pair * WGK[j];
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    let kronrod = kronrod * half;
    let gauss = gauss * half;
    let mut err = (kronrod - gauss).norm();
    // Round-off floor: the panel cannot be resolved below a few ulps of its value.
    let floor = 50.0 * f64::EPSILON * kronrod.norm();
    if err < floor {
        err = floor;
    }
    (kronrod, err)
}

#[derive(Debug)]
struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Integrate `f` over `[a, b]`.
pub fn integrate<F>(f: F, a: f64, b: f64, cfg: &QuadConfig) -> Result<QuadResult>
where
    F: Fn(f64) -> Complex64,
{
    if a == b {
        return Ok(QuadResult {
            value: Complex64::new(0.0, 0.0),
            error: 0.0,
            evaluations: 0,
        });
    }
    let (value, error) = kronrod_panel(&f, a, b);
    let mut evaluations = 15;
    let mut heap = BinaryHeap::new();
    heap.push(Panel { a, b, value, error });
    let mut total = value;
    let mut total_err = error;

    loop {
        let tol = cfg.abs_tol.max(cfg.rel_tol * total.norm());
        if total_err <= tol {
            break;
        }
        if heap.len() >= cfg.max_subdivisions {
            return Err(Error::QuadratureFailure {
                a,
                b,
                estimate: total_err,
                tolerance: tol,
                evaluations,
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if !(worst.a < mid && mid < worst.b) {
            // Interval has collapsed to adjacent floats.
            return Err(Error::QuadratureFailure {
                a,
                b,
                estimate: total_err,
                tolerance: tol,
                evaluations,
            });
        }
        let (lv, le) = kronrod_panel(&f, worst.a, mid);
        let (rv, re) = kronrod_panel(&f, mid, worst.b);
        evaluations += 30;
        total += lv + rv - worst.value;
        total_err += le + re - worst.error;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            value: lv,
            error: le,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            value: rv,
            error: re,
        });
    }

    // Re-sum from the panels so the running update's cancellation error does
    // not leak into the result.
    let mut panels: Vec<Panel> = heap.into_vec();
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let value = panels.iter().map(|p| p.value).sum();
    let error = panels.iter().map(|p| p.error).sum();
    Ok(QuadResult {
        value,
        error,
        evaluations,
    })
}

/// Iterated integral over the rectangle `[ax, bx] x [ay, by]`, inner variable
/// `x`, outer variable `y`. The inner tolerance is tightened so the outer
/// rule sees a smooth integrand.
pub fn integrate_2d<F>(
    f: F,
    (ax, bx): (f64, f64),
    (ay, by): (f64, f64),
    cfg: &QuadConfig,
) -> Result<QuadResult>
where
    F: Fn(f64, f64) -> Complex64,
{
    let inner_cfg = QuadConfig {
        abs_tol: cfg.abs_tol / (by - ay).abs().max(1.0) * 0.1,
        rel_tol: cfg.rel_tol * 0.1,
        max_subdivisions: cfg.max_subdivisions,
    };
    let failure = std::cell::Cell::new(None);
    let inner_evals = std::cell::Cell::new(0usize);
    let outer = integrate(
        |y| match integrate(|x| f(x, y), ax, bx, &inner_cfg) {
            Ok(r) => {
                inner_evals.set(inner_evals.get() + r.evaluations);
                r.value
            }
            Err(e) => {
                failure.set(Some(e));
                Complex64::new(f64::NAN, f64::NAN)
            }
        },
        ay,
        by,
        cfg,
    );
    if let Some(e) = failure.take() {
        return Err(e);
    }
    let outer = outer?;
    Ok(QuadResult {
        value: outer.value,
        error: outer.error,
        evaluations: inner_evals.get(),
    })
}
