// SPDX-License-Identifier: Apache-2.0

// Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;
use qbm_core::kernel::kernel_k0;
use qbm_core::PhysParams;

/// Far-field two-slit pattern for top-hat slits of width `beta·d` at `±d`,
/// integrated by hand: `(βK/π) cos²(Kx) sinc²(βKx/2)`.
pub fn farfield_by_hand(k: f64, beta: f64, x: f64) -> f64 {
    let u = 0.5 * beta * k * x;
    let sinc = if u == 0.0 { 1.0 } else { u.sin() / u };
    beta * k / PI * (k * x).cos().powi(2) * sinc * sinc
}

/// Max |a − b| over max |b|.
pub fn sup_relative(a: &[f64], b: &[f64]) -> f64 {
    let diff = a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    diff / b.iter().map(|y| y.abs()).fold(0.0, f64::max)
}

/// Least-squares slope of `y` against `x`.
pub fn ls_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// Four-term Blackman-Harris window.
pub fn blackman_harris(n: usize) -> Vec<f64> {
    let (a0, a1, a2, a3) = (0.35875, 0.48829, 0.14128, 0.01168);
    (0..n)
        .map(|i| {
            let z = 2.0 * PI * i as f64 / (n - 1) as f64;
            a0 - a1 * z.cos() + a2 * (2.0 * z).cos() - a3 * (3.0 * z).cos()
        })
        .collect()
}

/// Windowed power of `p(x)` at angular spatial frequency `omega`.
pub fn windowed_power(x: &[f64], p: &[f64], omega: f64) -> f64 {
    let w = blackman_harris(p.len());
    let s: Complex64 = x
        .iter()
        .zip(p)
        .zip(&w)
        .map(|((x, p), w)| Complex64::from_polar(p * w, -omega * x))
        .sum();
    s.norm_sqr()
}

fn fd4_first<F: Fn(f64) -> Complex64>(f: F, x: f64, h: f64) -> Complex64 {
    (f(x - 2.0 * h) - f(x + 2.0 * h) + (f(x + h) - f(x - h)) * 8.0) / (12.0 * h)
}

fn fd4_second<F: Fn(f64) -> Complex64>(f: F, x: f64, h: f64) -> Complex64 {
    ((f(x + h) + f(x - h)) * 16.0 - f(x + 2.0 * h) - f(x - 2.0 * h) - f(x) * 30.0) / (12.0 * h * h)
}

/// Residual of `iħ ∂ₜK = ℋ₀ K` for the zero-temperature, force-free kernel
/// at `(x₊, x₋, t)` with the source point fixed, by fourth-order differences.
/// Returns `(|residual|, scale)` where `scale` is the largest single term.
pub fn kernel_pde_residual(
    x_plus: f64,
    x_minus: f64,
    src_plus: f64,
    src_minus: f64,
    t: f64,
    params: &PhysParams,
    h: f64,
) -> (f64, f64) {
    let (m, hbar, r) = (params.mass(), params.hbar(), params.friction());
    let k = |a: f64, b: f64, s: f64| kernel_k0(a, src_plus, b, src_minus, s, params).unwrap().value;
    let k0 = k(x_plus, x_minus, t);
    let dt = fd4_first(|s| k(x_plus, x_minus, s), t, h * t);
    let dp = fd4_first(|a| k(a, x_minus, t), x_plus, h);
    let dpp = fd4_second(|a| k(a, x_minus, t), x_plus, h);
    let dm = fd4_first(|b| k(x_plus, b, t), x_minus, h);
    let dmm = fd4_second(|b| k(x_plus, b, t), x_minus, h);
    let i = Complex64::i();

    let terms = [
        i * hbar * dt,
        -dpp * (hbar * hbar / (2.0 * m)),
        i * dp * (hbar * r * x_minus / (2.0 * m)),
        k0 * (r * r * x_minus * x_minus / (8.0 * m)),
        dmm * (hbar * hbar / (2.0 * m)),
        i * dm * (hbar * r * x_plus / (2.0 * m)),
        -k0 * (r * r * x_plus * x_plus / (8.0 * m)),
    ];
    // terms[0] − Σ terms[1..] should vanish.
    let residual = terms[0] - terms[1..].iter().sum::<Complex64>();
    let scale = terms.iter().map(|t| t.norm()).fold(0.0, f64::max);
    (residual.norm(), scale)
}
