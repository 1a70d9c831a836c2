// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;

use qbm_core::diffraction::{default_samples, pattern_damped_rescaled, pattern_exact};
use qbm_core::quadrature::QuadConfig;
use qbm_core::slit::{AnalyticDensity, SlitGeometry, SlitProfile};
use qbm_core::PhysParams;

/// Composite Simpson over `n` (even) intervals of width `h`.
fn simpson(f: &[f64], h: f64) -> f64 {
    let n = f.len() - 1;
    assert!(n.is_multiple_of(2));
    let inner: f64 = (1..n)
        .map(|i| if i % 2 == 1 { 4.0 * f[i] } else { 2.0 * f[i] })
        .sum();
    h / 3.0 * (f[0] + f[n] + inner)
}

fn grid(x_max: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|i| x_max * i as f64 / n as f64).collect()
}

// Sharp slit edges leave a 1/x² tail. Far out, each of the four edges adds
// |φ_e|²/(2κx)² on average (κ = M/2ħt), so the mean density is
// ħt/(πwMx²) and the mass beyond ±X is 2ħt/(πwMX).
#[test]
fn fresnel_pattern_is_normalized() {
    let p = PhysParams::new(1.0, 0.0, 1.0, 0.0).unwrap();
    let (w, t) = (0.1, 1.0);
    let g = SlitGeometry::new(w, 0.5, 1.0, 1.0).unwrap();
    let rho = AnalyticDensity::two_slit(&g);
    let (x_max, n) = (2000.0, 20_000);
    let xs = grid(x_max, n);
    let pat = pattern_exact(&rho, t, &xs, &p, &QuadConfig::default()).unwrap();
    let inside = 2.0 * simpson(&pat.p, x_max / n as f64);
    let tail = 2.0 * p.hbar() * t / (PI * w * p.mass() * x_max);
    let total = inside + tail;
    assert!(
        (total - 1.0).abs() < 1e-4,
        "inside {inside}, tail {tail}, total {total}"
    );
}

#[test]
fn fresnel_pattern_symmetric_and_nonnegative() {
    let p = PhysParams::new(1.0, 0.0, 1.0, 0.0).unwrap();
    let g = SlitGeometry::new(0.1, 1.0, 20.0, 2.0).unwrap();
    let rho = AnalyticDensity::two_slit(&g);
    let xs = default_samples(0.1, 6.0 * PI, 401);
    let pat = pattern_exact(&rho, g.flight_time(), &xs, &p, &QuadConfig::default()).unwrap();
    let peak = pat.max();
    assert!(pat.negativity() < 1e-9);
    for i in 0..xs.len() {
        let j = xs.len() - 1 - i;
        assert!((pat.p[i] - pat.p[j]).abs() < 1e-9 * peak);
    }
}

// Gaussian slits make the far field decay fast, so a finite range holds
// all the mass.
#[test]
fn rescaled_pattern_carries_decayed_mass() {
    let g = SlitGeometry::new(0.1, 1.0, 20.0, 2.0).unwrap();
    let rho = AnalyticDensity::two_slit_with_profile(&g, SlitProfile::Gaussian);
    for r in [0.0, 0.05, 0.3] {
        let p = PhysParams::new(1.0, r, 1.0, 0.0).unwrap();
        let t = g.flight_time();
        let xs = grid(4000.0, 200_000);
        let pat = pattern_damped_rescaled(&rho, t, &xs, &p).unwrap();
        let mass = 2.0 * simpson(&pat.p, xs[1]);
        let expected = (-p.gamma() * t).exp();
        assert!(
            (mass - expected).abs() < 1e-6 * expected,
            "R = {r}: {mass} vs {expected}"
        );
    }
}
