// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;

use qbm_core::diffraction::{pattern_damped_rescaled, pattern_exact, pattern_farfield};
use qbm_core::evolver::GaussianPacket;
use qbm_core::kernel::{pattern_damped_kernel, propagate_to_grid};
use qbm_core::quadrature::QuadConfig;
use qbm_core::slit::{AnalyticDensity, Axis, SlitGeometry};
use qbm_core::PhysParams;

fn params(r: f64) -> PhysParams {
    PhysParams::new(1.0, r, 1.0, 0.0).unwrap()
}

fn slits() -> (SlitGeometry, AnalyticDensity) {
    let g = SlitGeometry::new(0.1, 1.0, 20.0, 2.0).unwrap();
    let rho = AnalyticDensity::two_slit(&g);
    (g, rho)
}

fn packet_on_grid(t: f64, p: &PhysParams) -> (Axis, qbm_core::slit::DensityMatrixGrid) {
    let axis = Axis::periodic(-10.0, 10.0, 48).unwrap();
    let packet = GaussianPacket::new(0.0, 1.0, 0.5).unwrap();
    let rho = propagate_to_grid(&[packet.separable_term()], &axis, t, p, &QuadConfig::default()).unwrap();
    (axis, rho)
}

#[test]
fn kernel_evolution_stays_hermitian() {
    let p = params(1.0);
    let (_, rho) = packet_on_grid(2.0, &p);
    let rel = rho.hermiticity_residual() / rho.max_abs();
    assert!(rel < 1e-8, "relative Hermiticity residual {rel:e}");
}

#[test]
fn kernel_trace_decays_exponentially() {
    let p = params(1.0);
    let t = 2.0;
    let (_, rho) = packet_on_grid(t, &p);
    let tr = rho.trace();
    let expected = (-p.gamma() * t).exp();
    assert!(
        (tr.re - expected).abs() < 1e-6 * expected,
        "trace {tr} vs {expected}"
    );
    assert!(tr.im.abs() < 1e-9);
}

#[test]
fn damped_kernel_without_friction_is_fresnel() {
    let (g, rho) = slits();
    let p = params(0.0);
    let t = g.flight_time();
    let xs: Vec<f64> = (0..41).map(|i| -4.0 + 0.2 * i as f64).collect();
    let cfg = QuadConfig::default();
    let kernel = pattern_damped_kernel(&rho, t, &xs, &p, &cfg).unwrap().kernel;
    let exact = pattern_exact(&rho, t, &xs, &p, &cfg).unwrap();
    let peak = exact.max();
    for (a, b) in kernel.p.iter().zip(&exact.p) {
        assert!((a - b).abs() < 1e-7 * peak, "{a} vs {b}");
    }
}

#[test]
fn rescaled_pattern_without_friction_is_farfield() {
    let (g, rho) = slits();
    let p = params(0.0);
    let t = g.flight_time();
    let xs: Vec<f64> = (0..101).map(|i| -5.0 + 0.1 * i as f64).collect();
    let damped = pattern_damped_rescaled(&rho, t, &xs, &p).unwrap();
    let far = pattern_farfield(&rho, t, &xs, &p).unwrap();
    assert_eq!(damped.p, far.p);
}

// The simplified cross term drops a factor coth(γt); at γt = 3 the two
// patterns should be hard to tell apart.
#[test]
fn simplified_cross_term_close_at_late_times() {
    let (g, rho) = slits();
    let t = g.flight_time();
    let p = params(2.0 * 3.0 / t);
    let tau = qbm_core::kernel::renormalized_time(t, &p);
    let k_tau = p.mass() * g.half_separation() / (p.hbar() * tau);
    let xs: Vec<f64> = (1..=5).map(|m| m as f64 * PI / k_tau).collect();
    let both = pattern_damped_kernel(&rho, t, &xs, &p, &QuadConfig::default()).unwrap();
    for (a, b) in both.kernel.p.iter().zip(&both.simplified.p) {
        assert!((a - b).abs() < 0.01 * a.abs(), "{a} vs {b}");
    }
}
