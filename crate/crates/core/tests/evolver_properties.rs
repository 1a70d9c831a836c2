// SPDX-License-Identifier: Apache-2.0

use qbm_core::evolver::{evolve, production_dt, EvolverConfig, GaussianPacket, GridSpec, Potential};
use qbm_core::slit::DensityMatrixGrid;
use qbm_core::PhysParams;

const GRID: GridSpec = GridSpec {
    x_min: -16.0,
    x_max: 16.0,
    n: 128,
};

fn run(kt: f64, stride: usize) -> qbm_core::evolver::Evolution {
    let p = PhysParams::new(1.0, 1.0, 1.0, kt).unwrap();
    let axis = GRID.axis().unwrap();
    let rho0 = GaussianPacket::new(0.0, 1.0, 0.0).unwrap().to_grid(&axis);
    let free = Potential::free(&axis);
    let mut cfg = EvolverConfig::new(GRID, 1.0, 1.0 / p.gamma());
    cfg.snapshot_stride = stride;
    cfg.dt = production_dt(&free, &p, &cfg).unwrap();
    evolve(&rho0, &free, &p, &cfg).unwrap()
}

/// Σ|ρ|² over nodes with |x₊ − x₋| > w.
fn off_diagonal_mass(rho: &DensityMatrixGrid, w: f64) -> f64 {
    let axis = rho.axis();
    let mut total = 0.0;
    for i in 0..rho.n() {
        for j in 0..rho.n() {
            if (axis.point(i) - axis.point(j)).abs() > w {
                total += rho.get(i, j).norm_sqr();
            }
        }
    }
    total
}

#[test]
fn temperature_speeds_up_decoherence() {
    let cold = run(0.0, 0);
    let warm = run(0.5, 0);
    let w = 1.0;
    let m0 = off_diagonal_mass(&cold.snapshots[0].rho, w);
    let cold_end = off_diagonal_mass(cold.final_state(), w);
    let warm_end = off_diagonal_mass(warm.final_state(), w);
    assert!(warm_end < cold_end, "warm {warm_end:e} vs cold {cold_end:e}");
    assert!(warm_end < m0);
}

#[test]
fn hermiticity_drift_is_at_most_linear() {
    let evo = run(0.5, 1);
    let scale = evo.snapshots[0].rho.max_abs();
    for s in &evo.traces {
        let bound = 1e-14 * scale * (s.step.max(1) as f64);
        assert!(
            s.hermiticity <= bound,
            "step {}: {:e} > {bound:e}",
            s.step,
            s.hermiticity
        );
    }
}
