// SPDX-License-Identifier: Apache-2.0

//! Physical parameters and the derived scales every other module uses.
//!
//! Units are whatever coherent system the caller picks; `hbar` is carried
//! explicitly and defaults to 1.

use serde::{Deserialize, Serialize};

use crate::error::{check_nonnegative, check_positive, Error, Result};

/// Default ratio separating the quantum, crossover and classical regimes.
pub const DEFAULT_REGIME_THRESHOLD: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PhysParamsRaw", into = "PhysParamsRaw")]
pub struct PhysParams {
    mass: f64,
    friction: f64,
    hbar: f64,
    thermal_energy: f64,
}

/// Wire form of [`PhysParams`]: `{"mass", "friction", "hbar", "kBT"}`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PhysParamsRaw {
    mass: f64,
    friction: f64,
    #[serde(default = "default_hbar")]
    hbar: f64,
    #[serde(rename = "kBT")]
    kbt: f64,
}

fn default_hbar() -> f64 {
    1.0
}

impl TryFrom<PhysParamsRaw> for PhysParams {
    type Error = Error;

    fn try_from(raw: PhysParamsRaw) -> Result<Self> {
        PhysParams::new(raw.mass, raw.friction, raw.hbar, raw.kbt)
    }
}

impl From<PhysParams> for PhysParamsRaw {
    fn from(p: PhysParams) -> Self {
        PhysParamsRaw {
            mass: p.mass,
            friction: p.friction,
            hbar: p.hbar,
            kbt: p.thermal_energy,
        }
    }
}

impl PhysParams {
    pub fn new(mass: f64, friction: f64, hbar: f64, thermal_energy: f64) -> Result<Self> {
        check_positive("mass", mass)?;
        check_nonnegative("friction", friction)?;
        check_positive("hbar", hbar)?;
        check_nonnegative("kBT", thermal_energy)?;
        Ok(PhysParams {
            mass,
            friction,
            hbar,
            thermal_energy,
        })
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn friction(&self) -> f64 {
        self.friction
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// k_B T.
    pub fn thermal_energy(&self) -> f64 {
        self.thermal_energy
    }

    pub fn with_friction(&self, friction: f64) -> Result<Self> {
        Self::new(self.mass, friction, self.hbar, self.thermal_energy)
    }

    pub fn with_thermal_energy(&self, thermal_energy: f64) -> Result<Self> {
        Self::new(self.mass, self.friction, self.hbar, thermal_energy)
    }

    /// Damping rate γ = R/(2M).
    pub fn gamma(&self) -> f64 {
        self.friction / (2.0 * self.mass)
    }

    /// k_B T_γ = ħγ, the temperature scale separating quantum from classical
    /// Brownian motion.
    pub fn crossover_temperature(&self) -> f64 {
        self.hbar * self.gamma()
    }

    /// Einstein diffusion coefficient D = k_B T / R.
    pub fn einstein_diffusion(&self) -> Result<f64> {
        if self.friction == 0.0 {
            return Err(Error::ZeroFriction);
        }
        Ok(self.thermal_energy / self.friction)
    }

    /// ħ/(2M), the diffusion scale the Einstein coefficient is compared to.
    pub fn quantum_diffusion(&self) -> f64 {
        self.hbar / (2.0 * self.mass)
    }

    pub fn classify_regime(&self, threshold: f64) -> Result<Regime> {
        if !(threshold.is_finite() && threshold > 1.0) {
            return Err(Error::InvalidParameter {
                name: "threshold",
                reason: format!("must be > 1, got {threshold}"),
            });
        }
        if self.friction == 0.0 {
            return Err(Error::ZeroFriction);
        }
        let ratio = self.thermal_energy / self.crossover_temperature();
        Ok(Regime::from_ratio(ratio, threshold))
    }
}

impl Default for PhysParams {
    fn default() -> Self {
        PhysParams {
            mass: 1.0,
            friction: 1.0,
            hbar: 1.0,
            thermal_energy: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegimeTag {
    Quantum,
    Crossover,
    Classical,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Regime {
    pub tag: RegimeTag,
    /// T / T_γ, equivalently D / (ħ/2M).
    pub ratio: f64,
}

impl Regime {
    pub fn from_ratio(ratio: f64, threshold: f64) -> Self {
        let tag = if ratio < 1.0 / threshold {
            RegimeTag::Quantum
        } else if ratio > threshold {
            RegimeTag::Classical
        } else {
            RegimeTag::Crossover
        };
        Regime { tag, ratio }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params(mass: f64, friction: f64, hbar: f64, kbt: f64) -> PhysParams {
        PhysParams::new(mass, friction, hbar, kbt).unwrap()
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(params(1.0, 2.0, 0.3, 7.0).gamma(), 1.0);
        assert_eq!(params(1.0, 0.0, 1.0, 1.0).gamma(), 0.0);
        assert_eq!(params(0.5, 3.0, 1.0, 1.0).gamma(), 3.0);
    }

    #[test]
    fn crossover_examples() {
        assert_eq!(params(1.0, 2.0, 1.0, 0.0).crossover_temperature(), 1.0);
        assert_eq!(params(1.0, 0.0, 1.0, 0.0).crossover_temperature(), 0.0);
        assert_eq!(params(1.0, 1.0, 2.0, 0.0).crossover_temperature(), 1.0);
    }

    #[test]
    fn einstein_examples() {
        assert_eq!(params(1.0, 1.0, 1.0, 1.0).einstein_diffusion().unwrap(), 1.0);
        assert_eq!(params(1.0, 1.0, 1.0, 0.0).einstein_diffusion().unwrap(), 0.0);
        assert_eq!(params(1.0, 2.0, 1.0, 3.0).einstein_diffusion().unwrap(), 1.5);
        assert_eq!(
            params(1.0, 0.0, 1.0, 3.0).einstein_diffusion(),
            Err(Error::ZeroFriction)
        );
    }

    #[test]
    fn regime_examples() {
        // kBT = ħγ exactly
        let p = params(1.0, 2.0, 1.0, 1.0);
        let r = p.classify_regime(10.0).unwrap();
        assert_eq!(r.tag, RegimeTag::Crossover);
        assert_eq!(r.ratio, 1.0);

        let cold = params(1.0, 2.0, 1.0, 0.0).classify_regime(10.0).unwrap();
        assert_eq!(cold.tag, RegimeTag::Quantum);

        let hot = params(1.0, 2.0, 1.0, 100.0).classify_regime(10.0).unwrap();
        assert_eq!(hot.tag, RegimeTag::Classical);
        assert_eq!(hot.ratio, 100.0);

        assert_eq!(
            params(1.0, 0.0, 1.0, 1.0).classify_regime(10.0),
            Err(Error::ZeroFriction)
        );
        assert!(p.classify_regime(1.0).is_err());
    }

    #[test]
    fn ratio_is_diffusion_over_quantum_scale() {
        let p = params(2.0, 3.0, 0.7, 1.3);
        let r = p.classify_regime(10.0).unwrap();
        let via_d = p.einstein_diffusion().unwrap() / p.quantum_diffusion();
        assert!((r.ratio - via_d).abs() <= 1e-14 * via_d);
    }

    #[test]
    fn constructor_rejects_invalid() {
        assert!(PhysParams::new(0.0, 1.0, 1.0, 1.0).is_err());
        assert!(PhysParams::new(1.0, -1.0, 1.0, 1.0).is_err());
        assert!(PhysParams::new(1.0, 1.0, 0.0, 1.0).is_err());
        assert!(PhysParams::new(1.0, 1.0, 1.0, -0.1).is_err());
        assert!(PhysParams::new(f64::NAN, 1.0, 1.0, 1.0).is_err());
    }

    proptest! {
        #[test]
        fn einstein_round_trip(m in 0.01f64..100.0, r in 0.01f64..100.0, kbt in 0.0f64..100.0) {
            let p = params(m, r, 1.0, kbt);
            let d = p.einstein_diffusion().unwrap();
            prop_assert!((d * r - kbt).abs() <= 4.0 * f64::EPSILON * kbt.max(f64::MIN_POSITIVE));
        }

        #[test]
        fn crossover_is_hbar_gamma(m in 0.01f64..100.0, r in 0.0f64..100.0, h in 0.01f64..10.0) {
            let p = params(m, r, h, 1.0);
            prop_assert_eq!(p.crossover_temperature(), h * p.gamma());
        }

        #[test]
        fn regime_monotone_in_temperature(t1 in 0.0f64..1e3, t2 in 0.0f64..1e3, thr in 1.5f64..100.0) {
            let (lo, hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
            let rank = |t: RegimeTag| match t {
                RegimeTag::Quantum => 0,
                RegimeTag::Crossover => 1,
                RegimeTag::Classical => 2,
            };
            let a = params(1.0, 2.0, 1.0, lo).classify_regime(thr).unwrap();
            let b = params(1.0, 2.0, 1.0, hi).classify_regime(thr).unwrap();
            prop_assert!(rank(a.tag) <= rank(b.tag));
        }
    }
}
