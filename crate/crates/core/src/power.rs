//! Circuit power of each surface architecture and the energy-efficiency
//! metric B·log₂(1+γ)/P.

use serde::{Deserialize, Serialize};

use crate::channel::Band;
use crate::error::{Result, SimError};

/// Circuit-power constants in watts.
///
/// The defaults are literature-typical values, not measured ground truth:
/// 0.1 mW switching/control power per element, 5 mW DC bias per active
/// element, and one RF chain per connected mode at 25 mW (sub-6 GHz) or
/// 2 W (mmWave, wideband receive chain with ADC).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerConfig {
    pub p_c: f64,
    pub p_dc: f64,
    pub p_rf_sub6: f64,
    pub p_rf_mmwave: f64,
    pub zeta: f64,
    /// Active-RIS radiated power; zero leaves ζ·p_out out of the total.
    pub p_out: f64,
}

impl Default for PowerConfig {
    fn default() -> Self {
        Self {
            p_c: 1e-4,
            p_dc: 5e-3,
            p_rf_sub6: 0.025,
            p_rf_mmwave: 2.0,
            zeta: 1.0,
            p_out: 0.0,
        }
    }
}

impl PowerConfig {
    pub fn p_rf(&self, band: Band) -> f64 {
        match band {
            Band::Sub6 => self.p_rf_sub6,
            Band::MmWave => self.p_rf_mmwave,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("p_c", self.p_c),
            ("p_dc", self.p_dc),
            ("p_rf_sub6", self.p_rf_sub6),
            ("p_rf_mmwave", self.p_rf_mmwave),
            ("zeta", self.zeta),
            ("p_out", self.p_out),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(SimError::InvalidConfig(format!(
                    "power constant {name} must be finite and non-negative, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// (N − a)·P_C + a·P_RF.
pub fn power_rdars(n: usize, a: usize, cfg: &PowerConfig, band: Band) -> Result<f64> {
    if a > n {
        return Err(SimError::ConnectedExceedsTotal {
            connected: a,
            total: n,
        });
    }
    Ok((n - a) as f64 * cfg.p_c + a as f64 * cfg.p_rf(band))
}

/// N·P_C.
pub fn power_ris(n: usize, cfg: &PowerConfig) -> f64 {
    n as f64 * cfg.p_c
}

/// N·(P_C + P_DC) + ζ·p_out.
pub fn power_active(n: usize, cfg: &PowerConfig) -> f64 {
    n as f64 * (cfg.p_c + cfg.p_dc) + cfg.zeta * cfg.p_out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EeSample {
    /// bit/J
    pub ee: f64,
    /// bit/s
    pub capacity: f64,
    /// W
    pub total_power: f64,
}

pub fn capacity(snr_linear: f64, bandwidth_hz: f64) -> f64 {
    bandwidth_hz * snr_linear.ln_1p() / std::f64::consts::LN_2
}

pub fn energy_efficiency(snr_linear: f64, bandwidth_hz: f64, total_power_w: f64) -> Result<EeSample> {
    if total_power_w <= 0.0 {
        return Err(SimError::ZeroPower);
    }
    let capacity = capacity(snr_linear, bandwidth_hz);
    Ok(EeSample {
        ee: capacity / total_power_w,
        capacity,
        total_power: total_power_w,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(p_c: f64, p_dc: f64, p_rf: f64) -> PowerConfig {
        PowerConfig {
            p_c,
            p_dc,
            p_rf_sub6: p_rf,
            p_rf_mmwave: p_rf,
            zeta: 1.0,
            p_out: 0.0,
        }
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * b.abs().max(1.0)
    }

    #[test]
    fn rdars_power_examples() {
        let c = cfg(0.01, 0.03, 0.25);
        assert!(close(power_rdars(1024, 0, &c, Band::Sub6).unwrap(), 10.24));
        assert!(close(power_rdars(1024, 1, &c, Band::Sub6).unwrap(), 10.48));
        assert!(close(power_rdars(16, 16, &c, Band::Sub6).unwrap(), 16.0 * 0.25));
        assert_eq!(
            power_rdars(3, 4, &c, Band::Sub6),
            Err(SimError::ConnectedExceedsTotal { connected: 4, total: 3 })
        );
    }

    #[test]
    fn rf_power_follows_band() {
        let c = PowerConfig::default();
        let sub6 = power_rdars(10, 1, &c, Band::Sub6).unwrap();
        let mmw = power_rdars(10, 1, &c, Band::MmWave).unwrap();
        assert!(close(mmw - sub6, c.p_rf_mmwave - c.p_rf_sub6));
    }

    #[test]
    fn ris_power_examples() {
        let c = cfg(0.01, 0.03, 0.25);
        assert_eq!(power_ris(0, &c), 0.0);
        assert!(close(power_ris(256, &c), 2.56));
        for n in [0, 1, 64, 1024] {
            assert_eq!(power_ris(n, &c), power_rdars(n, 0, &c, Band::MmWave).unwrap());
        }
    }

    #[test]
    fn active_power_examples() {
        let c = cfg(0.01, 0.03, 0.25);
        assert_eq!(power_active(0, &c), 0.0);
        assert!(close(power_active(256, &c), 10.24));
        assert!(power_active(257, &c) > power_active(256, &c));
        let with_out = PowerConfig { zeta: 1.25, p_out: 0.2, ..c };
        assert!(close(power_active(256, &with_out), 10.24 + 0.25));
    }

    #[test]
    fn doubling_elements_costs_n_times_pc() {
        let c = PowerConfig::default();
        for (n, a) in [(256, 1), (1024, 4)] {
            let d = power_rdars(2 * n, a, &c, Band::MmWave).unwrap()
                - power_rdars(n, a, &c, Band::MmWave).unwrap();
            assert!(close(d, n as f64 * c.p_c));
        }
    }

    #[test]
    fn ee_examples() {
        let s = energy_efficiency(1.0, 20e6, 1.0).unwrap();
        assert!(close(s.ee, 2.0e7));
        assert_eq!(energy_efficiency(0.0, 20e6, 1.0).unwrap().ee, 0.0);
        assert!(close(energy_efficiency(3.0, 500e6, 2.0).unwrap().ee, 5.0e8));
        assert_eq!(energy_efficiency(1.0, 20e6, 0.0), Err(SimError::ZeroPower));
    }

    #[test]
    fn ee_monotonicity() {
        let lo = energy_efficiency(5.0, 1e6, 1.0).unwrap().ee;
        let hi_power = energy_efficiency(5.0, 1e6, 2.0).unwrap().ee;
        let hi_snr = energy_efficiency(6.0, 1e6, 1.0).unwrap().ee;
        assert!(hi_power < lo && hi_snr > lo);
    }

    #[test]
    fn negative_constants_rejected() {
        assert!(cfg(-1.0, 0.0, 0.0).validate().is_err());
        assert!(PowerConfig::default().validate().is_ok());
    }
}
