//! Unit system: internal quantities are in natural-linewidth units (rates in
//! Gamma, times in 1/Gamma); SI enters and leaves only through this module.

use crate::params::PhysicalParams;
use crate::scalar::Scalar;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Rb-87 D2 natural linewidth, 2 pi x 6.0666 MHz, in rad/s. The paper never
/// states the numeric value; this standard one reproduces its 265/192 ns
/// characteristic times within 2% and is overridable in the config.
pub const DEFAULT_GAMMA_RAD_PER_S: f64 = 2.0 * std::f64::consts::PI * 6.0666e6;

/// Conversion anchor between Gamma-units and SI.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct UnitSystem {
    /// Natural linewidth Gamma in rad/s.
    pub gamma_rad_per_s: f64,
}

impl Default for UnitSystem {
    fn default() -> Self {
        UnitSystem {
            gamma_rad_per_s: DEFAULT_GAMMA_RAD_PER_S,
        }
    }
}

impl UnitSystem {
    pub fn new(gamma_rad_per_s: f64) -> Result<Self> {
        if !(gamma_rad_per_s > 0.0) || !gamma_rad_per_s.is_finite() {
            return Err(Error::config("gamma_rad_per_s", "must be finite and > 0"));
        }
        Ok(UnitSystem { gamma_rad_per_s })
    }

    /// One Gamma-unit of time, in nanoseconds (about 26.24 ns for Rb-87 D2).
    pub fn time_unit_ns(&self) -> f64 {
        1e9 / self.gamma_rad_per_s
    }

    /// Gamma-units of time to seconds.
    pub fn seconds(&self, t_gamma: f64) -> f64 {
        t_gamma / self.gamma_rad_per_s
    }

    /// Seconds to Gamma-units of time.
    pub fn gamma_time(&self, t_s: f64) -> f64 {
        t_s * self.gamma_rad_per_s
    }

    /// Gamma-units of rate to events per second.
    pub fn rate_per_s(&self, r_gamma: f64) -> f64 {
        r_gamma * self.gamma_rad_per_s
    }

    /// Events per second to Gamma-units of rate.
    pub fn gamma_rate(&self, r_per_s: f64) -> f64 {
        r_per_s / self.gamma_rad_per_s
    }
}

/// Characteristic times of the resonant-coupling wavepacket regimes.
///
/// Valid only as a resonant-case diagnostic; the paper's formulas do not apply
/// under coupling detuning.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct DerivedTimes {
    /// Damped Rabi oscillation period 2 pi / sqrt(|Omega_c|^2 - Gamma^2/4),
    /// in seconds; `None` when overdamped (Omega_c <= Gamma/2).
    pub tau_r_s: Option<f64>,
    /// EIT group delay Gamma OD / |Omega_c|^2, in seconds.
    pub tau_eit_s: f64,
}

/// Computes tau_R and tau_EIT for resonant coupling.
pub fn derived_times<T: Scalar>(p: &PhysicalParams<T>, units: &UnitSystem) -> DerivedTimes {
    let omega_c = p.omega_c.to_f64().unwrap();
    let od = p.od.to_f64().unwrap();
    let radicand = omega_c * omega_c - 0.25;
    let tau_r_s = if radicand > 0.0 {
        Some(units.seconds(2.0 * std::f64::consts::PI / radicand.sqrt()))
    } else {
        None
    };
    DerivedTimes {
        tau_r_s,
        tau_eit_s: units.seconds(od / (omega_c * omega_c)),
    }
}
