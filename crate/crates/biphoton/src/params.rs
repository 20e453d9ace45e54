//! Validated parameter records and config ingestion.
//!
//! The config document is JSON with explicit fields. Frequency-like entries
//! accept either a bare number (Gamma-units) or `{ "value": v, "unit": u }`
//! with `u` in `"gamma"`, `"mhz"`, or `"rad_per_s"`; SI forms are converted
//! through the unit system on load.

use crate::scalar::Scalar;
use crate::units::UnitSystem;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Atomic and optical inputs, all in Gamma-normalized units.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysicalParams<T: Scalar> {
    /// Optical depth (dimensionless).
    pub od: T,
    /// Coupling Rabi frequency, units of Gamma (full Rabi convention: the
    /// interaction terms carry Omega/2).
    pub omega_c: T,
    /// Driving Rabi frequency, units of Gamma.
    pub omega_d: T,
    /// Coupling one-photon detuning, units of Gamma (signed).
    pub delta_c: T,
    /// Driving one-photon detuning, units of Gamma (signed).
    pub delta_d: T,
    /// Ground-state decoherence rate, units of Gamma.
    pub gamma21: T,
    /// Phase-mismatch phase Delta_k * L in radians; geometric only, no medium
    /// dispersion.
    pub delta_k_l: T,
    /// Medium length in meters, kept only to report Delta_k = delta_k_l / L.
    pub medium_length_m: Option<f64>,
}

impl<T: Scalar> PhysicalParams<T> {
    pub fn validate(&self) -> Result<()> {
        let check = |name: &str, ok: bool, msg: &str| -> Result<()> {
            if ok {
                Ok(())
            } else {
                Err(Error::config(name, msg))
            }
        };
        check("od", self.od > T::zero(), "must be > 0")?;
        check("omega_c", self.omega_c >= T::zero(), "must be >= 0")?;
        check("omega_d", self.omega_d >= T::zero(), "must be >= 0")?;
        check("gamma21", self.gamma21 >= T::zero(), "must be >= 0")?;
        for (name, v) in [
            ("od", self.od),
            ("omega_c", self.omega_c),
            ("omega_d", self.omega_d),
            ("delta_c", self.delta_c),
            ("delta_d", self.delta_d),
            ("gamma21", self.gamma21),
            ("delta_k_l", self.delta_k_l),
        ] {
            check(name, v.is_finite(), "must be finite")?;
        }
        Ok(())
    }
}

/// Detector-channel parameters (SI domain).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetectionParams {
    /// Stokes collection efficiency, 0..=1.
    pub eta_s: f64,
    /// Anti-Stokes collection efficiency, 0..=1.
    pub eta_as: f64,
    /// Stokes-channel noise rate R^s_noise, counts/s.
    pub noise_rate_s: f64,
    /// Anti-Stokes-channel noise rate R^as_noise, counts/s.
    pub noise_rate_as: f64,
    /// Number of trigger receptions accumulated.
    pub receptions: u64,
    /// Histogram bin width Delta_tau in seconds.
    pub time_bin_s: f64,
}

impl Default for DetectionParams {
    fn default() -> Self {
        // Paper-quoted channel values: 2% / 1% efficiencies, 2^18 receptions,
        // 6.4 ns bins; noise rates have no quoted default and stay zero.
        DetectionParams {
            eta_s: 0.02,
            eta_as: 0.01,
            noise_rate_s: 0.0,
            noise_rate_as: 0.0,
            receptions: 1 << 18,
            time_bin_s: 6.4e-9,
        }
    }
}

impl DetectionParams {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.eta_s) {
            return Err(Error::config("eta_s", "must be in [0, 1]"));
        }
        if !(0.0..=1.0).contains(&self.eta_as) {
            return Err(Error::config("eta_as", "must be in [0, 1]"));
        }
        if self.noise_rate_s < 0.0 || self.noise_rate_as < 0.0 {
            return Err(Error::config("noise_rate", "must be >= 0"));
        }
        if self.receptions < 1 {
            return Err(Error::config("receptions", "must be >= 1"));
        }
        if !(self.time_bin_s > 0.0) {
            return Err(Error::config("time_bin_s", "must be > 0"));
        }
        Ok(())
    }
}

/// Uniform symmetric frequency grid for the spectral integrals, in Gamma-units.
///
/// Midpoint samples avoid placing a node exactly on poles at omega = 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrequencyGrid<T: Scalar> {
    pub half_width: T,
    pub count: usize,
}

impl<T: Scalar> Default for FrequencyGrid<T> {
    fn default() -> Self {
        // Half-width 32 Gamma keeps the spectral edge density below 1e-6 of
        // the peak for the paper presets (16 Gamma leaves ~5e-5 on the red
        // wing); 65536 points keep the same ~1e-3 Gamma spacing.
        FrequencyGrid {
            half_width: T::of(32.0),
            count: 65536,
        }
    }
}

impl<T: Scalar> FrequencyGrid<T> {
    pub fn new(half_width: T, count: usize) -> Result<Self> {
        if !(half_width > T::zero()) {
            return Err(Error::config("grid.half_width", "must be > 0"));
        }
        if count < 2 || count % 2 != 0 {
            return Err(Error::config("grid.count", "must be even and >= 2"));
        }
        Ok(FrequencyGrid { half_width, count })
    }

    pub fn spacing(&self) -> T {
        T::of(2.0) * self.half_width / T::of(self.count as f64)
    }

    /// Sample frequencies, symmetric about zero.
    pub fn values(&self) -> Vec<T> {
        let d = self.spacing();
        let n = self.count;
        (0..n)
            .map(|i| (T::of(i as f64) + T::of(0.5) - T::of(n as f64 / 2.0)) * d)
            .collect()
    }
}

// ---------------------------------------------------------------------------
// Config document
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(rename_all = "snake_case")]
enum FreqUnit {
    /// Units of Gamma (default).
    Gamma,
    /// Ordinary frequency in MHz, converted as 2 pi x 1e6 / Gamma.
    Mhz,
    /// Angular frequency in rad/s.
    RadPerS,
}

/// A number with an optional unit tag.
#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(untagged)]
enum Quantity {
    Bare(f64),
    Tagged { value: f64, unit: FreqUnit },
}

impl Quantity {
    fn in_gamma(self, units: &UnitSystem) -> f64 {
        match self {
            Quantity::Bare(v) => v,
            Quantity::Tagged { value, unit } => match unit {
                FreqUnit::Gamma => value,
                FreqUnit::Mhz => value * 2.0 * std::f64::consts::PI * 1e6 / units.gamma_rad_per_s,
                FreqUnit::RadPerS => value / units.gamma_rad_per_s,
            },
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PhysicalDoc {
    od: f64,
    omega_c: Quantity,
    omega_d: Quantity,
    delta_c: Quantity,
    delta_d: Quantity,
    gamma21: Quantity,
    /// Phase mismatch as a phase in radians...
    #[serde(default)]
    delta_k_l: Option<f64>,
    /// ...or as Delta_k in rad/m together with `medium_length_m`.
    #[serde(default)]
    delta_k_per_m: Option<f64>,
    #[serde(default)]
    medium_length_m: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridDoc {
    half_width: f64,
    count: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct UnitsDoc {
    gamma_rad_per_s: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigDoc {
    physical: PhysicalDoc,
    #[serde(default)]
    detection: Option<DetectionParams>,
    #[serde(default)]
    grid: Option<GridDoc>,
    #[serde(default)]
    units: Option<UnitsDoc>,
}

/// Fully validated configuration.
#[derive(Clone, Copy, Debug)]
pub struct Config<T: Scalar> {
    pub physical: PhysicalParams<T>,
    pub detection: DetectionParams,
    pub grid: FrequencyGrid<T>,
    pub units: UnitSystem,
}

/// Parses and validates a JSON config document.
pub fn from_config<T: Scalar>(document: &str) -> Result<Config<T>> {
    let doc: ConfigDoc = serde_json::from_str(document)
        .map_err(|e| Error::config("<document>", e.to_string()))?;

    let units = match doc.units {
        Some(u) => UnitSystem::new(u.gamma_rad_per_s)?,
        None => UnitSystem::default(),
    };

    let delta_k_l = match (doc.physical.delta_k_l, doc.physical.delta_k_per_m, doc.physical.medium_length_m) {
        (Some(v), None, _) => v,
        (None, Some(dk), Some(l)) => dk * l,
        (None, Some(_), None) => {
            return Err(Error::config(
                "delta_k_per_m",
                "requires medium_length_m to form delta_k_l",
            ))
        }
        (None, None, _) => {
            return Err(Error::config("delta_k_l", "missing (or give delta_k_per_m with medium_length_m)"))
        }
        (Some(_), Some(_), _) => {
            return Err(Error::config(
                "delta_k_l",
                "give either delta_k_l or delta_k_per_m, not both",
            ))
        }
    };

    let physical = PhysicalParams {
        od: T::of(doc.physical.od),
        omega_c: T::of(doc.physical.omega_c.in_gamma(&units)),
        omega_d: T::of(doc.physical.omega_d.in_gamma(&units)),
        delta_c: T::of(doc.physical.delta_c.in_gamma(&units)),
        delta_d: T::of(doc.physical.delta_d.in_gamma(&units)),
        gamma21: T::of(doc.physical.gamma21.in_gamma(&units)),
        delta_k_l: T::of(delta_k_l),
        medium_length_m: doc.physical.medium_length_m,
    };
    physical.validate()?;

    let detection = doc.detection.unwrap_or_default();
    detection.validate()?;

    let grid = match doc.grid {
        Some(g) => FrequencyGrid::new(T::of(g.half_width), g.count)?,
        None => FrequencyGrid::default(),
    };

    Ok(Config {
        physical,
        detection,
        grid,
        units,
    })
}
