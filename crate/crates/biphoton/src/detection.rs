//! Detection-level channel model (Eq. 7): expected coincidence counts from
//! R_C(tau), Poisson synthesis of noisy histograms, and recovery of the
//! experimental R_C + R_env from counts.
//!
//! This layer works in SI (counts and seconds); the wavepacket enters as a
//! per-bin coincidence rate in counts/s.

use crate::params::DetectionParams;
use crate::scalar::Scalar;
use crate::{Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

/// Detection parameters plus the derived Stokes purity and environmental
/// background.
#[derive(Clone, Copy, Debug)]
pub struct ChannelModel {
    pub params: DetectionParams,
    /// Stokes trigger purity P_s = eta_s R_s / (eta_s R_s + R^s_noise).
    pub purity: f64,
    /// Biphoton generation rate R_B = R_as in counts/s.
    pub r_b_per_s: f64,
}

impl ChannelModel {
    /// Builds the channel model from detection parameters and the generation
    /// rates (counts/s).
    pub fn new(params: DetectionParams, r_s_per_s: f64, r_as_per_s: f64) -> Result<Self> {
        params.validate()?;
        let signal = params.eta_s * r_s_per_s;
        let denom = signal + params.noise_rate_s;
        let purity = if denom > 0.0 { signal / denom } else { 0.0 };
        Ok(ChannelModel {
            params,
            purity,
            r_b_per_s: r_as_per_s,
        })
    }

    /// Environmental background rate folded into the recovered R_C: the second
    /// and third Eq. (7) terms divided by the signal normalization.
    pub fn r_env_per_s(&self) -> f64 {
        let p = &self.params;
        let uncorrelated = self.purity * p.noise_rate_as
            + (1.0 - self.purity) * (p.noise_rate_as + self.r_b_per_s * p.eta_as);
        uncorrelated / (self.purity * p.eta_as)
    }
}

/// Binned coincidence counts with the synthesis metadata.
#[derive(Clone, Debug, PartialEq)]
pub struct CoincidenceHistogram {
    /// Left edge of each bin, seconds.
    pub bin_start_s: Vec<f64>,
    pub counts: Vec<u64>,
    pub receptions: u64,
    pub time_bin_s: f64,
    pub seed: Option<u64>,
}

/// Expected coincidence counts per bin from Eq. (7):
/// N_C = receptions [ P_s R_C eta_as + P_s R^as_noise + (1-P_s)(R^as_noise + R_B eta_as) ] Delta_tau.
pub fn expected_counts<T: Scalar>(rc_per_s: &[T], ch: &ChannelModel) -> Vec<f64> {
    let p = &ch.params;
    let n = p.receptions as f64;
    let dt = p.time_bin_s;
    let flat = n * ch.purity * p.noise_rate_as * dt
        + n * (1.0 - ch.purity) * (p.noise_rate_as + ch.r_b_per_s * p.eta_as) * dt;
    rc_per_s
        .iter()
        .map(|&rc| n * ch.purity * rc.to_f64().unwrap_or(0.0) * p.eta_as * dt + flat)
        .collect()
}

/// Independent Poisson draw per bin; deterministic for a fixed seed.
pub fn synthesize_histogram(expected: &[f64], ch: &ChannelModel, seed: u64) -> CoincidenceHistogram {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let counts = expected
        .iter()
        .map(|&mean| {
            assert!(mean >= 0.0, "expected counts must be nonnegative");
            if mean == 0.0 {
                0
            } else {
                Poisson::new(mean).expect("finite nonnegative mean").sample(&mut rng) as u64
            }
        })
        .collect();
    CoincidenceHistogram {
        bin_start_s: (0..expected.len())
            .map(|i| i as f64 * ch.params.time_bin_s)
            .collect(),
        counts,
        receptions: ch.params.receptions,
        time_bin_s: ch.params.time_bin_s,
        seed: Some(seed),
    }
}

/// Recovered experimental wavepacket: R_C + R_env per bin and the background
/// estimate, counts/s.
#[derive(Clone, Debug)]
pub struct RecoveredWavepacket {
    pub rc_plus_env_per_s: Vec<f64>,
    pub r_env_per_s: f64,
}

impl RecoveredWavepacket {
    /// Background-corrected R_C per bin.
    pub fn rc_per_s(&self) -> Vec<f64> {
        self.rc_plus_env_per_s
            .iter()
            .map(|&v| v - self.r_env_per_s)
            .collect()
    }
}

/// Inverts the Eq. (7) normalization on real-valued counts:
/// R_C + R_env = N_C / (receptions P_s eta_as Delta_tau).
///
/// The real-valued entry point makes `analyze . expected_counts` an exact
/// algebraic identity; [`analyze_histogram`] is the integer-count wrapper.
pub fn analyze_counts(
    counts: &[f64],
    receptions: u64,
    time_bin_s: f64,
    ch: &ChannelModel,
) -> Result<RecoveredWavepacket> {
    let p = &ch.params;
    if ch.purity == 0.0 || p.eta_as == 0.0 {
        return Err(Error::NonInvertibleDetection {
            reason: format!("purity = {}, eta_as = {}", ch.purity, p.eta_as),
        });
    }
    let norm = receptions as f64 * ch.purity * p.eta_as * time_bin_s;
    Ok(RecoveredWavepacket {
        rc_plus_env_per_s: counts.iter().map(|&c| c / norm).collect(),
        r_env_per_s: ch.r_env_per_s(),
    })
}

/// [`analyze_counts`] applied to a recorded histogram.
pub fn analyze_histogram(
    h: &CoincidenceHistogram,
    ch: &ChannelModel,
) -> Result<RecoveredWavepacket> {
    let counts: Vec<f64> = h.counts.iter().map(|&c| c as f64).collect();
    analyze_counts(&counts, h.receptions, h.time_bin_s, ch)
}
