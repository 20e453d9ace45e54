//! CSV and JSON output. All files hold SI quantities; conversion from the
//! internal Gamma-units happens here.

use crate::detection::CoincidenceHistogram;
use crate::observables::{
    delay_time, signal_to_background, Spectra, Wavepacket,
};
use crate::scalar::Scalar;
use crate::units::UnitSystem;
use crate::Result;
use serde::Serialize;
use std::io::Write;
use std::path::Path;

/// Scalar figures of merit, SI units, for `summary.json`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Summary {
    /// Stokes generation rate, counts/s.
    pub r_s: f64,
    /// Anti-Stokes generation rate, counts/s.
    pub r_as: f64,
    /// Biphoton generation rate R_B = R_as, counts/s.
    pub r_b: f64,
    /// Pairing ratio (dimensionless).
    pub r_p: f64,
    /// Wavepacket delay time, seconds; `None` when r_p vanishes.
    pub tau_delay_s: Option<f64>,
    /// Signal-to-background ratio at the detection time bin.
    pub sbr: f64,
}

/// Builds the summary from a wavepacket, binning SBR at `bin_s`.
pub fn summarize<T: Scalar>(w: &Wavepacket<T>, units: &UnitSystem, bin_s: f64) -> Summary {
    let bin_gamma = T::of(units.gamma_time(bin_s));
    let tau_delay_s = delay_time(w)
        .ok()
        .map(|t| units.seconds(t.to_f64().unwrap()));
    Summary {
        r_s: units.rate_per_s(w.r_s.to_f64().unwrap()),
        r_as: units.rate_per_s(w.background.to_f64().unwrap()),
        r_b: units.rate_per_s(w.r_b.to_f64().unwrap()),
        r_p: w.r_p.to_f64().unwrap(),
        tau_delay_s,
        sbr: signal_to_background(w, bin_gamma).to_f64().unwrap(),
    }
}

pub fn write_summary(path: &Path, summary: &Summary) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    serde_json::to_writer_pretty(&mut f, summary)?;
    writeln!(f)?;
    Ok(())
}

/// `(tau_s, g2, R_C)` rows; R_C in counts/s.
pub fn write_wavepacket<T: Scalar>(
    path: &Path,
    w: &Wavepacket<T>,
    units: &UnitSystem,
) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(f, "tau_s,g2,R_C")?;
    for (i, (&g2, &rc)) in w.g2.iter().zip(&w.rc).enumerate() {
        let t = units.seconds((T::of(i as f64) * w.tau.step).to_f64().unwrap());
        writeln!(
            f,
            "{:e},{:e},{:e}",
            t,
            g2.to_f64().unwrap(),
            units.rate_per_s(rc.to_f64().unwrap())
        )?;
    }
    Ok(())
}

/// `(omega_over_Gamma, Rs_spec, Ras_spec, fwm_part, noise_part)` rows; the
/// fwm/noise split columns decompose the Stokes spectrum.
pub fn write_spectra<T: Scalar>(path: &Path, s: &Spectra<T>) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(f, "omega_over_Gamma,Rs_spec,Ras_spec,fwm_part,noise_part")?;
    for p in &s.points {
        writeln!(
            f,
            "{:e},{:e},{:e},{:e},{:e}",
            p.omega.to_f64().unwrap(),
            p.total_s().to_f64().unwrap(),
            p.total_as().to_f64().unwrap(),
            p.fwm_s.to_f64().unwrap(),
            p.noise_s.to_f64().unwrap()
        )?;
    }
    Ok(())
}

/// One sweep summary row.
#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub delta_c: f64,
    pub tau_delay_s: Option<f64>,
    pub r_p: f64,
    pub r_b: f64,
    pub r_b_times_r_p: f64,
    pub sbr: f64,
    /// Present when the point failed; other fields are then NaN.
    pub error: Option<String>,
}

pub fn write_sweep(path: &Path, rows: &[SweepRow]) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(f, "delta_c,tau_delay_s,r_p,r_b,r_b_times_r_p,sbr,error")?;
    for r in rows {
        let tau = r
            .tau_delay_s
            .map_or(String::new(), |t| format!("{:e}", t));
        let err = r.error.as_deref().unwrap_or("");
        // Error text is free-form; quote it per RFC 4180.
        let err = if err.is_empty() {
            String::new()
        } else {
            format!("\"{}\"", err.replace('"', "\"\""))
        };
        writeln!(
            f,
            "{:e},{},{:e},{:e},{:e},{:e},{}",
            r.delta_c, tau, r.r_p, r.r_b, r.r_b_times_r_p, r.sbr, err
        )?;
    }
    Ok(())
}

/// Histogram CSV: `#`-prefixed metadata lines, then `(bin_start_s, counts)`.
pub fn write_histogram(path: &Path, h: &CoincidenceHistogram) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(f, "# receptions: {}", h.receptions)?;
    writeln!(f, "# delta_tau_s: {:e}", h.time_bin_s)?;
    if let Some(seed) = h.seed {
        writeln!(f, "# seed: {}", seed)?;
    }
    writeln!(f, "bin_start_s,counts")?;
    for (&t, &c) in h.bin_start_s.iter().zip(&h.counts) {
        writeln!(f, "{:e},{}", t, c)?;
    }
    Ok(())
}

/// Reads a histogram written by [`write_histogram`].
pub fn read_histogram(path: &Path) -> Result<CoincidenceHistogram> {
    let text = std::fs::read_to_string(path)?;
    let mut receptions = None;
    let mut time_bin_s = None;
    let mut seed = None;
    let mut bin_start_s = Vec::new();
    let mut counts = Vec::new();
    let bad = |line: &str| crate::Error::config("histogram", format!("unparseable line: {line}"));
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let mut kv = rest.splitn(2, ':');
            let key = kv.next().unwrap_or("").trim();
            let value = kv.next().unwrap_or("").trim();
            match key {
                "receptions" => receptions = value.parse::<u64>().ok(),
                "delta_tau_s" => time_bin_s = value.parse::<f64>().ok(),
                "seed" => seed = value.parse::<u64>().ok(),
                _ => {}
            }
            continue;
        }
        if line.starts_with("bin_start_s") {
            continue;
        }
        let mut cols = line.split(',');
        let t = cols
            .next()
            .and_then(|v| v.trim().parse::<f64>().ok())
            .ok_or_else(|| bad(line))?;
        let c = cols
            .next()
            .and_then(|v| v.trim().parse::<u64>().ok())
            .ok_or_else(|| bad(line))?;
        bin_start_s.push(t);
        counts.push(c);
    }
    Ok(CoincidenceHistogram {
        bin_start_s,
        counts,
        receptions: receptions
            .ok_or_else(|| crate::Error::config("histogram", "missing # receptions header"))?,
        time_bin_s: time_bin_s
            .ok_or_else(|| crate::Error::config("histogram", "missing # delta_tau_s header"))?,
        seed,
    })
}
