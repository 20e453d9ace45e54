//! Command-line driver: single wavepacket runs, detuning sweeps, histogram
//! synthesis/analysis, and the validation suite.
//!
//! Exit codes: 0 success, 1 usage/config error, 2 numerical failure.

use biphoton::detection::{analyze_histogram, expected_counts, synthesize_histogram, ChannelModel};
use biphoton::observables::{
    delay_time, rebin, signal_to_background, wavepacket, TauGrid, Wavepacket,
};
use biphoton::output::{
    read_histogram, summarize, write_histogram, write_spectra, write_summary, write_sweep,
    write_wavepacket, SweepRow,
};
use biphoton::params::{from_config, Config};
use biphoton::presets::{preset, preset_names};
use biphoton::validate::{self, Level};
use biphoton::{Error, Real};
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "biphoton",
    about = "Frequency-tunable biphoton generation via backward SFWM: wavepackets, sweeps, and coincidence histograms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Source {
    /// JSON config file; see the README for the schema.
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Named preset (fig2a..fig2f, fig3, fig4a..fig4f, fig5).
    #[arg(long)]
    preset: Option<String>,
}

#[derive(Args)]
struct OutDir {
    /// Output directory (created if missing).
    #[arg(long)]
    out: PathBuf,
    /// Overwrite existing output files.
    #[arg(long)]
    force: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Computes spectra and the biphoton wavepacket for one parameter set.
    Wavepacket {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        out: OutDir,
    },
    /// Sweeps a parameter (delta_c) and writes one summary row per value.
    Sweep {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        out: OutDir,
        /// Sweep spec, e.g. "delta_c=-3:3:0.5" (Gamma-units, inclusive).
        #[arg(long)]
        sweep: String,
        /// Also run the phase-mismatch comparison (delta_k_l in {0, 0.37 pi,
        /// 0.74 pi}), writing sweep_dkl0.csv etc.
        #[arg(long)]
        scenarios: bool,
    },
    /// Synthesizes a Poisson coincidence histogram from the channel model.
    Histogram {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        out: OutDir,
        /// RNG seed for the Poisson draws.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Analyze this recorded histogram instead of synthesizing one.
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Runs the cross-module invariant suite.
    Validate {
        /// quick or full.
        #[arg(long, default_value = "quick")]
        level: String,
        /// Optional JSON report path.
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // Help/version are success; everything else is a usage error.
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Config { .. } => 1,
                _ => 2,
            };
            ExitCode::from(code)
        }
    }
}

fn load(source: &Source) -> Result<Config<Real>, Error> {
    match (&source.config, &source.preset) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)?;
            from_config(&text)
        }
        (None, Some(name)) => preset(name).ok_or_else(|| {
            Error::config(
                "preset",
                format!("unknown preset `{name}`; known: {}", preset_names().join(", ")),
            )
        }),
        _ => Err(Error::config(
            "config",
            "give exactly one of --config or --preset",
        )),
    }
}

fn default_tau(cfg: &Config<Real>) -> TauGrid<Real> {
    // 2 us at 1 ns resolution, expressed in Gamma-units.
    TauGrid::up_to(cfg.units.gamma_time(2e-6), cfg.units.gamma_time(1e-9))
}

fn prepare_out(out: &OutDir, files: &[&str]) -> Result<(), Error> {
    std::fs::create_dir_all(&out.out)?;
    if !out.force {
        for f in files {
            let p = out.out.join(f);
            if p.exists() {
                return Err(Error::config(
                    "out",
                    format!("{} exists; pass --force to overwrite", p.display()),
                ));
            }
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Wavepacket { source, out } => {
            let cfg = load(&source)?;
            prepare_out(&out, &["summary.json", "wavepacket.csv", "spectra.csv"])?;
            let tau = default_tau(&cfg);
            let (s, w) = wavepacket(&cfg.physical, &cfg.grid, &tau)?;
            write_spectra(&out.out.join("spectra.csv"), &s)?;
            write_wavepacket(&out.out.join("wavepacket.csv"), &w, &cfg.units)?;
            let summary = summarize(&w, &cfg.units, cfg.detection.time_bin_s);
            write_summary(&out.out.join("summary.json"), &summary)?;
            Ok(())
        }
        Command::Sweep {
            source,
            out,
            sweep,
            scenarios,
        } => {
            let cfg = load(&source)?;
            let values = parse_sweep(&sweep)?;
            let dkls: Vec<(String, f64)> = if scenarios {
                vec![
                    ("sweep_dkl0.csv".into(), 0.0),
                    ("sweep_dkl037pi.csv".into(), 0.37 * std::f64::consts::PI),
                    ("sweep_dkl074pi.csv".into(), 0.74 * std::f64::consts::PI),
                ]
            } else {
                vec![("sweep.csv".into(), cfg.physical.delta_k_l)]
            };
            let names: Vec<&str> = dkls.iter().map(|(n, _)| n.as_str()).collect();
            prepare_out(&out, &names)?;
            for (name, dkl) in &dkls {
                let rows: Vec<SweepRow> = values
                    .iter()
                    .map(|&delta_c| {
                        let mut p = cfg.physical;
                        p.delta_c = delta_c;
                        p.delta_k_l = *dkl;
                        sweep_point(&cfg, &p, delta_c)
                    })
                    .collect();
                write_sweep(&out.out.join(name), &rows)?;
            }
            Ok(())
        }
        Command::Histogram {
            source,
            out,
            seed,
            input,
        } => {
            let cfg = load(&source)?;
            if let Some(input) = input {
                prepare_out(&out, &["analysis.csv"])?;
                let h = read_histogram(&input)?;
                let (_, ch) = channel_for(&cfg)?;
                let rec = analyze_histogram(&h, &ch)?;
                let mut text = String::from("bin_start_s,rc_plus_env_per_s,rc_per_s\n");
                for ((t, v), rc) in h.bin_start_s.iter().zip(&rec.rc_plus_env_per_s).zip(rec.rc_per_s()) {
                    text.push_str(&format!("{:e},{:e},{:e}\n", t, v, rc));
                }
                std::fs::write(out.out.join("analysis.csv"), text)?;
                Ok(())
            } else {
                prepare_out(&out, &["histogram.csv"])?;
                let (w, ch) = channel_for(&cfg)?;
                let bin_gamma = cfg.units.gamma_time(cfg.detection.time_bin_s);
                let (prof, _) = rebin(&w, bin_gamma);
                let rc_si: Vec<f64> = prof.iter().map(|&r| cfg.units.rate_per_s(r)).collect();
                let expected = expected_counts(&rc_si, &ch);
                let h = synthesize_histogram(&expected, &ch, seed);
                write_histogram(&out.out.join("histogram.csv"), &h)?;
                Ok(())
            }
        }
        Command::Validate { level, report } => {
            let level = match level.as_str() {
                "quick" => Level::Quick,
                "full" => Level::Full,
                other => {
                    return Err(Error::config(
                        "level",
                        format!("unknown level `{other}` (quick|full)"),
                    ))
                }
            };
            let rep = validate::run(level);
            for c in &rep.checks {
                println!(
                    "{} {} ({})",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.detail
                );
            }
            if let Some(path) = report {
                std::fs::write(path, serde_json::to_string_pretty(&rep)?)?;
            }
            if rep.passed {
                Ok(())
            } else {
                Err(Error::Config {
                    field: "validate".into(),
                    message: "one or more checks failed".into(),
                })
            }
        }
    }
}

fn channel_for(cfg: &Config<Real>) -> Result<(Wavepacket<Real>, ChannelModel), Error> {
    let tau = default_tau(cfg);
    let (_, w) = wavepacket(&cfg.physical, &cfg.grid, &tau)?;
    let r_s = cfg.units.rate_per_s(w.r_s);
    let r_as = cfg.units.rate_per_s(w.background);
    let ch = ChannelModel::new(cfg.detection, r_s, r_as)?;
    Ok((w, ch))
}

fn sweep_point(cfg: &Config<Real>, p: &biphoton::params::PhysicalParams<Real>, delta_c: f64) -> SweepRow {
    let tau = default_tau(cfg);
    match wavepacket(p, &cfg.grid, &tau) {
        Ok((_, w)) => {
            let bin = cfg.units.gamma_time(cfg.detection.time_bin_s);
            SweepRow {
                delta_c,
                tau_delay_s: delay_time(&w).ok().map(|t| cfg.units.seconds(t)),
                r_p: w.r_p,
                r_b: cfg.units.rate_per_s(w.r_b),
                r_b_times_r_p: cfg.units.rate_per_s(w.r_b) * w.r_p,
                sbr: signal_to_background(&w, bin),
                error: None,
            }
        }
        Err(e) => SweepRow {
            delta_c,
            tau_delay_s: None,
            r_p: f64::NAN,
            r_b: f64::NAN,
            r_b_times_r_p: f64::NAN,
            sbr: f64::NAN,
            error: Some(e.to_string()),
        },
    }
}

/// Parses "name=start:stop:step" with an inclusive stop.
fn parse_sweep(spec: &str) -> Result<Vec<f64>, Error> {
    let (name, range) = spec
        .split_once('=')
        .ok_or_else(|| Error::config("sweep", "expected name=start:stop:step"))?;
    if name != "delta_c" {
        return Err(Error::config(
            "sweep",
            format!("unsupported sweep parameter `{name}` (only delta_c)"),
        ));
    }
    let parts: Vec<&str> = range.split(':').collect();
    let [start, stop, step] = parts.as_slice() else {
        return Err(Error::config("sweep", "expected start:stop:step"));
    };
    let parse = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| Error::config("sweep", format!("not a number: `{s}`")))
    };
    let (start, stop, step) = (parse(start)?, parse(stop)?, parse(step)?);
    if !(step > 0.0) || stop < start {
        return Err(Error::config("sweep", "need step > 0 and stop >= start"));
    }
    let n = ((stop - start) / step).round() as usize + 1;
    let values: Vec<f64> = (0..n).map(|i| start + i as f64 * step).collect();
    if values.is_empty() {
        return Err(Error::config("sweep", "empty value list"));
    }
    Ok(values)
}
