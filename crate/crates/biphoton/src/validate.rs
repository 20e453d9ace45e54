//! Self-check suite behind `validate` in the CLI: module invariants evaluated
//! on the shipped presets, reported as a machine-readable list.

use crate::atomic::{assemble_drift, AtomicResponse, CoupledModeCoefficients};
use crate::linalg::gauss_legendre;
use crate::observables::{
    cross_correlation, coincidence_rate, delay_time, spectra, wavepacket, TauGrid,
};
use crate::params::{FrequencyGrid, PhysicalParams};
use crate::presets::preset;
use crate::propagation::{commutator_sum, greens_kernels, oracle_integrate, scattering_matrix};
use crate::scalar::{ci, czero, C};
use crate::units::UnitSystem;
use crate::Real;
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub level: String,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    Quick,
    Full,
}

fn check(name: &str, passed: bool, detail: String) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        passed,
        detail,
    }
}

fn fig2a() -> PhysicalParams<Real> {
    preset::<Real>("fig2a").unwrap().physical
}

/// Coarse grid for the quick checks; wide enough to satisfy the edge check.
fn coarse_grid() -> FrequencyGrid<Real> {
    FrequencyGrid::new(32.0, 4096).unwrap()
}

fn coarse_tau() -> TauGrid<Real> {
    // About 1.6 us at 1 ns steps for the default Gamma.
    let u = UnitSystem::default();
    TauGrid::up_to(u.gamma_time(1.6e-6), u.gamma_time(1e-9))
}

/// Runs the suite; `Full` adds the heavier convergence checks.
pub fn run(level: Level) -> ValidationReport {
    let mut checks = Vec::new();

    // Unit round trip.
    {
        let u = UnitSystem::default();
        let t = 123.456;
        let rt = u.gamma_time(u.seconds(t));
        let err = ((rt - t) / t).abs();
        checks.push(check(
            "units-round-trip",
            err < 1e-12,
            format!("relative error {err:.2e}"),
        ));
    }

    // Drift trace row vanishes.
    {
        let d = assemble_drift(&fig2a());
        let worst = d
            .trace_row()
            .iter()
            .map(|c| c.norm())
            .fold(0.0_f64, f64::max);
        checks.push(check(
            "drift-trace-row-zero",
            worst < 1e-12,
            format!("max |entry| {worst:.2e}"),
        ));
    }

    // Steady state against the far-detuned estimate.  The bare two-level
    // value (Omega_d/2)^2 / Delta_d^2 is doubled because decay into the
    // second ground state is recycled through the excited state by the
    // resonant coupling field rather than lost.
    {
        let r = AtomicResponse::new(&fig2a()).unwrap();
        let s33 = r.steady.population(3);
        let est = 2.0 * 0.25 / (100.0 + 0.25);
        let rel = ((s33 - est) / est).abs();
        checks.push(check(
            "steady-state-excited-population",
            rel < 0.10,
            format!("sigma33 {s33:.3e} vs estimate {est:.3e}"),
        ));
    }

    // EIT transparency: no pump, resonant coupling, gamma21 = 0.
    {
        let mut p = fig2a();
        p.omega_d = 0.0;
        p.gamma21 = 0.0;
        p.delta_k_l = 0.0;
        let r = AtomicResponse::new(&p).unwrap();
        let m = r.coupled_mode_matrix(0.0).unwrap();
        let s = scattering_matrix(&m).unwrap();
        let err = (s.d.norm() - 1.0).abs();
        checks.push(check(
            "eit-transparency",
            err < 1e-6,
            format!("| |D| - 1 | = {err:.2e}"),
        ));
    }

    // Two-level absorption: both classical fields off.
    {
        let mut p = fig2a();
        p.omega_c = 0.0;
        p.omega_d = 0.0;
        p.delta_c = 0.0;
        p.delta_k_l = 0.0;
        let r = AtomicResponse::new(&p).unwrap();
        let m = r.coupled_mode_matrix(0.0).unwrap();
        let s = scattering_matrix(&m).unwrap();
        let t = s.d.norm_sqr();
        let expect = (-10.0_f64).exp();
        let rel = ((t - expect) / expect).abs();
        checks.push(check(
            "two-level-absorption",
            rel < 1e-6,
            format!("|D|^2 = {t:.6e} vs e^-OD = {expect:.6e}"),
        ));
    }

    // Oracle equivalence at sampled frequencies.
    {
        let r = AtomicResponse::new(&fig2a()).unwrap();
        let mut worst = 0.0_f64;
        for k in 0..5 {
            let w = -12.0 + 6.0 * k as f64;
            let m = r.coupled_mode_matrix(w).unwrap();
            let s1 = scattering_matrix(&m).unwrap();
            let s2 = oracle_integrate(&m, 20_000).unwrap();
            for (a, b) in [(s1.a, s2.a), (s1.b, s2.b), (s1.c, s2.c), (s1.d, s2.d)] {
                let scale = a.norm().max(1e-30);
                worst = worst.max((a - b).norm() / scale);
            }
        }
        checks.push(check(
            "scattering-oracle-equivalence",
            worst < 1e-8,
            format!("max relative deviation {worst:.2e}"),
        ));
    }

    // Commutator sum rule across a coarse grid.
    {
        let r = AtomicResponse::new(&fig2a()).unwrap();
        let nodes = gauss_legendre::<Real>(64);
        let mut worst = 0.0_f64;
        for i in 0..33 {
            // Half-integer offsets avoid nu = 0, where the resolvent is
            // exactly singular (the trace zero-mode of the drift matrix).
            let w = -16.5 + i as f64;
            let m = r.coupled_mode_matrix(w).unwrap();
            let s = scattering_matrix(&m).unwrap();
            let kern = greens_kernels(&m, &s, &nodes);
            worst = worst.max((commutator_sum(&s, &kern, &r.diffusion) - 1.0).abs());
        }
        checks.push(check(
            "commutator-sum-rule",
            worst < 1e-3,
            format!("max |sum - 1| = {worst:.2e}"),
        ));
    }

    // Delta_k sign reciprocity on a synthetic coefficient matrix.  With all
    // entries real apart from the i*Delta_k term, flipping its sign
    // conjugates the whole matrix, so the scattering magnitudes must match
    // exactly.
    {
        let sym = |sign: f64| CoupledModeCoefficients::<Real> {
            omega: 0.0,
            m11: C::new(-0.08, 0.0),
            m12: C::new(0.03, 0.0),
            m21: C::new(0.03, 0.0),
            m22: C::new(-0.08, 0.0) + ci::<Real>() * C::new(sign * 0.4, 0.0),
            noise_weights_s: [czero(); 9],
            noise_weights_as: [czero(); 9],
            kappa: 2.5,
        };
        let sp = scattering_matrix(&sym(1.0)).unwrap();
        let sm = scattering_matrix(&sym(-1.0)).unwrap();
        let mut worst = 0.0_f64;
        for (a, b) in [(sp.a, sm.a), (sp.b, sm.b), (sp.c, sm.c), (sp.d, sm.d)] {
            worst = worst.max((a.norm() - b.norm()).abs() / a.norm().max(1e-30));
        }
        checks.push(check(
            "delta-k-sign-reciprocity",
            worst < 1e-12,
            format!("max magnitude deviation {worst:.2e}"),
        ));
    }

    // No pump: all rates vanish.
    {
        let mut p = fig2a();
        p.omega_d = 0.0;
        let s = spectra(&p, &coarse_grid());
        let detail = match &s {
            Ok(s) => format!("r_s = {:.2e}, r_as = {:.2e}", s.r_s, s.r_as),
            Err(e) => format!("error: {e}"),
        };
        // With no pump both spectra are identically zero, which also trips the
        // edge check's peak normalization; accept either a clean zero or the
        // degenerate-peak report.
        let passed = match &s {
            Ok(s) => s.r_s.abs() < 1e-12 && s.r_as.abs() < 1e-12,
            Err(_) => false,
        };
        checks.push(check("no-pump-zero-rates", passed, detail));
    }

    if level == Level::Full {
        // z-quadrature convergence: 64 vs 128 nodes.
        {
            let r = AtomicResponse::new(&fig2a()).unwrap();
            let m = r.coupled_mode_matrix(0.3).unwrap();
            let s = scattering_matrix(&m).unwrap();
            let noise = |n: usize| -> f64 {
                let nodes = gauss_legendre::<Real>(n);
                let kern = greens_kernels(&m, &s, &nodes);
                let mut acc = 0.0;
                for (idx, &(_, w)) in kern.nodes.iter().enumerate() {
                    let p = &kern.p[idx];
                    let mut v = czero::<Real>();
                    for mu in 0..9 {
                        for nu in 0..9 {
                            v = v + p[mu].conj() * r.diffusion.normal(mu, nu) * p[nu];
                        }
                    }
                    acc += w * v.re;
                }
                acc
            };
            let a = noise(64);
            let b = noise(128);
            let rel = ((a - b) / a.abs().max(1e-30)).abs();
            checks.push(check(
                "z-quadrature-convergence",
                rel < 1e-6,
                format!("64 vs 128 nodes: relative change {rel:.2e}"),
            ));
        }

        // Blue/red asymmetry flips with the sign of Delta_k L.
        {
            let tau = coarse_tau();
            let grid = coarse_grid();
            let tdel = |delta_c: f64, dkl: f64| -> f64 {
                let mut p = fig2a();
                p.delta_c = delta_c;
                p.delta_k_l = dkl;
                let (_, w) = wavepacket(&p, &grid, &tau).unwrap();
                delay_time(&w).unwrap()
            };
            let dkl = 0.37 * std::f64::consts::PI;
            let a = tdel(1.0, dkl);
            let b = tdel(-1.0, -dkl);
            let rel = ((a - b) / a).abs();
            checks.push(check(
                "asymmetry-flips-with-delta-k-sign",
                rel < 0.01,
                format!("tau_delay {a:.4} vs {b:.4} (1/Gamma), relative {rel:.2e}"),
            ));
        }

        // Frequency-grid refinement stability.
        {
            let tau = coarse_tau();
            let run = |count: usize| {
                let grid = FrequencyGrid::new(32.0, count).unwrap();
                let p = fig2a();
                let s = spectra(&p, &grid).unwrap();
                let g2 = cross_correlation(&s, &tau).unwrap();
                let w = coincidence_rate(&s, &tau, g2);
                (w.r_p, delay_time(&w).unwrap(), w.r_b)
            };
            let (rp1, td1, rb1) = run(8192);
            let (rp2, td2, rb2) = run(16384);
            let rel = [
                ((rp1 - rp2) / rp2).abs(),
                ((td1 - td2) / td2).abs(),
                ((rb1 - rb2) / rb2).abs(),
            ]
            .into_iter()
            .fold(0.0_f64, f64::max);
            checks.push(check(
                "grid-refinement-stability",
                rel < 0.005,
                format!("max relative change on doubling: {rel:.2e}"),
            ));
        }
    }

    let passed = checks.iter().all(|c| c.passed);
    ValidationReport {
        level: match level {
            Level::Quick => "quick",
            Level::Full => "full",
        }
        .to_string(),
        checks,
        passed,
    }
}
