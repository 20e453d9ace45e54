use approx::assert_relative_eq;
use biphoton::atomic::AtomicResponse;
use biphoton::linalg::{gauss_legendre, trapezoid_uniform};
use biphoton::observables::{
    delay_time, oscillation_period, rebin, signal_to_background, spectra, spectra_point,
    wavepacket, TauGrid, Wavepacket,
};
use biphoton::params::{FrequencyGrid, PhysicalParams};
use biphoton::presets::preset;
use biphoton::{Error, Real};
use num_complex::Complex;

fn paper_params() -> PhysicalParams<Real> {
    preset::<Real>("fig2a").unwrap().physical
}

#[test]
fn spectra_point_matches_reference() {
    // Frozen spectral densities from an independent implementation of the
    // same pipeline (fig2a parameters).
    let r = AtomicResponse::new(&paper_params()).unwrap();
    let nodes = gauss_legendre::<Real>(64);

    let p0 = spectra_point(&r, 0.0, &nodes).unwrap();
    assert_relative_eq!(p0.total_s(), 0.0767980991619564, max_relative = 1e-9);
    assert_relative_eq!(p0.total_as(), 0.07738001968703831, max_relative = 1e-9);
    assert!((p0.phi - Complex::new(-0.15449302750600585, -0.18437197321559795)).norm() < 1e-9);

    let p1 = spectra_point(&r, 0.5, &nodes).unwrap();
    assert_relative_eq!(p1.total_s(), 0.006637981421355904, max_relative = 1e-9);
    assert_relative_eq!(p1.total_as(), 0.005541910249808164, max_relative = 1e-9);
    assert!((p1.phi - Complex::new(0.05165191000269281, -0.010684820818264835)).norm() < 1e-9);

    let p2 = spectra_point(&r, 2.0, &nodes).unwrap();
    assert_relative_eq!(p2.total_s(), 0.00017807948536834652, max_relative = 1e-9);
    assert_relative_eq!(p2.total_as(), 0.00020324074892319444, max_relative = 1e-9);
}

#[test]
fn spectra_point_matches_reference_detuned() {
    let mut p = paper_params();
    p.omega_c = 2.0;
    p.delta_c = 3.0;
    p.delta_k_l = 0.0;
    let r = AtomicResponse::new(&p).unwrap();
    let nodes = gauss_legendre::<Real>(64);
    let pt = spectra_point(&r, -1.25, &nodes).unwrap();
    assert_relative_eq!(pt.total_s(), 0.0009640780859004256, max_relative = 1e-9);
    assert_relative_eq!(pt.total_as(), 0.0008890325113434758, max_relative = 1e-9);
    assert!((pt.phi - Complex::new(-0.012206097926087865, 0.02083730990952714)).norm() < 1e-9);
}

#[test]
fn spectra_are_nonnegative_and_edge_decayed() {
    let grid = FrequencyGrid::new(32.0, 8192).unwrap();
    let s = spectra(&paper_params(), &grid).unwrap();
    assert!(s.r_s > 0.0 && s.r_as > 0.0);
    for pt in &s.points {
        assert!(pt.total_s() >= 0.0, "negative Stokes density at {}", pt.omega);
        assert!(pt.total_as() >= 0.0, "negative anti-Stokes density at {}", pt.omega);
        assert!(pt.fwm_s >= 0.0 && pt.fwm_as >= 0.0);
    }
    assert!(s.edge_ratio() < 1e-6);
    assert!(s.comm_max_err() < 1e-10);
}

#[test]
fn narrow_grid_is_rejected() {
    let grid = FrequencyGrid::new(4.0, 1024).unwrap();
    match spectra(&paper_params(), &grid) {
        Err(Error::GridEdge { ratio, .. }) => assert!(ratio > 1e-6),
        other => panic!("expected GridEdge, got {other:?}"),
    }
}

#[test]
fn coarse_grid_cannot_reach_long_delays() {
    let grid = FrequencyGrid::new(32.0, 1024).unwrap();
    let s = spectra(&paper_params(), &grid);
    // 1024 points still decay fine at the edge; the tau range is the problem.
    let s = s.unwrap();
    let tau = TauGrid::up_to(1000.0, 1.0);
    match biphoton::observables::cross_correlation(&s, &tau) {
        Err(Error::GridTooCoarse { .. }) => {}
        other => panic!("expected GridTooCoarse, got {other:?}"),
    }
}

/// Synthetic wavepacket with a purely exponential correlated excess.
fn exponential_wavepacket(tau0: f64, background: f64, amp: f64) -> Wavepacket<Real> {
    let tau = TauGrid::up_to(20.0 * tau0, tau0 / 400.0);
    let rc: Vec<f64> = tau
        .values()
        .iter()
        .map(|&t| background + amp * (-t / tau0).exp())
        .collect();
    let excess: Vec<f64> = rc.iter().map(|&r| r - background).collect();
    let r_p = trapezoid_uniform(&excess, tau.step);
    let g2 = rc.iter().map(|&r| r / background).collect();
    Wavepacket {
        tau,
        g2,
        rc,
        background,
        r_p,
        r_p_freq: r_p,
        r_b: background,
        r_s: 1.0,
    }
}

#[test]
fn delay_time_of_exponential_is_its_time_constant() {
    // For excess ~ exp(-t / tau0) the 1 - 1/e area quantile sits exactly at
    // tau0; closed form oracle for the quantile search.
    for tau0 in [0.5, 3.0, 17.0] {
        let w = exponential_wavepacket(tau0, 0.2, 1.0);
        let d = delay_time(&w).unwrap();
        assert_relative_eq!(d, tau0, max_relative = 1e-4);
    }
}

#[test]
fn delay_time_needs_positive_correlated_area() {
    let mut w = exponential_wavepacket(1.0, 0.2, 1.0);
    w.r_p = 0.0;
    match delay_time(&w) {
        Err(Error::UndefinedDelay { .. }) => {}
        other => panic!("expected UndefinedDelay, got {other:?}"),
    }
}

#[test]
fn rebin_averages_within_bins() {
    let tau = TauGrid { step: 1.0, count: 6 };
    let w = Wavepacket {
        tau,
        g2: vec![1.0; 6],
        rc: vec![1.0, 3.0, 5.0, 7.0, 9.0, 11.0],
        background: 0.0,
        r_p: 1.0,
        r_p_freq: 1.0,
        r_b: 1.0,
        r_s: 1.0,
    };
    let (prof, width) = rebin(&w, 2.0);
    assert_eq!(width, 2.0);
    assert_eq!(prof, vec![2.0, 6.0, 10.0]);
}

#[test]
fn signal_to_background_of_synthetic_profile() {
    let w = exponential_wavepacket(1.0, 0.5, 2.0);
    // Bin width equal to the sample step keeps the peak sample intact:
    // SBR = amp / background.
    let sbr = signal_to_background(&w, w.tau.step);
    assert_relative_eq!(sbr, 4.0, max_relative = 1e-2);
}

#[test]
fn oscillation_period_recovers_synthetic_beat() {
    let period = 7.0;
    let tau = TauGrid::up_to(60.0, 0.05);
    let omega = 2.0 * std::f64::consts::PI / period;
    let rc: Vec<f64> = tau
        .values()
        .iter()
        .map(|&t: &f64| 0.1 + (-t / 30.0).exp() * (omega * t).sin().powi(2))
        .collect();
    let excess: Vec<f64> = rc.iter().map(|&r| r - 0.1).collect();
    let r_p = trapezoid_uniform(&excess, tau.step);
    let w = Wavepacket {
        tau,
        g2: rc.iter().map(|&r| r / 0.1).collect(),
        rc,
        background: 0.1,
        r_p,
        r_p_freq: r_p,
        r_b: 0.1,
        r_s: 1.0,
    };
    // sin^2 has minima every half cycle of omega, i.e. every period/2.
    let p = oscillation_period(&w, 0.25).unwrap();
    assert_relative_eq!(p, period / 2.0, max_relative = 0.15);
    // A monotone profile reports no period.
    assert!(oscillation_period(&exponential_wavepacket(1.0, 0.2, 1.0), 0.25).is_none());
}

#[test]
fn pairing_ratio_time_and_frequency_paths_agree() {
    let cfg = preset::<Real>("fig2a").unwrap();
    let tau = TauGrid::up_to(cfg.units.gamma_time(2e-6), cfg.units.gamma_time(1e-9));
    let grid = FrequencyGrid::new(32.0, 16384).unwrap();
    let (_, w) = wavepacket(&cfg.physical, &grid, &tau).unwrap();
    // Parseval: same area computed as a tau integral and an omega integral.
    // The residual is tau-truncation of the slow-light tail.
    assert_relative_eq!(w.r_p, w.r_p_freq, max_relative = 2e-3);
    assert!(w.r_p > 0.0 && w.r_p < 1.0);
    assert_eq!(w.r_b, w.background);
}

#[test]
fn float32_pipeline_stays_consistent() {
    // The generic scalar path must produce the same physics at f32 precision.
    let p64 = paper_params();
    let p32 = PhysicalParams::<f32> {
        od: 10.0,
        omega_c: 1.0,
        omega_d: 1.0,
        delta_c: 0.0,
        delta_d: 10.0,
        gamma21: 1e-3,
        delta_k_l: (0.37 * std::f64::consts::PI) as f32,
        medium_length_m: Some(0.004),
    };
    let r64 = AtomicResponse::new(&p64).unwrap();
    let r32 = AtomicResponse::new(&p32).unwrap();
    let nodes64 = gauss_legendre::<f64>(64);
    let nodes32 = gauss_legendre::<f32>(64);
    let a = spectra_point(&r64, 0.5, &nodes64).unwrap();
    let b = spectra_point(&r32, 0.5f32, &nodes32).unwrap();
    let rel = ((a.total_as() - b.total_as() as f64) / a.total_as()).abs();
    assert!(rel < 5e-2, "f32 drifted by {rel}");
}
