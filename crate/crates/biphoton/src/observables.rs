//! Spectra, generation rates, cross-correlation, coincidence rate, and the
//! scalar figures of merit (pairing ratio, delay time, biphoton rate, SBR).
//!
//! Everything here stays in Gamma-units; the output layer converts.

use crate::atomic::AtomicResponse;
use crate::linalg::{gauss_legendre, trapezoid_uniform};
use crate::params::{FrequencyGrid, PhysicalParams};
use crate::propagation::{commutator_sum, greens_kernels, scattering_matrix};
use crate::scalar::{czero, Scalar, C};
use crate::{Error, Result};
use rayon::prelude::*;

/// Default Gauss-Legendre node count for the z integrals.
pub const DEFAULT_Z_NODES: usize = 64;

/// Relative spectral density allowed at the grid edges.
pub const EDGE_LIMIT: f64 = 1e-6;

/// One frequency sample of the assembled spectra.
#[derive(Clone, Copy, Debug)]
pub struct SpectraPoint<T: Scalar> {
    pub omega: T,
    /// Stimulated-FWM parts |B|^2 and |C|^2.
    pub fwm_s: T,
    pub fwm_as: T,
    /// Langevin-noise parts of the two spectra.
    pub noise_s: T,
    pub noise_as: T,
    /// Biphoton spectral amplitude B* D + cross-noise term (Eq. 6 kernel).
    pub phi: C<T>,
    /// Commutator sum rule value; 1 exactly for a consistent noise model.
    pub comm: T,
}

impl<T: Scalar> SpectraPoint<T> {
    pub fn total_s(&self) -> T {
        self.fwm_s + self.noise_s
    }
    pub fn total_as(&self) -> T {
        self.fwm_as + self.noise_as
    }
}

/// Spectra on the full frequency grid with integrated rates (Gamma-units).
#[derive(Clone, Debug)]
pub struct Spectra<T: Scalar> {
    pub grid: FrequencyGrid<T>,
    pub points: Vec<SpectraPoint<T>>,
    /// Integrated Stokes rate R_s.
    pub r_s: T,
    /// Integrated anti-Stokes rate R_as.
    pub r_as: T,
}

impl<T: Scalar> Spectra<T> {
    /// Largest edge spectral density relative to the peak.
    pub fn edge_ratio(&self) -> T {
        let first = &self.points[0];
        let last = &self.points[self.points.len() - 1];
        let edge = first
            .total_s()
            .max(first.total_as())
            .max(last.total_s())
            .max(last.total_as());
        let peak = self
            .points
            .iter()
            .fold(T::zero(), |m, p| m.max(p.total_s()).max(p.total_as()));
        if peak > T::zero() {
            edge / peak
        } else {
            T::zero()
        }
    }

    /// Worst deviation of the commutator sum rule from 1 across the grid.
    pub fn comm_max_err(&self) -> T {
        self.points
            .iter()
            .fold(T::zero(), |m, p| m.max((p.comm - T::one()).abs()))
    }
}

/// Spectral densities, cross spectrum, and sum-rule residual at one frequency.
pub fn spectra_point<T: Scalar>(
    response: &AtomicResponse<T>,
    omega: T,
    nodes: &[(T, T)],
) -> Result<SpectraPoint<T>> {
    let coeffs = response.coupled_mode_matrix(omega)?;
    let scat = scattering_matrix(&coeffs)?;
    let kernels = greens_kernels(&coeffs, &scat, nodes);
    let diff = &response.diffusion;

    let mut noise_s = T::zero();
    let mut noise_as = T::zero();
    let mut cross = czero::<T>();
    for (idx, &(_, w)) in kernels.nodes.iter().enumerate() {
        let p = &kernels.p[idx];
        let q = &kernels.q[idx];
        let mut ns = czero::<T>();
        let mut na = czero::<T>();
        let mut cx = czero::<T>();
        for mu in 0..9 {
            for nu in 0..9 {
                let dn = diff.normal(mu, nu);
                ns = ns + p[mu].conj() * dn * p[nu];
                cx = cx + p[mu].conj() * dn * q[nu];
                na = na + q[mu] * diff.antinormal(mu, nu) * q[nu].conj();
            }
        }
        noise_s = noise_s + w * ns.re;
        noise_as = noise_as + w * na.re;
        cross = cross + cx * C::new(w, T::zero());
    }
    let comm = commutator_sum(&scat, &kernels, diff);
    Ok(SpectraPoint {
        omega,
        fwm_s: scat.b.norm_sqr(),
        fwm_as: scat.c.norm_sqr(),
        noise_s,
        noise_as,
        phi: scat.b.conj() * scat.d + cross,
        comm,
    })
}

/// Assembles the spectra of Eqs. (4)-(5) over the grid, in parallel per
/// frequency, and integrates the rates.
pub fn spectra<T: Scalar>(p: &PhysicalParams<T>, grid: &FrequencyGrid<T>) -> Result<Spectra<T>> {
    let response = AtomicResponse::new(p)?;
    let nodes = gauss_legendre::<T>(DEFAULT_Z_NODES);
    let omegas = grid.values();
    let points: Result<Vec<_>> = omegas
        .par_iter()
        .map(|&w| spectra_point(&response, w, &nodes))
        .collect();
    let points = points?;

    let two_pi = T::of(2.0) * T::PI();
    let d = grid.spacing();
    let tot_s: Vec<T> = points.iter().map(|p| p.total_s()).collect();
    let tot_as: Vec<T> = points.iter().map(|p| p.total_as()).collect();
    let spectra = Spectra {
        grid: *grid,
        points,
        r_s: trapezoid_uniform(&tot_s, d) / two_pi,
        r_as: trapezoid_uniform(&tot_as, d) / two_pi,
    };

    let edge = spectra.edge_ratio().to_f64().unwrap_or(f64::NAN);
    if edge > EDGE_LIMIT {
        return Err(Error::GridEdge {
            ratio: edge,
            limit: EDGE_LIMIT,
        });
    }
    Ok(spectra)
}

/// Uniform tau grid starting at zero, in Gamma-units of time.
#[derive(Clone, Copy, Debug)]
pub struct TauGrid<T: Scalar> {
    pub step: T,
    pub count: usize,
}

impl<T: Scalar> TauGrid<T> {
    /// Grid covering [0, t_max] with the given step.
    pub fn up_to(t_max: T, step: T) -> Self {
        let count = (t_max / step).ceil().to_usize().unwrap_or(1) + 1;
        TauGrid { step, count }
    }

    pub fn values(&self) -> Vec<T> {
        (0..self.count).map(|i| T::of(i as f64) * self.step).collect()
    }

    pub fn t_max(&self) -> T {
        T::of((self.count - 1) as f64) * self.step
    }
}

/// Second-order cross-correlation g2(tau) on the tau grid (Eq. 6).
pub fn cross_correlation<T: Scalar>(s: &Spectra<T>, tau: &TauGrid<T>) -> Result<Vec<T>> {
    let d_omega = s.grid.spacing();
    // The direct Fourier sum needs the omega spacing to resolve the fastest
    // retained phase; past half a turn per step the quadrature is meaningless.
    let max_phase = d_omega * tau.t_max();
    if max_phase > T::PI() {
        return Err(Error::GridTooCoarse {
            tau_max: tau.t_max().to_f64().unwrap_or(f64::NAN),
            required: (T::PI() / tau.t_max()).to_f64().unwrap_or(f64::NAN),
        });
    }
    let norm = s.r_s * s.r_as;
    let two_pi = T::of(2.0) * T::PI();
    let taus = tau.values();
    Ok(taus
        .par_iter()
        .map(|&t| {
            let mut acc = czero::<T>();
            for pt in &s.points {
                let phase = -pt.omega * t;
                let (sin, cos) = (phase.sin(), phase.cos());
                acc = acc + pt.phi * C::new(cos, sin);
            }
            let w = acc * C::new(d_omega / two_pi, T::zero());
            T::one() + w.norm_sqr() / norm
        })
        .collect())
}

/// Coincidence rate, pairing ratio, and delay time bundled with their grids.
#[derive(Clone, Debug)]
pub struct Wavepacket<T: Scalar> {
    pub tau: TauGrid<T>,
    pub g2: Vec<T>,
    /// R_C(tau) = R_as g2(tau) under the Delta_T = 1/R_s normalization,
    /// Gamma-units.
    pub rc: Vec<T>,
    /// Flat background R_C(infinity) = R_as.
    pub background: T,
    /// Correlated area of the wavepacket (dimensionless).
    pub r_p: T,
    /// Same area from the frequency-domain quadrature (Parseval cross-check).
    pub r_p_freq: T,
    /// Biphoton generation rate R_B = R_as, Gamma-units.
    pub r_b: T,
    pub r_s: T,
}

/// R_C(tau) = R_as g2(tau); correlated area gives r_p, cross-checked in the
/// frequency domain.
pub fn coincidence_rate<T: Scalar>(s: &Spectra<T>, tau: &TauGrid<T>, g2: Vec<T>) -> Wavepacket<T> {
    let rc: Vec<T> = g2.iter().map(|&g| s.r_as * g).collect();
    let excess: Vec<T> = rc.iter().map(|&r| r - s.r_as).collect();
    let r_p = trapezoid_uniform(&excess, tau.step);

    let two_pi = T::of(2.0) * T::PI();
    let phi2: Vec<T> = s.points.iter().map(|p| p.phi.norm_sqr()).collect();
    let r_p_freq = trapezoid_uniform(&phi2, s.grid.spacing()) / two_pi / s.r_s;

    Wavepacket {
        tau: *tau,
        g2,
        rc,
        background: s.r_as,
        r_p,
        r_p_freq,
        r_b: s.r_as,
        r_s: s.r_s,
    }
}

/// Smallest tau with (1/r_p) * integral_0^tau [R_C - R_C(inf)] = 1 - 1/e,
/// linearly interpolated between samples.
pub fn delay_time<T: Scalar>(w: &Wavepacket<T>) -> Result<T> {
    if !(w.r_p > T::zero()) {
        return Err(Error::UndefinedDelay {
            r_p: w.r_p.to_f64().unwrap_or(f64::NAN),
        });
    }
    let target = (T::one() - T::E().recip()) * w.r_p;
    let mut cum = T::zero();
    let half = T::of(0.5);
    for i in 1..w.rc.len() {
        let seg = half
            * ((w.rc[i - 1] - w.background) + (w.rc[i] - w.background))
            * w.tau.step;
        if cum + seg >= target && seg > T::zero() {
            let frac = (target - cum) / seg;
            return Ok((T::of((i - 1) as f64) + frac) * w.tau.step);
        }
        cum = cum + seg;
    }
    // Quantile beyond the grid; report the end point.
    Ok(w.tau.t_max())
}

/// Rebins R_C by averaging samples into bins of the given width.
pub fn rebin<T: Scalar>(w: &Wavepacket<T>, bin_width: T) -> (Vec<T>, T) {
    let mut sums: Vec<(T, usize)> = Vec::new();
    for (i, &r) in w.rc.iter().enumerate() {
        let t = T::of(i as f64) * w.tau.step;
        let b = (t / bin_width).floor().to_usize().unwrap_or(0);
        if b >= sums.len() {
            sums.resize(b + 1, (T::zero(), 0));
        }
        sums[b].0 = sums[b].0 + r;
        sums[b].1 += 1;
    }
    let prof: Vec<T> = sums
        .into_iter()
        .filter(|&(_, n)| n > 0)
        .map(|(s, n)| s / T::of(n as f64))
        .collect();
    (prof, bin_width)
}

/// Peak of [R_C - background] over background after rebinning to the detection
/// time bin.
pub fn signal_to_background<T: Scalar>(w: &Wavepacket<T>, bin_width: T) -> T {
    let (prof, _) = rebin(w, bin_width);
    let peak = prof.iter().fold(T::zero(), |m, &v| m.max(v - w.background));
    peak / w.background
}

/// First oscillation period of the wavepacket: spacing between the first two
/// local minima of the rebinned excess profile, `None` when the profile is
/// monotone past its peak (slow-light regime).
pub fn oscillation_period<T: Scalar>(w: &Wavepacket<T>, bin_width: T) -> Option<T> {
    let (prof, width) = rebin(w, bin_width);
    let excess: Vec<T> = prof.iter().map(|&v| v - w.background).collect();
    let peak = excess.iter().fold(T::zero(), |m, &v| m.max(v));
    let floor = peak * T::of(1e-3);
    let mut minima = Vec::new();
    let mut i_peak = 0;
    for i in 1..excess.len() {
        if excess[i] > excess[i_peak] {
            i_peak = i;
        }
    }
    // A dip only counts as an oscillation minimum if the lobe preceding it
    // rose clearly above the floor; this skips ripples in the noise tail.
    let mut lobe_max = excess[i_peak];
    for i in (i_peak + 1).max(1)..excess.len().saturating_sub(1) {
        lobe_max = lobe_max.max(excess[i]);
        if excess[i] <= excess[i - 1] && excess[i] < excess[i + 1] && lobe_max > floor {
            minima.push(i);
            lobe_max = T::zero();
            if minima.len() == 2 {
                break;
            }
        }
    }
    match minima.as_slice() {
        [a, b, ..] => Some(T::of((b - a) as f64) * width),
        _ => None,
    }
}

/// Full pipeline: spectra, g2, coincidence rate.
pub fn wavepacket<T: Scalar>(
    p: &PhysicalParams<T>,
    grid: &FrequencyGrid<T>,
    tau: &TauGrid<T>,
) -> Result<(Spectra<T>, Wavepacket<T>)> {
    let s = spectra(p, grid)?;
    let g2 = cross_correlation(&s, tau)?;
    let w = coincidence_rate(&s, tau, g2);
    Ok((s, w))
}
