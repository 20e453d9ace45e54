//! Numerical model of frequency-tunable biphoton generation through backward
//! spontaneous four-wave mixing in a cold three-level atomic ensemble.
//!
//! The pipeline runs in four stages:
//!
//! 1. [`atomic`] builds the Heisenberg-Langevin drift system for the effective
//!    double-Lambda scheme, its classical steady state, the per-frequency
//!    coupled-mode coefficients, and the Langevin diffusion matrix.
//! 2. [`propagation`] solves the backward-wave two-point boundary problem,
//!    producing the scattering matrix and the Langevin Green's kernels.
//! 3. [`observables`] assembles spectra, generation rates, the cross-correlation
//!    function g2(tau), the coincidence rate R_C(tau), and the scalar figures of
//!    merit (pairing ratio, delay time, biphoton rate, signal-to-background).
//! 4. [`detection`] maps R_C(tau) to detector-level coincidence histograms and
//!    back, with Poisson synthesis for Monte Carlo tests.
//!
//! All internal quantities are in natural-linewidth units (rates and Rabi
//! frequencies in Gamma, times in 1/Gamma); [`units::UnitSystem`] converts at
//! the I/O boundary. Everything is generic over the floating-point scalar via
//! [`Scalar`]; the [`Real`]/[`Cplx`] aliases fix the default precision.

pub mod atomic;
pub mod detection;
mod error;
pub mod linalg;
pub mod observables;
pub mod output;
pub mod params;
pub mod presets;
pub mod propagation;
pub mod scalar;
pub mod units;
pub mod validate;

pub use error::Error;
pub use scalar::Scalar;

/// Default scalar precision used by the CLI, presets, and output layer.
pub type Real = f64;
/// Complex number over the default precision.
pub type Cplx = num_complex::Complex<Real>;
/// Single-precision alternative; every module works with this too.
pub type Real32 = f32;

/// Crate-wide result type.
pub type Result<T, E = Error> = std::result::Result<T, E>;
