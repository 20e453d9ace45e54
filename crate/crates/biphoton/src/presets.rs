//! Named parameter presets matching the paper's figure captions.
//!
//! `fig2a`..`fig2f` are the slow-light-regime wavepackets (Omega_c = 1 Gamma)
//! at coupling detunings 0, +1, -1, +2, -2, +3 Gamma; `fig4a`..`fig4f` are the
//! damped-Rabi-regime counterparts (Omega_c = 2 Gamma). `fig3` and `fig5` are
//! the corresponding detuning-sweep scenarios and carry the resonant
//! parameters of their wavepacket families.

use crate::params::{Config, DetectionParams, FrequencyGrid, PhysicalParams};
use crate::scalar::Scalar;
use crate::units::UnitSystem;

const PANEL_DETUNINGS: [(char, f64); 6] = [
    ('a', 0.0),
    ('b', 1.0),
    ('c', -1.0),
    ('d', 2.0),
    ('e', -2.0),
    ('f', 3.0),
];

fn base<T: Scalar>(omega_c: f64, delta_c: f64) -> Config<T> {
    // The Omega_c = 2 family has a wider spectrum; the default half-width
    // leaves too much weight at the grid edge for those presets.
    let grid = if omega_c > 1.5 {
        FrequencyGrid::new(T::of(64.0), 65536).expect("static grid")
    } else {
        FrequencyGrid::default()
    };
    Config {
        physical: PhysicalParams {
            od: T::of(10.0),
            omega_c: T::of(omega_c),
            omega_d: T::of(1.0),
            delta_c: T::of(delta_c),
            delta_d: T::of(10.0),
            gamma21: T::of(0.001),
            delta_k_l: T::of(0.37 * std::f64::consts::PI),
            medium_length_m: Some(0.004),
        },
        detection: DetectionParams::default(),
        grid,
        units: UnitSystem::default(),
    }
}

/// Looks up a preset by name; `None` for unknown names.
pub fn preset<T: Scalar>(name: &str) -> Option<Config<T>> {
    let (family, panel) = match name {
        "fig3" => return Some(base(1.0, 0.0)),
        "fig5" => return Some(base(2.0, 0.0)),
        _ => {
            let mut chars = name.chars();
            let fam: String = (&mut chars).take(4).collect();
            let panel = chars.next()?;
            if chars.next().is_some() {
                return None;
            }
            (fam, panel)
        }
    };
    let omega_c = match family.as_str() {
        "fig2" => 1.0,
        "fig4" => 2.0,
        _ => return None,
    };
    let delta_c = PANEL_DETUNINGS
        .iter()
        .find(|&&(p, _)| p == panel)
        .map(|&(_, d)| d)?;
    Some(base(omega_c, delta_c))
}

/// All shipped preset names.
pub fn preset_names() -> &'static [&'static str] {
    &[
        "fig2a", "fig2b", "fig2c", "fig2d", "fig2e", "fig2f", "fig3", "fig4a", "fig4b", "fig4c",
        "fig4d", "fig4e", "fig4f", "fig5",
    ]
}
