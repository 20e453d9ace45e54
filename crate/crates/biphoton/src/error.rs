use thiserror::Error;

/// Errors surfaced by the model pipeline.
#[derive(Debug, Error)]
pub enum Error {
    /// Config parse or constraint failure; names the offending field.
    #[error("config error in `{field}`: {message}")]
    Config { field: String, message: String },

    /// The classical Bloch system has no unique steady state.
    #[error("steady state is not unique for this parameter set")]
    SingularSteadyState,

    /// The drift resolvent is singular at an isolated frequency.
    #[error("resolvent singular at omega = {omega} Gamma; refine the grid around it")]
    ResolventSingular { omega: f64 },

    /// Backward-wave oscillation threshold: the boundary rearrangement divides
    /// by E22, which has collapsed below 1e-14.
    #[error("backward-wave oscillation threshold reached at omega = {omega} Gamma (|E22| = {magnitude:.3e})")]
    BackwardGain { omega: f64, magnitude: f64 },

    /// The spectrum has not decayed at the grid edges.
    #[error("frequency grid too narrow: edge spectral density is {ratio:.3e} of the peak (limit {limit:.1e})")]
    GridEdge { ratio: f64, limit: f64 },

    /// The omega grid cannot resolve the requested tau range.
    #[error("frequency grid too coarse for tau_max = {tau_max} (1/Gamma); need spacing below {required} Gamma")]
    GridTooCoarse { tau_max: f64, required: f64 },

    /// Delay time is undefined because the correlated area vanishes.
    #[error("delay time undefined: pairing ratio is not positive ({r_p})")]
    UndefinedDelay { r_p: f64 },

    /// Detection model cannot be inverted.
    #[error("detection model not invertible: {reason}")]
    NonInvertibleDetection { reason: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn config(field: &str, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.to_string(),
            message: message.into(),
        }
    }
}
