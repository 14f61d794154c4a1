use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("series not converged after {terms} terms: tail bound {tail:e} above tolerance {tolerance:e}")]
    Truncation { terms: usize, tail: f64, tolerance: f64 },

    #[error("too close to a pole: {what} (|distance| {distance:e} < guard {guard:e})")]
    PoleProximity { what: String, distance: f64, guard: f64 },

    #[error("trigonometric singularity: {0}")]
    TrigSingularity(String),

    #[error("outside the domain: {0}")]
    Domain(String),

    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),

    #[error("unknown function `{0}`")]
    UnknownFunction(String),

    #[error("not expandable as a one-variable q-series: {0}")]
    UnsupportedFormal(String),

    #[error("series is not invertible: {0}")]
    NotInvertible(String),

    #[error("configuration error: {0}")]
    Config(String),
}

impl Error {
    pub fn is_pole(&self) -> bool {
        matches!(self, Error::PoleProximity { .. })
    }
}
