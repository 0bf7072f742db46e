use thiserror::Error;

use crate::linalg::LinalgError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// One of the scattering denominators `U0 + U2` or `U0 - 2 U2` vanishes.
    #[error("scattering-resonance singularity: {denominator} = 0")]
    ScatteringResonance { denominator: &'static str },

    #[error("tunneling amplitude must be positive, got {0}")]
    NonPositiveTunneling(f64),

    #[error("temperature must be positive, got {0}")]
    NonPositiveTemperature(f64),

    #[error("invalid coupled label (j={j}, m={m})")]
    InvalidLabel { j: u8, m: i8 },

    #[error("no crossing in range [{start}, {stop}]")]
    NoCrossing { start: f64, stop: f64 },

    #[error("invalid range: {0}")]
    InvalidRange(String),

    #[error("non-finite {quantity} at grid point {index}")]
    NonFinite { quantity: &'static str, index: usize },

    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

impl Error {
    /// Errors caused by inputs outside the physical domain of the model.
    pub fn is_domain_error(&self) -> bool {
        matches!(
            self,
            Error::ScatteringResonance { .. } | Error::NonPositiveTunneling(_) | Error::NonPositiveTemperature(_)
        )
    }
}
