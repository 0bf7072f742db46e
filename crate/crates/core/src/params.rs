//! Microscopic lattice parameters, effective spin couplings and the
//! dimensionless model parameters.
//!
//! The lattice model has a tunneling amplitude `t`, a contact scattering
//! amplitude `U0` and a spin-dependent scattering amplitude `U2`. Second order
//! in `t`, tunneling between two singly occupied sites is equivalent to the
//! spin-spin interaction
//!
//! ```text
//! K0 + K1 (S1·S2) + K2 (S1·S2)²
//!
//! K0 = 4t²/(3(U0+U2)) - 4t²/(3(U0-2U2))
//! K1 = 2t²/(U0+U2)
//! K2 = 2t²/(3(U0+U2)) + 4t²/(3(U0-2U2))
//! ```
//!
//! Measuring energies in units of `t` gives `tau = K1/t` and `gamma = K2/t`.
//! The atom self-energy of the lattice model is neglected throughout.

use crate::error::{Error, Result};

/// Denominators smaller than this in magnitude are treated as a resonance.
pub const SINGULARITY_THRESHOLD: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MicroscopicParams {
    pub t: f64,
    pub u0: f64,
    pub u2: f64,
}

impl MicroscopicParams {
    pub fn new(t: f64, u0: f64, u2: f64) -> Result<Self> {
        let m = Self { t, u0, u2 };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.t.is_finite() || self.t <= 0.0 {
            return Err(Error::NonPositiveTunneling(self.t));
        }
        if !(self.u0 + self.u2).is_finite() || (self.u0 + self.u2).abs() <= SINGULARITY_THRESHOLD {
            return Err(Error::ScatteringResonance { denominator: "U0 + U2" });
        }
        if !(self.u0 - 2.0 * self.u2).is_finite() || (self.u0 - 2.0 * self.u2).abs() <= SINGULARITY_THRESHOLD {
            return Err(Error::ScatteringResonance { denominator: "U0 - 2 U2" });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveCouplings {
    pub k0: f64,
    pub k1: f64,
    pub k2: f64,
}

/// One evaluation point of the dimensionless two-spin Hamiltonian
/// `H = omega Jz + tau (S1·S2) + gamma (S1·S2)² + (tau - gamma) I`
/// at temperature `temperature` (k_B = 1, energies in units of `t`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub tau: f64,
    pub gamma: f64,
    pub omega: f64,
    pub temperature: f64,
}

impl ModelParams {
    pub fn new(tau: f64, gamma: f64, omega: f64, temperature: f64) -> Self {
        Self { tau, gamma, omega, temperature }
    }

    /// Coefficient of the identity term.
    #[inline]
    pub fn r(&self) -> f64 {
        self.tau - self.gamma
    }

    /// Inverse temperature. `T = +inf` is accepted and gives `beta = 0`.
    pub fn beta(&self) -> Result<f64> {
        if self.temperature > 0.0 {
            Ok(1.0 / self.temperature)
        } else {
            Err(Error::NonPositiveTemperature(self.temperature))
        }
    }

    pub fn with_tau(self, tau: f64) -> Self {
        Self { tau, ..self }
    }

    pub fn with_gamma(self, gamma: f64) -> Self {
        Self { gamma, ..self }
    }

    pub fn with_omega(self, omega: f64) -> Self {
        Self { omega, ..self }
    }

    pub fn with_temperature(self, temperature: f64) -> Self {
        Self { temperature, ..self }
    }
}

pub fn map_couplings(m: &MicroscopicParams) -> Result<EffectiveCouplings> {
    m.validate()?;
    let t2 = m.t * m.t;
    let even = m.u0 + m.u2;
    let odd = m.u0 - 2.0 * m.u2;
    Ok(EffectiveCouplings {
        k0: 4.0 * t2 / (3.0 * even) - 4.0 * t2 / (3.0 * odd),
        k1: 2.0 * t2 / even,
        k2: 2.0 * t2 / (3.0 * even) + 4.0 * t2 / (3.0 * odd),
    })
}

/// Dimensionless parameters for the lattice couplings `m`. The external field
/// is not a lattice quantity and is passed through, as is the temperature.
pub fn to_model_params(m: &MicroscopicParams, omega: f64, temperature: f64) -> Result<ModelParams> {
    let k = map_couplings(m)?;
    Ok(ModelParams::new(k.k1 / m.t, k.k2 / m.t, omega, temperature))
}
