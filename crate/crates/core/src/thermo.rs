//! Partition function, internal energy and heat capacity of the Gibbs state
//! `rho = exp(-beta H) / Z`.
//!
//! The closed form of `Z` groups the nine Boltzmann factors as
//!
//! ```text
//! Z = e^{-beta tau} [ 2 cosh(beta tau) (1 + 2 cosh(beta omega))
//!                   + 2 e^{-beta tau} cosh(2 beta omega)
//!                   + e^{-beta (3 gamma - 2 tau)} ]
//! ```
//!
//! Individual factors overflow long before `Z` itself does, so every weight is
//! carried relative to the ground energy `E0`. Mean energy and heat capacity
//! are the first two cumulants of the level populations,
//! `C_V = beta² (<E²> - <E>²)`, which equals `dU/dT`.

use crate::error::Result;
use crate::params::ModelParams;
use crate::spectrum::{full_spectrum, Spectrum};

/// Level populations of the thermal state, normalised with shifted weights.
#[derive(Debug, Clone)]
pub struct ThermalEnsemble {
    pub beta: f64,
    pub spectrum: Spectrum,
    /// `exp(-beta (E_k - E0))` in spectrum order.
    pub weights: [f64; 9],
    /// `Z exp(beta E0)`.
    pub shifted_z: f64,
}

impl ThermalEnsemble {
    pub fn new(p: &ModelParams) -> Result<Self> {
        let beta = p.beta()?;
        let spectrum = full_spectrum(p);
        let e0 = spectrum.ground().energy;
        let weights = spectrum.levels().map(|l| boltzmann(beta, l.energy - e0));
        let shifted_z = weights.iter().sum();
        Ok(Self { beta, spectrum, weights, shifted_z })
    }

    pub fn ground_energy(&self) -> f64 {
        self.spectrum.ground().energy
    }

    /// `ln Z` from the nine-term Boltzmann sum.
    pub fn log_z(&self) -> f64 {
        -self.beta * self.ground_energy() + self.shifted_z.ln()
    }

    /// Populations `p_k = exp(-beta E_k) / Z` in spectrum order.
    pub fn populations(&self) -> [f64; 9] {
        self.weights.map(|w| w / self.shifted_z)
    }

    pub fn mean_energy(&self) -> f64 {
        let e0 = self.ground_energy();
        e0 + self.excitation_energy()
    }

    /// `U - E0`, free of the cancellation that affects `U` itself at low `T`.
    pub fn excitation_energy(&self) -> f64 {
        let e0 = self.ground_energy();
        self.spectrum.levels().iter().zip(self.populations()).map(|(l, p)| p * (l.energy - e0)).sum()
    }

    pub fn heat_capacity(&self) -> f64 {
        let u = self.mean_energy();
        self.spectrum
            .levels()
            .iter()
            .zip(self.populations())
            .filter(|(_, p)| *p > 0.0)
            .map(|(l, p)| {
                let x = self.beta * (l.energy - u);
                p * x * x
            })
            .sum()
    }
}

/// `exp(-beta dE)` with `beta = 0` giving one even for infinite `dE`.
#[inline]
pub(crate) fn boltzmann(beta: f64, de: f64) -> f64 {
    if beta == 0.0 {
        1.0
    } else {
        (-beta * de).exp()
    }
}

/// `Z exp(beta shift)` evaluated from the closed form, where `shift` is at or
/// below the ground energy.
///
/// The bracket is rewritten with every hyperbolic factor absorbed into a
/// single exponential:
///
/// * `e^{-beta tau} 2 cosh(beta tau) = 1 + e^{-2 beta tau}` (j = 1 and j = 2)
/// * `1 + 2 cosh(beta omega)` (m = 0, ±1)
/// * `2 e^{-2 beta tau} cosh(2 beta omega)` (j = 2, m = ±2)
/// * `e^{-beta (3 gamma - tau)}` (singlet)
///
/// The product of the first two is scaled factor by factor with
/// `a = min(0, 2 tau)` and `b = -|omega|` so no intermediate overflows.
pub fn shifted_partition_function(p: &ModelParams, shift: f64) -> Result<f64> {
    let beta = p.beta()?;
    let (tau, gamma, omega) = (p.tau, p.gamma, p.omega);
    let e = |x: f64| boltzmann(beta, x);

    let a = tau.min(0.0) * 2.0;
    let b = -omega.abs();

    // (1 + e^{-2 beta tau}) scaled by e^{beta a}
    let j12 = e(-a) + e(2.0 * tau - a);
    // (1 + 2 cosh(beta omega)) scaled by e^{beta b}
    let zeeman = e(-b) + e(omega - b) + e(-omega - b);
    // remaining scale e^{beta (shift - a - b)} <= 1
    let rest = e(a + b - shift);
    let stretched = e(2.0 * tau + 2.0 * omega - shift) + e(2.0 * tau - 2.0 * omega - shift);
    let singlet = e(3.0 * gamma - tau - shift);
    Ok(rest * j12 * zeeman + stretched + singlet)
}

/// `ln Z` from the closed form.
pub fn log_partition_function(p: &ModelParams) -> Result<f64> {
    let beta = p.beta()?;
    let e0 = full_spectrum(p).ground().energy;
    let scaled = shifted_partition_function(p, e0)?;
    Ok(-beta * e0 + scaled.ln())
}

/// Closed-form partition function. Overflows to `+inf` only where `Z` itself
/// exceeds the `f64` range; use [`log_partition_function`] there.
pub fn partition_function(p: &ModelParams) -> Result<f64> {
    let beta = p.beta()?;
    let e0 = full_spectrum(p).ground().energy;
    let z = boltzmann(beta, e0) * shifted_partition_function(p, e0)?;
    if z.is_finite() {
        Ok(z)
    } else {
        log_partition_function(p).map(f64::exp)
    }
}

/// `U = T² d(ln Z)/dT`, the ensemble mean energy.
pub fn internal_energy(p: &ModelParams) -> Result<f64> {
    Ok(ThermalEnsemble::new(p)?.mean_energy())
}

/// `C_V = dU/dT = beta² Var(E)`.
pub fn heat_capacity(p: &ModelParams) -> Result<f64> {
    Ok(ThermalEnsemble::new(p)?.heat_capacity())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoPoint {
    pub params: ModelParams,
    pub z: f64,
    pub u: f64,
    pub c_v: f64,
}

impl ThermoPoint {
    pub fn evaluate(p: &ModelParams) -> Result<Self> {
        let ens = ThermalEnsemble::new(p)?;
        Ok(Self { params: *p, z: partition_function(p)?, u: ens.mean_energy(), c_v: ens.heat_capacity() })
    }
}
