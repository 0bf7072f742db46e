//! Exact diagonalization of two spin-1 atoms on neighbouring lattice sites.
//!
//! In the deep Mott regime, second-order tunneling leaves the pair with the
//! effective Hamiltonian
//!
//! ```text
//! H = omega Jz + tau (S1·S2) + gamma (S1·S2)² + (tau - gamma) I
//! ```
//!
//! (energies in units of the tunneling amplitude, `k_B = 1`). The crate
//! computes its spectrum, the Gibbs state, the negativity of that state, the
//! heat capacity, and the ground-state level crossings at `tau = omega / 2`
//! and `tau = omega + 3 gamma` that separate the three negativity plateaus.
//!
//! ```
//! use spin1_dimer::{negativity, heat_capacity, find_crossings, ModelParams};
//!
//! let p = ModelParams::new(2.0, 1.0, 1.0, 0.05);
//! let n = negativity(&p)?.negativity;
//! assert!((n - 0.5).abs() < 0.01);
//!
//! let c = heat_capacity(&ModelParams::new(30.0, 7.0, 1.0, 0.6))?;
//! assert!(c < 1e-3);
//!
//! let crossings = find_crossings(7.0, 1.0, (0.0, 30.0))?;
//! assert_eq!(crossings.tau_a(), Some(0.5));
//! assert_eq!(crossings.tau_b(), Some(22.0));
//! # Ok::<(), spin1_dimer::Error>(())
//! ```

pub mod basis;
pub mod cli;
pub mod entanglement;
pub mod error;
pub mod linalg;
pub mod params;
pub mod spectrum;
pub mod sweep;
pub mod thermo;

pub use entanglement::{
    negativity, partial_transpose_closed_form, partial_transpose_numeric, thermal_density_matrix, NegativityResult,
    PartialTransposeMatrix, Phase,
};
pub use error::{Error, Result};
pub use params::{map_couplings, to_model_params, EffectiveCouplings, MicroscopicParams, ModelParams};
pub use spectrum::{
    eigenvalue, find_crossings, full_spectrum, ground_state_energy, CoupledLabel, CrossingReport, Spectrum,
};
pub use sweep::{emit_levels, report_crossings, run_sweep, Output, SweepResult, SweepSpec, SweepVariable};
pub use thermo::{heat_capacity, internal_energy, partition_function, ThermoPoint};

// The guide's snippets run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/model.md")]
    mod model {}
    #[doc = include_str!("../../../book/src/spectrum.md")]
    mod spectrum {}
    #[doc = include_str!("../../../book/src/thermodynamics.md")]
    mod thermodynamics {}
    #[doc = include_str!("../../../book/src/entanglement.md")]
    mod entanglement {}
    #[doc = include_str!("../../../book/src/sweeps.md")]
    mod sweeps {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
