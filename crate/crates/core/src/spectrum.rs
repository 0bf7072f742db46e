//! Energy levels, ground state and ground-state level crossings.
//!
//! Writing `S1·S2 = (J² - 4)/2`, the Hamiltonian is a polynomial in `J²` and
//! `Jz` and is therefore diagonal in the coupled basis, with
//!
//! ```text
//! E(j, m) = omega m + tau/2 (j(j+1) - 2) + gamma/4 ((j(j+1) - 4)² - 4)
//! ```
//!
//! The triplet `j = 1` sits at `{-omega, 0, omega}` whatever the couplings, the
//! quintet at `2 tau + omega m` and the singlet at `3 gamma - tau`.

pub use crate::basis::CoupledLabel;
use crate::basis::{kron, spin1};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, SymMatrix};
use crate::params::ModelParams;

/// Root tolerance of the crossing bisection, in units of `tau`.
pub const ROOT_TOLERANCE: f64 = 1e-9;

/// Number of pre-scan intervals across the requested `tau` range.
pub const PRESCAN_INTERVALS: usize = 10_000;

/// A reported crossing must close the spectral gap to within this.
pub const GAP_TOLERANCE: f64 = 1e-8;

pub fn eigenvalue(p: &ModelParams, label: CoupledLabel) -> f64 {
    let j = f64::from(label.j());
    let jj = j * (j + 1.0);
    p.omega * f64::from(label.m()) + 0.5 * p.tau * (jj - 2.0) + 0.25 * p.gamma * ((jj - 4.0) * (jj - 4.0) - 4.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Level {
    pub label: CoupledLabel,
    pub energy: f64,
}

/// The nine levels sorted by energy, ties broken by ascending `(j, m)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    levels: [Level; 9],
}

impl Spectrum {
    pub fn levels(&self) -> &[Level; 9] {
        &self.levels
    }

    pub fn ground(&self) -> Level {
        self.levels[0]
    }

    /// `E1 - E0`; zero when the ground level is degenerate.
    pub fn gap(&self) -> f64 {
        self.levels[1].energy - self.levels[0].energy
    }

    /// Labels whose energy lies within `tol` of the ground energy.
    pub fn ground_manifold(&self, tol: f64) -> Vec<CoupledLabel> {
        let e0 = self.levels[0].energy;
        self.levels.iter().take_while(|l| l.energy - e0 <= tol).map(|l| l.label).collect()
    }

    /// Energy of `label`, looked up rather than recomputed.
    pub fn energy_of(&self, label: CoupledLabel) -> f64 {
        self.levels.iter().find(|l| l.label == label).map(|l| l.energy).expect("spectrum holds every label")
    }
}

pub fn full_spectrum(p: &ModelParams) -> Spectrum {
    let mut levels = CoupledLabel::ALL.map(|label| Level { label, energy: eigenvalue(p, label) });
    levels.sort_by(|a, b| a.energy.total_cmp(&b.energy).then(a.label.cmp(&b.label)));
    Spectrum { levels }
}

pub fn ground_state_energy(p: &ModelParams) -> f64 {
    CoupledLabel::ALL.iter().map(|&l| eigenvalue(p, l)).fold(f64::INFINITY, f64::min)
}

/// `H` as an explicit 9×9 matrix in the product basis, assembled from spin-1
/// operator matrices rather than from the level formula.
pub fn hamiltonian_matrix(p: &ModelParams) -> SymMatrix {
    let (sz, sp, sm) = (spin1::sz(), spin1::s_plus(), spin1::s_minus());
    let id = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    let jz = add(&kron(&sz, &id), &kron(&id, &sz), 1.0);
    // S1·S2 = S1z S2z + (S1+ S2- + S1- S2+)/2
    let flip = add(&kron(&sp, &sm), &kron(&sm, &sp), 1.0);
    let dot = add(&kron(&sz, &sz), &flip, 0.5);
    let dot2 = dot.matmul(&dot).expect("9x9");

    let h = Matrix::from_fn(9, |i, j| {
        let id = if i == j { p.r() } else { 0.0 };
        p.omega * jz.get(i, j) + p.tau * dot.get(i, j) + p.gamma * dot2.get(i, j) + id
    });
    let h = Matrix::from_fn(9, |i, j| 0.5 * (h.get(i, j) + h.get(j, i)));
    SymMatrix::from_matrix(h).expect("Hamiltonian entries are finite for finite parameters")
}

fn add(a: &Matrix, b: &Matrix, b_scale: f64) -> Matrix {
    Matrix::from_fn(a.dim(), |i, j| a.get(i, j) + b_scale * b.get(i, j))
}

/// One ground-state level crossing along `tau`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    pub tau: f64,
    /// Ground energy at the crossing.
    pub energy: f64,
    /// Final bisection bracket around `tau`.
    pub bracket: (f64, f64),
    pub from: CoupledLabel,
    pub to: CoupledLabel,
    /// `|E(from) - E(to)|` at `tau`.
    pub residual_gap: f64,
}

/// Ground-state crossings along a `tau` range at fixed `gamma`, `omega`.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossingReport {
    pub gamma: f64,
    pub omega: f64,
    pub tau_range: (f64, f64),
    /// In increasing `tau`.
    pub crossings: Vec<Crossing>,
    /// Ground labels in the order they occur, one more than `crossings`.
    pub sequence: Vec<CoupledLabel>,
}

impl CrossingReport {
    /// First crossing (point A).
    pub fn tau_a(&self) -> Option<f64> {
        self.crossings.first().map(|c| c.tau)
    }

    /// Second crossing (point B).
    pub fn tau_b(&self) -> Option<f64> {
        self.crossings.get(1).map(|c| c.tau)
    }
}

fn ground_label_at(gamma: f64, omega: f64, tau: f64) -> CoupledLabel {
    full_spectrum(&ModelParams::new(tau, gamma, omega, f64::INFINITY)).ground().label
}

/// Locates every change of ground-state label along `tau_range`.
///
/// The range is pre-scanned on [`PRESCAN_INTERVALS`] intervals; each interval
/// whose end labels differ is bisected down to [`ROOT_TOLERANCE`]. Level
/// energies are linear in `tau`, so the root of the energy difference between
/// the two labels is then solved exactly inside the final bracket.
pub fn find_crossings(gamma: f64, omega: f64, tau_range: (f64, f64)) -> Result<CrossingReport> {
    let (start, stop) = tau_range;
    if !(start.is_finite() && stop.is_finite() && start < stop) {
        return Err(Error::InvalidRange(format!("tau range [{start}, {stop}] must be finite with start < stop")));
    }
    if !(gamma.is_finite() && omega.is_finite()) {
        return Err(Error::InvalidRange(format!("gamma={gamma}, omega={omega} must be finite")));
    }
    let label = |tau: f64| ground_label_at(gamma, omega, tau);
    let grid = |k: usize| {
        if k == PRESCAN_INTERVALS {
            stop
        } else {
            start + (stop - start) * k as f64 / PRESCAN_INTERVALS as f64
        }
    };

    let mut crossings = Vec::new();
    let mut sequence = vec![label(start)];
    for k in 0..PRESCAN_INTERVALS {
        let (mut lo, hi) = (grid(k), grid(k + 1));
        let end_label = label(hi);
        // several labels can follow one another inside one pre-scan interval
        while label(lo) != end_label {
            let c = bisect(gamma, omega, lo, hi);
            sequence.push(c.to);
            crossings.push(c);
            lo = c.bracket.1;
        }
    }

    if crossings.is_empty() {
        return Err(Error::NoCrossing { start, stop });
    }
    Ok(CrossingReport { gamma, omega, tau_range, crossings, sequence })
}

fn bisect(gamma: f64, omega: f64, mut lo: f64, mut hi: f64) -> Crossing {
    let label = |tau: f64| ground_label_at(gamma, omega, tau);
    let from = label(lo);
    while hi - lo > ROOT_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if label(mid) == from {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let to = label(hi);

    let energy = |l: CoupledLabel, tau: f64| eigenvalue(&ModelParams::new(tau, gamma, omega, f64::INFINITY), l);
    let diff = |tau: f64| energy(from, tau) - energy(to, tau);
    let (d_lo, d_hi) = (diff(lo), diff(hi));
    let mut tau = 0.5 * (lo + hi);
    if d_hi != d_lo {
        let root = lo - d_lo * (hi - lo) / (d_hi - d_lo);
        if (lo..=hi).contains(&root) {
            tau = root;
        }
    }
    Crossing {
        tau,
        energy: energy(from, tau).min(energy(to, tau)),
        bracket: (lo, hi),
        from,
        to,
        residual_gap: diff(tau).abs(),
    }
}
