//! Thermal density matrix, its partial transpose and the negativity.
//!
//! Partial transposition on atom 1 maps `rho[(a,b),(a',b')]` to
//! `sigma[(a',b),(a,b')]`. In the product ordering of [`PRODUCT_BASIS`] the
//! result splits into blocks of constant `s1 - s2`:
//!
//! ```text
//! s1 - s2 = ∓2 : R+                    (1×1, twice)
//! s1 - s2 = ∓1 : [[P-, Q-], [Q-, P+]]  (2×2, twice)
//! s1 - s2 =  0 : B = [[L-, M-, R-],
//!                     [M-, Q+, M+],
//!                     [R-, M+, L+]]    (3×3)
//! ```
//!
//! Two routes produce `sigma`. [`partial_transpose_closed_form`] fills the
//! named entries from their closed-form expressions in `beta`, `tau`, `gamma`
//! and `omega`. [`partial_transpose_numeric`] builds `rho` from
//! Clebsch-Gordan vectors and swaps indices. The second is the check on the
//! first.

use std::fmt;

pub use crate::basis::{clebsch_gordan_1x1, product_index, ProductState, PRODUCT_BASIS};
use crate::error::Result;
use crate::linalg::{sym_eigenvalues, Matrix, SymMatrix};
use crate::params::ModelParams;
use crate::thermo::{boltzmann, shifted_partition_function, ThermalEnsemble};

/// Distance from 0, 1/2 or 1 within which a negativity value is assigned to
/// that plateau.
pub const PHASE_TOLERANCE: f64 = 0.01;

/// `rho = sum_k p_k |k⟩⟨k|` in the product basis.
pub fn thermal_density_matrix(p: &ModelParams) -> Result<SymMatrix> {
    let ens = ThermalEnsemble::new(p)?;
    let mut by_label = [0.0; 9];
    for (level, pop) in ens.spectrum.levels().iter().zip(ens.populations()) {
        by_label[level.label.index()] = pop;
    }
    let diag = SymMatrix::from_matrix(Matrix::diagonal(&by_label))?;
    Ok(diag.conjugate(clebsch_gordan_1x1())?)
}

/// Partial transpose on atom 1 of any real symmetric 9×9 operator in the
/// product basis.
pub fn partial_transpose(rho: &SymMatrix) -> Result<SymMatrix> {
    let mut sigma = Matrix::zeros(9);
    for (row, r) in PRODUCT_BASIS.iter().enumerate() {
        for (col, c) in PRODUCT_BASIS.iter().enumerate() {
            let i = product_index(c.s1, r.s2);
            let j = product_index(r.s1, c.s2);
            sigma.set(i, j, rho.get(row, col));
        }
    }
    Ok(SymMatrix::from_matrix(sigma)?)
}

/// The ten distinct entries of the partial transpose.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockEntries {
    pub l_plus: f64,
    pub l_minus: f64,
    pub m_plus: f64,
    pub m_minus: f64,
    pub p_plus: f64,
    pub p_minus: f64,
    pub r_plus: f64,
    pub r_minus: f64,
    pub q_plus: f64,
    pub q_minus: f64,
}

/// Positions of the named entries (upper triangle).
mod slot {
    pub const R_PLUS: [(usize, usize); 2] = [(0, 0), (1, 1)];
    pub const P_MINUS: [(usize, usize); 2] = [(2, 2), (4, 4)];
    pub const P_PLUS: [(usize, usize); 2] = [(3, 3), (5, 5)];
    pub const Q_MINUS: [(usize, usize); 2] = [(2, 3), (4, 5)];
    pub const L_MINUS: (usize, usize) = (6, 6);
    pub const Q_PLUS: (usize, usize) = (7, 7);
    pub const L_PLUS: (usize, usize) = (8, 8);
    pub const M_MINUS: (usize, usize) = (6, 7);
    pub const M_PLUS: (usize, usize) = (7, 8);
    pub const R_MINUS: (usize, usize) = (6, 8);
}

/// 9×9 partial transpose of the thermal state in [`PRODUCT_BASIS`].
#[derive(Debug, Clone, PartialEq)]
pub struct PartialTransposeMatrix {
    matrix: SymMatrix,
}

impl PartialTransposeMatrix {
    pub fn from_entries(e: &BlockEntries) -> Self {
        let mut m = Matrix::zeros(9);
        let mut put = |(i, j): (usize, usize), v: f64| {
            m.set(i, j, v);
            m.set(j, i, v);
        };
        for s in slot::R_PLUS {
            put(s, e.r_plus);
        }
        for s in slot::P_MINUS {
            put(s, e.p_minus);
        }
        for s in slot::P_PLUS {
            put(s, e.p_plus);
        }
        for s in slot::Q_MINUS {
            put(s, e.q_minus);
        }
        put(slot::L_MINUS, e.l_minus);
        put(slot::Q_PLUS, e.q_plus);
        put(slot::L_PLUS, e.l_plus);
        put(slot::M_MINUS, e.m_minus);
        put(slot::M_PLUS, e.m_plus);
        put(slot::R_MINUS, e.r_minus);
        Self { matrix: SymMatrix::from_matrix(m).expect("entries are finite") }
    }

    pub fn from_matrix(matrix: SymMatrix) -> Self {
        Self { matrix }
    }

    pub fn matrix(&self) -> &SymMatrix {
        &self.matrix
    }

    /// Reads the named entries back. Only the first copy of a repeated entry
    /// is read; [`Self::structure_defect`] measures the rest.
    pub fn entries(&self) -> BlockEntries {
        let g = |(i, j): (usize, usize)| self.matrix.get(i, j);
        BlockEntries {
            l_plus: g(slot::L_PLUS),
            l_minus: g(slot::L_MINUS),
            m_plus: g(slot::M_PLUS),
            m_minus: g(slot::M_MINUS),
            p_plus: g(slot::P_PLUS[0]),
            p_minus: g(slot::P_MINUS[0]),
            r_plus: g(slot::R_PLUS[0]),
            r_minus: g(slot::R_MINUS),
            q_plus: g(slot::Q_PLUS),
            q_minus: g(slot::Q_MINUS[0]),
        }
    }

    /// Largest deviation from the block pattern implied by [`Self::entries`].
    pub fn structure_defect(&self) -> f64 {
        Self::from_entries(&self.entries()).matrix.as_matrix().max_abs_diff(self.matrix.as_matrix())
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace()
    }

    /// The 3×3 block of constant `s1 = s2`.
    pub fn b_block(&self) -> SymMatrix {
        SymMatrix::from_upper(3, |i, j| self.matrix.get(6 + i, 6 + j)).expect("3x3 block")
    }

    /// Eigenvalues assembled block by block: `R+` twice, the 2×2 pair twice in
    /// closed form, and the three eigenvalues of `B`.
    pub fn assembled_eigenvalues(&self) -> Result<[f64; 9]> {
        let e = self.entries();
        let (sum, diff) = (e.p_plus + e.p_minus, e.p_plus - e.p_minus);
        let root = (diff * diff + 4.0 * e.q_minus * e.q_minus).sqrt();
        let lower = 0.5 * (sum - root);
        let upper = 0.5 * (sum + root);
        let b = sym_eigenvalues(&self.b_block())?;
        Ok([e.r_plus, e.r_plus, lower, upper, lower, upper, b[0], b[1], b[2]])
    }
}

/// Closed-form entries of the partial transpose.
///
/// ```text
/// L± = e^{-2 beta (tau ± omega)} / Z
/// M± = -e^{-beta (tau ± omega)} sinh(beta tau) / Z
/// P± =  e^{-beta (tau ± omega)} cosh(beta tau) / Z
/// R± = e^{-beta tau} (e^{-beta tau} ± 3 e^{beta tau} + 2 e^{-beta (3 gamma - 2 tau)}) / 6Z
/// Q± = e^{-beta tau} ((3 ± 1)/2 e^{-beta tau} ± e^{-beta (3 gamma - 2 tau)}) / 3Z
/// ```
///
/// Each hyperbolic function is split into its two exponentials and every
/// exponent is taken relative to the ground energy, which keeps all factors
/// at or below one.
pub fn partial_transpose_closed_form(p: &ModelParams) -> Result<PartialTransposeMatrix> {
    let beta = p.beta()?;
    let (tau, gamma, omega) = (p.tau, p.gamma, p.omega);
    let shift = crate::spectrum::ground_state_energy(p);
    let z = shifted_partition_function(p, shift)?;
    // e^{-beta x} / Z
    let ex = |x: f64| boltzmann(beta, x - shift) / z;

    let l = |pm: f64| ex(2.0 * (tau + pm * omega));
    // e^{-beta(tau ± omega)} {sinh, cosh}(beta tau) = (e^{-beta(± omega)} ∓ e^{-beta(2 tau ± omega)}) / 2
    let m = |pm: f64| -0.5 * (ex(tau + pm * omega - tau) - ex(tau + pm * omega + tau));
    let pp = |pm: f64| 0.5 * (ex(tau + pm * omega - tau) + ex(tau + pm * omega + tau));
    // e^{-beta tau} e^{±beta tau} and e^{-beta tau} e^{-beta(3 gamma - 2 tau)}
    let r = |pm: f64| (ex(2.0 * tau) + pm * 3.0 * ex(0.0) + 2.0 * ex(3.0 * gamma - tau)) / 6.0;
    let q = |pm: f64| ((3.0 + pm) / 2.0 * ex(2.0 * tau) + pm * ex(3.0 * gamma - tau)) / 3.0;

    Ok(PartialTransposeMatrix::from_entries(&BlockEntries {
        l_plus: l(1.0),
        l_minus: l(-1.0),
        m_plus: m(1.0),
        m_minus: m(-1.0),
        p_plus: pp(1.0),
        p_minus: pp(-1.0),
        r_plus: r(1.0),
        r_minus: r(-1.0),
        q_plus: q(1.0),
        q_minus: q(-1.0),
    }))
}

/// Partial transpose of [`thermal_density_matrix`] by index swapping.
pub fn partial_transpose_numeric(p: &ModelParams) -> Result<PartialTransposeMatrix> {
    let rho = thermal_density_matrix(p)?;
    Ok(PartialTransposeMatrix::from_matrix(partial_transpose(&rho)?))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NegativityResult {
    /// Ascending.
    pub eigenvalues: [f64; 9],
    pub negativity: f64,
}

impl NegativityResult {
    pub fn from_eigenvalues(mut eigenvalues: [f64; 9]) -> Self {
        eigenvalues.sort_by(f64::total_cmp);
        let sum_abs: f64 = eigenvalues.iter().map(|l| l.abs()).sum();
        // round-off can leave a PPT state a few ulps below zero
        let negativity = (0.5 * (sum_abs - 1.0)).max(0.0);
        Self { eigenvalues, negativity }
    }

    pub fn phase(&self) -> Phase {
        Phase::classify(self.negativity)
    }
}

/// `N = (sum |lambda_i| - 1) / 2` from the closed-form partial transpose.
pub fn negativity(p: &ModelParams) -> Result<NegativityResult> {
    let sigma = partial_transpose_closed_form(p)?;
    Ok(NegativityResult::from_eigenvalues(sigma.assembled_eigenvalues()?))
}

/// Negativity of an arbitrary partial transpose via the general eigensolver.
pub fn negativity_of(sigma: &SymMatrix) -> Result<NegativityResult> {
    let values = sym_eigenvalues(sigma)?;
    let mut eigenvalues = [0.0; 9];
    eigenvalues.copy_from_slice(&values);
    Ok(NegativityResult::from_eigenvalues(eigenvalues))
}

/// Negativity plateau a value belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    /// `N ≈ 0`, factorised ground state.
    N0,
    /// `N ≈ 1/2`, ground state `|j=1, m=-1⟩` (or `+1`).
    NHalf,
    /// `N ≈ 1`, singlet ground state.
    N1,
    Crossover,
}

impl Phase {
    pub fn classify(negativity: f64) -> Self {
        if (negativity - 0.0).abs() <= PHASE_TOLERANCE {
            Phase::N0
        } else if (negativity - 0.5).abs() <= PHASE_TOLERANCE {
            Phase::NHalf
        } else if (negativity - 1.0).abs() <= PHASE_TOLERANCE {
            Phase::N1
        } else {
            Phase::Crossover
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Phase::N0 => "N0",
            Phase::NHalf => "N_HALF",
            Phase::N1 => "N1",
            Phase::Crossover => "CROSSOVER",
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}
