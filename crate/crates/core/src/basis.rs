//! Bases of the two-spin Hilbert space.
//!
//! Two spin-1 atoms span a nine-dimensional space. The Hamiltonian is diagonal
//! in the coupled basis `|j, m⟩` (j ∈ {0, 1, 2}), while entanglement is read off
//! in the product basis `|σ1, σ2⟩`. The two are related by Clebsch-Gordan
//! coefficients for `1 ⊗ 1 = 0 ⊕ 1 ⊕ 2`, Condon-Shortley phases.

use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Total angular momentum `j` and its projection `m` for the pair.
///
/// Ordering is lexicographic in `(j, m)`; it breaks ties between degenerate
/// levels everywhere in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoupledLabel {
    j: u8,
    m: i8,
}

impl CoupledLabel {
    /// All nine labels in ascending `(j, m)` order.
    pub const ALL: [CoupledLabel; 9] = [
        CoupledLabel { j: 0, m: 0 },
        CoupledLabel { j: 1, m: -1 },
        CoupledLabel { j: 1, m: 0 },
        CoupledLabel { j: 1, m: 1 },
        CoupledLabel { j: 2, m: -2 },
        CoupledLabel { j: 2, m: -1 },
        CoupledLabel { j: 2, m: 0 },
        CoupledLabel { j: 2, m: 1 },
        CoupledLabel { j: 2, m: 2 },
    ];

    pub fn new(j: u8, m: i8) -> Result<Self> {
        if j > 2 || m.unsigned_abs() > j {
            return Err(Error::InvalidLabel { j, m });
        }
        Ok(Self { j, m })
    }

    #[inline]
    pub fn j(self) -> u8 {
        self.j
    }

    #[inline]
    pub fn m(self) -> i8 {
        self.m
    }

    /// Position in [`CoupledLabel::ALL`].
    pub fn index(self) -> usize {
        // 0 | 1 2 3 | 4 5 6 7 8
        (self.j as usize * self.j as usize) + (self.m + self.j as i8) as usize
    }

    /// Compact form used in CSV cells, e.g. `j1m-1`.
    pub fn tag(self) -> String {
        format!("j{}m{}", self.j, self.m)
    }
}

impl fmt::Display for CoupledLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(j={}, m={})", self.j, self.m)
    }
}

/// A product state `|s1, s2⟩`, spin projections of atom 1 and atom 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ProductState {
    pub s1: i8,
    pub s2: i8,
}

const fn ps(s1: i8, s2: i8) -> ProductState {
    ProductState { s1, s2 }
}

/// The fixed product-basis ordering used for every 9×9 matrix in the crate.
/// It groups the partial transpose into blocks of constant `s1 - s2`.
pub const PRODUCT_BASIS: [ProductState; 9] =
    [ps(-1, 1), ps(1, -1), ps(-1, 0), ps(0, 1), ps(0, -1), ps(1, 0), ps(-1, -1), ps(0, 0), ps(1, 1)];

/// Position of `|s1, s2⟩` in [`PRODUCT_BASIS`].
pub fn product_index(s1: i8, s2: i8) -> usize {
    PRODUCT_BASIS
        .iter()
        .position(|p| p.s1 == s1 && p.s2 == s2)
        .unwrap_or_else(|| panic!("({s1}, {s2}) is not a spin-1 product state"))
}

fn factorial(n: i32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// `⟨j1 m1; j2 m2 | j m⟩` for integer spins (Racah's formula).
pub fn clebsch_gordan(j1: i32, m1: i32, j2: i32, m2: i32, j: i32, m: i32) -> f64 {
    if m1 + m2 != m || m1.abs() > j1 || m2.abs() > j2 || m.abs() > j {
        return 0.0;
    }
    if j < (j1 - j2).abs() || j > j1 + j2 {
        return 0.0;
    }
    let prefactor = ((2 * j + 1) as f64 * factorial(j + j1 - j2) * factorial(j - j1 + j2) * factorial(j1 + j2 - j)
        / factorial(j1 + j2 + j + 1))
    .sqrt()
        * (factorial(j + m)
            * factorial(j - m)
            * factorial(j1 - m1)
            * factorial(j1 + m1)
            * factorial(j2 - m2)
            * factorial(j2 + m2))
        .sqrt();
    let mut sum = 0.0;
    for k in 0..=(j1 + j2 + j) {
        let args = [k, j1 + j2 - j - k, j1 - m1 - k, j2 + m2 - k, j - j2 + m1 + k, j - j1 - m2 + k];
        if args.iter().any(|&a| a < 0) {
            continue;
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign / args.iter().map(|&a| factorial(a)).product::<f64>();
    }
    prefactor * sum
}

/// Orthogonal change of basis from coupled to product states: column `k`
/// holds `|j, m⟩` for `CoupledLabel::ALL[k]` expanded over [`PRODUCT_BASIS`].
pub fn clebsch_gordan_1x1() -> &'static Matrix {
    static CG: OnceLock<Matrix> = OnceLock::new();
    CG.get_or_init(|| {
        Matrix::from_fn(9, |row, col| {
            let p = PRODUCT_BASIS[row];
            let c = CoupledLabel::ALL[col];
            clebsch_gordan(1, p.s1.into(), 1, p.s2.into(), c.j.into(), c.m.into())
        })
    })
}

/// Single-site spin-1 operators in the `m = 1, 0, -1` basis.
pub(crate) mod spin1 {
    pub type Op = [[f64; 3]; 3];

    #[inline]
    pub fn slot(m: i8) -> usize {
        (1 - m) as usize
    }

    pub fn sz() -> Op {
        let mut op = [[0.0; 3]; 3];
        for m in [-1i8, 0, 1] {
            op[slot(m)][slot(m)] = m as f64;
        }
        op
    }

    /// `S+|m⟩ = sqrt(2 - m(m+1)) |m+1⟩`
    pub fn s_plus() -> Op {
        let mut op = [[0.0; 3]; 3];
        for m in [-1i8, 0] {
            op[slot(m + 1)][slot(m)] = ((2 - m * (m + 1)) as f64).sqrt();
        }
        op
    }

    pub fn s_minus() -> Op {
        let p = s_plus();
        let mut op = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                op[i][j] = p[j][i];
            }
        }
        op
    }
}

/// `A ⊗ B` in [`PRODUCT_BASIS`] ordering, `A` acting on atom 1.
pub(crate) fn kron(a: &spin1::Op, b: &spin1::Op) -> Matrix {
    Matrix::from_fn(9, |row, col| {
        let (r, c) = (PRODUCT_BASIS[row], PRODUCT_BASIS[col]);
        a[spin1::slot(r.s1)][spin1::slot(c.s1)] * b[spin1::slot(r.s2)][spin1::slot(c.s2)]
    })
}
