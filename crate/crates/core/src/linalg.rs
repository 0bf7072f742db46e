//! Small dense real matrices.
//!
//! Everything in this crate lives in a nine-dimensional Hilbert space and every
//! operator of interest (the Hamiltonian, the thermal state, its partial
//! transpose and the 3×3 block of the latter) is real symmetric in the bases
//! used, so a cyclic Jacobi eigensolver is all that is needed.

use std::fmt;

use thiserror::Error;

/// Largest dimension accepted by [`SymMatrix`].
pub const MAX_DIM: usize = 9;

/// Absolute tolerance on `|a[i][j] - a[j][i]|` for input to the eigensolver.
pub const SYMMETRY_TOLERANCE: f64 = 1e-13;

/// Jacobi stops once the off-diagonal Frobenius norm drops below this
/// fraction of the full Frobenius norm.
pub const JACOBI_TOLERANCE: f64 = 1e-14;

pub const JACOBI_MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not symmetric: |a[{row}][{col}] - a[{col}][{row}]| = {deviation:e}")]
    Asymmetric { row: usize, col: usize, deviation: f64 },

    #[error("matrix has a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("Jacobi iteration did not converge after {0} sweeps")]
    NoConvergence(usize),
}

/// Dense square matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(n: usize, data: Vec<f64>) -> Result<Self, LinalgError> {
        if data.len() != n * n {
            return Err(LinalgError::Dimension(format!(
                "expected {} entries for a {n}x{n} matrix, got {}",
                n * n,
                data.len()
            )));
        }
        Ok(Self { n, data })
    }

    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    pub fn diagonal(values: &[f64]) -> Self {
        Self::from_fn(values.len(), |i, j| if i == j { values[i] } else { 0.0 })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.n + j] = value;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i))
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Self, LinalgError> {
        if self.n != other.n {
            return Err(LinalgError::Dimension(format!("cannot multiply {0}x{0} by {1}x{1}", self.n, other.n)));
        }
        let n = self.n;
        Ok(Self::from_fn(n, |i, j| (0..n).map(|k| self.get(i, k) * other.get(k, j)).sum()))
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, x| acc.max(x.abs()))
    }

    /// Largest entrywise absolute difference; `INFINITY` on dimension mismatch.
    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        if self.n != other.n {
            return f64::INFINITY;
        }
        self.data.iter().zip(&other.data).fold(0.0, |acc, (a, b)| acc.max((a - b).abs()))
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.n, self.n)?;
        for i in 0..self.n {
            write!(f, "  ")?;
            for j in 0..self.n {
                write!(f, "{:>12.5e} ", self.get(i, j))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Real symmetric matrix of dimension at most [`MAX_DIM`].
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix(Matrix);

impl SymMatrix {
    /// Validates dimension, finiteness and symmetry (within
    /// [`SYMMETRY_TOLERANCE`]).
    pub fn new(n: usize, data: Vec<f64>) -> Result<Self, LinalgError> {
        Self::from_matrix(Matrix::new(n, data)?)
    }

    pub fn from_matrix(m: Matrix) -> Result<Self, LinalgError> {
        let n = m.dim();
        if n == 0 || n > MAX_DIM {
            return Err(LinalgError::Dimension(format!("symmetric matrices must have 1 <= n <= {MAX_DIM}, got {n}")));
        }
        for i in 0..n {
            for j in 0..n {
                if !m.get(i, j).is_finite() {
                    return Err(LinalgError::NonFinite { row: i, col: j });
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let deviation = (m.get(i, j) - m.get(j, i)).abs();
                if deviation > SYMMETRY_TOLERANCE {
                    return Err(LinalgError::Asymmetric { row: i, col: j, deviation });
                }
            }
        }
        Ok(Self(m))
    }

    /// Builds from the upper triangle of `f`; the lower triangle is mirrored.
    pub fn from_upper(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self, LinalgError> {
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                m.set(i, j, v);
                m.set(j, i, v);
            }
        }
        Self::from_matrix(m)
    }

    pub fn identity(n: usize) -> Result<Self, LinalgError> {
        Self::from_matrix(Matrix::identity(n))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0.get(i, j)
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    pub fn trace(&self) -> f64 {
        self.0.trace()
    }

    /// `O M Oᵀ` for a square `O` of matching dimension.
    pub fn conjugate(&self, o: &Matrix) -> Result<Self, LinalgError> {
        let m = o.matmul(&self.0)?.matmul(&o.transpose())?;
        Self::from_matrix(symmetrized(&m))
    }
}

fn symmetrized(m: &Matrix) -> Matrix {
    Matrix::from_fn(m.dim(), |i, j| 0.5 * (m.get(i, j) + m.get(j, i)))
}

/// Eigen-decomposition `M = Q Λ Qᵀ` with eigenvalues ascending and the
/// matching eigenvectors stored as the columns of `vectors`.
#[derive(Debug, Clone)]
pub struct SymEigen {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

impl SymEigen {
    pub fn reconstruct(&self) -> Matrix {
        let n = self.values.len();
        Matrix::from_fn(n, |i, j| {
            (0..n).map(|k| self.vectors.get(i, k) * self.values[k] * self.vectors.get(j, k)).sum()
        })
    }
}

/// Cyclic Jacobi eigen-decomposition of a real symmetric matrix.
pub fn sym_eigen(m: &SymMatrix) -> Result<SymEigen, LinalgError> {
    let n = m.dim();
    let mut a = m.as_matrix().clone();
    let mut v = Matrix::identity(n);
    let scale = a.frobenius_norm();

    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&a) <= JACOBI_TOLERANCE * scale {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged && off_diagonal_norm(&a) > JACOBI_TOLERANCE * scale {
        return Err(LinalgError::NoConvergence(JACOBI_MAX_SWEEPS));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a.get(i, i).total_cmp(&a.get(j, j)));
    let values = order.iter().map(|&i| a.get(i, i)).collect();
    let vectors = Matrix::from_fn(n, |row, col| v.get(row, order[col]));
    Ok(SymEigen { values, vectors })
}

/// Eigenvalues in ascending order.
pub fn sym_eigenvalues(m: &SymMatrix) -> Result<Vec<f64>, LinalgError> {
    sym_eigen(m).map(|e| e.values)
}

fn off_diagonal_norm(a: &Matrix) -> f64 {
    let n = a.dim();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a.get(i, j) * a.get(i, j);
            }
        }
    }
    sum.sqrt()
}

/// One Jacobi rotation annihilating `a[p][q]`, accumulated into `v`.
fn rotate(a: &mut Matrix, v: &mut Matrix, p: usize, q: usize) {
    let apq = a.get(p, q);
    if apq == 0.0 {
        return;
    }
    let theta = (a.get(q, q) - a.get(p, p)) / (2.0 * apq);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
        sign / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let n = a.dim();
    for k in 0..n {
        let (akp, akq) = (a.get(k, p), a.get(k, q));
        a.set(k, p, c * akp - s * akq);
        a.set(k, q, s * akp + c * akq);
    }
    for k in 0..n {
        let (apk, aqk) = (a.get(p, k), a.get(q, k));
        a.set(p, k, c * apk - s * aqk);
        a.set(q, k, s * apk + c * aqk);
    }
    a.set(p, q, 0.0);
    a.set(q, p, 0.0);
    for k in 0..n {
        let (vkp, vkq) = (v.get(k, p), v.get(k, q));
        v.set(k, p, c * vkp - s * vkq);
        v.set(k, q, s * vkp + c * vkq);
    }
}

/// `exp(scale * M)` through the eigen-decomposition of `M`.
pub fn sym_expm(m: &SymMatrix, scale: f64) -> Result<SymMatrix, LinalgError> {
    let eig = sym_eigen(m)?;
    let exps: Vec<f64> = eig.values.iter().map(|&l| (scale * l).exp()).collect();
    let e = SymEigen { values: exps, vectors: eig.vectors };
    SymMatrix::from_matrix(symmetrized(&e.reconstruct()))
}

/// Central difference `(f(x + h) - f(x - h)) / 2h`.
pub fn central_diff(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    assert!(h > 0.0, "central_diff step must be positive, got {h}");
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// [`central_diff`] for fallible functions; the first error wins.
pub fn try_central_diff<E>(f: impl Fn(f64) -> Result<f64, E>, x: f64, h: f64) -> Result<f64, E> {
    assert!(h > 0.0, "central_diff step must be positive, got {h}");
    Ok((f(x + h)? - f(x - h)?) / (2.0 * h))
}
