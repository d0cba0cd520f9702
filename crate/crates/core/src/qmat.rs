//! Dense complex matrices for two- and four-qubit density operators.
//!
//! Qubits are ordered A, B, C, D with A the most significant bit of the
//! basis index: `|a b c d>` sits at index `8a + 4b + 2c + d`. Two-qubit
//! operators use the same convention, so `|ij>` sits at `2i + j`.

use nalgebra::{DMatrix, Matrix2, Matrix3};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Default numerical tolerances.
pub mod tol {
    /// Largest accepted `|M_ij - conj(M_ji)|`.
    pub const HERMITIAN: f64 = 1e-10;
    /// Largest accepted `|tr M - 1|`.
    pub const TRACE: f64 = 1e-10;
    /// Most negative accepted eigenvalue.
    pub const PSD: f64 = 1e-9;
    /// Outcome probabilities at or below this are treated as zero.
    pub const PROB: f64 = 1e-12;
}

const MAX_DIM: usize = 16;

pub(crate) fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// A square complex matrix representing a (possibly unnormalized) state on
/// one to four qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    data: DMatrix<Complex64>,
    normalized: bool,
}

impl DensityMatrix {
    /// Wraps a matrix expected to have unit trace.
    pub fn new(data: DMatrix<Complex64>) -> Result<Self> {
        check_shape(&data)?;
        Ok(Self { data, normalized: true })
    }

    /// Wraps a raw operator whose trace is not expected to be one, such as
    /// a projected state before renormalization.
    pub fn unnormalized(data: DMatrix<Complex64>) -> Result<Self> {
        check_shape(&data)?;
        Ok(Self { data, normalized: false })
    }

    pub fn from_real(dim: usize, entries: &[f64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::WrongDimension { expected: dim, found: (entries.len() as f64).sqrt() as usize });
        }
        Self::new(DMatrix::from_row_iterator(dim, dim, entries.iter().map(|&x| c(x))))
    }

    /// `I/dim`.
    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        Self::new(DMatrix::identity(dim, dim).map(|x: Complex64| x / dim as f64))
    }

    /// `|psi><psi|` for a normalized ket.
    pub fn pure(ket: &[Complex64]) -> Result<Self> {
        let n = ket.len();
        let data = DMatrix::from_fn(n, n, |i, j| ket[i] * ket[j].conj());
        Self::new(data)
    }

    /// Projector onto the computational basis state with the given index.
    pub fn basis_projector(dim: usize, index: usize) -> Result<Self> {
        let mut data = DMatrix::zeros(dim, dim);
        if index >= dim {
            return Err(Error::WrongDimension { expected: dim, found: index });
        }
        data[(index, index)] = c(1.0);
        Self::new(data)
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.data[(i, j)]
    }

    pub fn as_matrix(&self) -> &DMatrix<Complex64> {
        &self.data
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.data
    }

    pub fn trace(&self) -> Complex64 {
        self.data.trace()
    }

    /// Divides by the (real part of the) trace and marks the result normalized.
    pub fn normalize(&self) -> Result<Self> {
        let t = self.trace().re;
        if t.abs() <= tol::PROB {
            return Err(Error::ZeroProbability { prob: t });
        }
        Ok(Self { data: self.data.map(|x| x / t), normalized: true })
    }

    /// Largest `|M_ij - conj(M_ji)|`.
    pub fn hermiticity_residual(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.data[(i, j)] - self.data[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Largest modulus of any entry off the diagonal and anti-diagonal.
    pub fn off_x_pattern(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                if i != j && i + j != n - 1 {
                    worst = worst.max(self.data[(i, j)].norm());
                }
            }
        }
        worst
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Applies `U rho U^dagger`.
    pub fn conjugate_by(&self, u: &DMatrix<Complex64>) -> Result<Self> {
        if u.nrows() != self.dim() || u.ncols() != self.dim() {
            return Err(Error::WrongDimension { expected: self.dim(), found: u.nrows() });
        }
        Ok(Self { data: u * &self.data * u.adjoint(), normalized: self.normalized })
    }

    /// Expectation `<v|rho|v>` (real part).
    pub fn expectation(&self, v: &[Complex64]) -> f64 {
        let n = self.dim();
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..n {
            if v[i] == Complex64::new(0.0, 0.0) {
                continue;
            }
            let mut row = Complex64::new(0.0, 0.0);
            for j in 0..n {
                row += self.data[(i, j)] * v[j];
            }
            acc += v[i].conj() * row;
        }
        acc.re
    }
}

fn check_shape(m: &DMatrix<Complex64>) -> Result<()> {
    let (rows, cols) = m.shape();
    if rows != cols {
        return Err(Error::NotSquare { rows, cols });
    }
    if !rows.is_power_of_two() || !(2..=MAX_DIM).contains(&rows) {
        return Err(Error::UnsupportedDimension(rows));
    }
    Ok(())
}

/// Tensor product `A ⊗ B`.
pub fn kron(a: &DensityMatrix, b: &DensityMatrix) -> Result<DensityMatrix> {
    let (da, db) = (a.dim(), b.dim());
    let dim = da * db;
    if dim > MAX_DIM {
        return Err(Error::DimensionOverflow(dim));
    }
    let data = DMatrix::from_fn(dim, dim, |r, s| a.data[(r / db, s / db)] * b.data[(r % db, s % db)]);
    Ok(DensityMatrix { data, normalized: a.normalized && b.normalized })
}

/// Traces out qubits B and C of a four-qubit operator, leaving the A–D pair.
pub fn partial_trace_bc(rho: &DensityMatrix) -> Result<DensityMatrix> {
    if rho.dim() != 16 {
        return Err(Error::WrongDimension { expected: 16, found: rho.dim() });
    }
    let idx = |a: usize, bc: usize, d: usize| 8 * a + 2 * bc + d;
    let data = DMatrix::from_fn(4, 4, |r, s| {
        let (a1, d1) = (r / 2, r % 2);
        let (a2, d2) = (s / 2, s % 2);
        (0..4).map(|bc| rho.data[(idx(a1, bc, d1), idx(a2, bc, d2))]).sum()
    });
    Ok(DensityMatrix { data, normalized: rho.normalized })
}

/// Real spectrum of a Hermitian matrix, in descending order.
pub fn hermitian_eigenvalues(m: &DensityMatrix) -> Result<Vec<f64>> {
    let residual = m.hermiticity_residual();
    if residual > tol::HERMITIAN {
        return Err(Error::NotHermitian { residual });
    }
    Ok(symmetrized_spectrum(&m.data))
}

fn symmetrize(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    (m + m.adjoint()).map(|x| x * 0.5)
}

fn symmetrized_spectrum(m: &DMatrix<Complex64>) -> Vec<f64> {
    let mut ev: Vec<f64> = symmetrize(m).symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    ev
}

/// Principal square root of a positive semidefinite Hermitian matrix.
/// Eigenvalues above `-tol::PSD` are clipped at zero.
pub fn psd_sqrt(m: &DensityMatrix) -> Result<DMatrix<Complex64>> {
    let residual = m.hermiticity_residual();
    if residual > tol::HERMITIAN {
        return Err(Error::NotHermitian { residual });
    }
    let eig = symmetrize(&m.data).symmetric_eigen();
    let min = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    if min < -tol::PSD {
        return Err(Error::NotPositive { min_eigenvalue: min });
    }
    let roots = eig.eigenvalues.map(|x| c(x.max(0.0).sqrt()));
    let v = &eig.eigenvectors;
    Ok(v * DMatrix::from_diagonal(&roots) * v.adjoint())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ValidityReport {
    pub hermiticity_residual: f64,
    pub trace_deviation: f64,
    pub min_eigenvalue: f64,
    pub tol: f64,
    pub passed: bool,
}

/// Checks Hermiticity, unit trace and positivity against a single tolerance.
/// Operators flagged unnormalized skip the trace check.
pub fn validate_density(m: &DensityMatrix, tol: f64) -> ValidityReport {
    let hermiticity_residual = m.hermiticity_residual();
    let trace_deviation = if m.normalized { (m.trace() - c(1.0)).norm() } else { 0.0 };
    let min_eigenvalue = symmetrized_spectrum(&m.data).last().copied().unwrap_or(0.0);
    let passed = hermiticity_residual <= tol && trace_deviation <= tol && min_eigenvalue >= -tol;
    ValidityReport { hermiticity_residual, trace_deviation, min_eigenvalue, tol, passed }
}

/// Pauli matrix `sigma_i`, with `sigma_0` the identity.
pub fn pauli(i: usize) -> Matrix2<Complex64> {
    let z = c(0.0);
    let o = c(1.0);
    let im = Complex64::new(0.0, 1.0);
    match i {
        0 => Matrix2::new(o, z, z, o),
        1 => Matrix2::new(z, o, o, z),
        2 => Matrix2::new(z, -im, im, z),
        3 => Matrix2::new(o, z, z, -o),
        _ => panic!("Pauli index {i} out of range"),
    }
}

/// `sigma_i ⊗ sigma_j` as a 4x4 matrix.
pub fn pauli_pair(i: usize, j: usize) -> DMatrix<Complex64> {
    let (p, q) = (pauli(i), pauli(j));
    DMatrix::from_fn(4, 4, |r, s| p[(r / 2, s / 2)] * q[(r % 2, s % 2)])
}

/// Fano coefficients `F_ij = Tr[(sigma_i ⊗ sigma_j) rho]` of a two-qubit
/// operator, `i, j` in `0..4`.
pub fn fano_coefficients(rho: &DensityMatrix) -> Result<[[f64; 4]; 4]> {
    if rho.dim() != 4 {
        return Err(Error::WrongDimension { expected: 4, found: rho.dim() });
    }
    let mut out = [[0.0; 4]; 4];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = (pauli_pair(i, j) * &rho.data).trace().re;
        }
    }
    Ok(out)
}

/// Local Bloch vectors and the 3x3 correlation matrix of a normalized
/// two-qubit state.
pub fn bloch_decomposition(rho: &DensityMatrix) -> Result<([f64; 3], [f64; 3], Matrix3<f64>)> {
    let f = fano_coefficients(rho)?;
    let a = [f[1][0], f[2][0], f[3][0]];
    let b = [f[0][1], f[0][2], f[0][3]];
    let t = Matrix3::from_fn(|i, j| f[i + 1][j + 1]);
    Ok((a, b, t))
}

/// `U_A ⊗ U_B` for single-qubit unitaries.
pub fn local_unitary(ua: &Matrix2<Complex64>, ub: &Matrix2<Complex64>) -> DMatrix<Complex64> {
    DMatrix::from_fn(4, 4, |r, s| ua[(r / 2, s / 2)] * ub[(r % 2, s % 2)])
}
