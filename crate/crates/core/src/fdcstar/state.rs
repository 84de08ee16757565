use nalgebra::DMatrix;
use num::complex::Complex64;

use super::FdError;

pub const MAX_STATE_SIZE: usize = 12;

/// An orthonormal eigenbasis of a faithful density matrix.
#[derive(Debug, Clone)]
pub struct StateDiagonalization {
    /// Eigenvalues, descending.
    pub eigenvalues: Vec<f64>,
    /// Columns are the eigenvectors, each with its first non-zero component
    /// real and positive.
    pub basis: DMatrix<Complex64>,
}

impl StateDiagonalization {
    /// `U D U*`.
    pub fn reconstruct(&self) -> DMatrix<Complex64> {
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            self.eigenvalues.len(),
            self.eigenvalues.iter().map(|&l| Complex64::new(l, 0.0)),
        ));
        &self.basis * d * self.basis.adjoint()
    }

    /// `max |φ(f) − φ(P f)|` over matrix units `f` in the new basis, where
    /// `P` keeps the diagonal: zero exactly when `φ` factors through `P`.
    pub fn off_diagonal_weight(&self, density: &DMatrix<Complex64>) -> f64 {
        let rotated = self.basis.adjoint() * density * &self.basis;
        let n = rotated.nrows();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    worst = worst.max(rotated[(i, j)].norm());
                }
            }
        }
        worst
    }

    /// Columns of the basis are orthonormal.
    pub fn unitarity_error(&self) -> f64 {
        let n = self.basis.ncols();
        (self.basis.adjoint() * &self.basis - DMatrix::<Complex64>::identity(n, n))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

/// Diagonalises the faithful state with density matrix `density` on a single
/// full matrix block.
pub fn diagonalize_state(density: &DMatrix<Complex64>) -> Result<StateDiagonalization, FdError> {
    let tol = 1e-9;
    let n = density.nrows();
    if density.ncols() != n {
        return Err(FdError::ShapeMismatch(format!(
            "{}x{} is not square",
            n,
            density.ncols()
        )));
    }
    if n == 0 || n > MAX_STATE_SIZE {
        return Err(FdError::ShapeMismatch(format!(
            "block size {n} outside 1..={MAX_STATE_SIZE}"
        )));
    }
    let asym = (density - density.adjoint())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    if asym > tol {
        return Err(FdError::NotPositiveDefinite(format!(
            "not self-adjoint (asymmetry {asym:.3e})"
        )));
    }
    let trace = density.trace();
    if (trace - Complex64::new(1.0, 0.0)).norm() > tol {
        return Err(FdError::TraceNotOne(trace.re));
    }
    let eig = density.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    if let Some(&min) = eigenvalues.last() {
        if min <= tol {
            return Err(FdError::NotPositiveDefinite(format!("eigenvalue {min:.3e}")));
        }
    }
    let mut basis = DMatrix::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        let mut v = eig.eigenvectors.column(i).into_owned();
        if let Some(first) = v.iter().find(|z| z.norm() > 1e-12).copied() {
            v *= first.conj() / first.norm();
        }
        basis.set_column(col, &v);
    }
    Ok(StateDiagonalization { eigenvalues, basis })
}
