//! Small complex linear-algebra helpers shared by the kernel and model modules.
//!
//! All matrices here are dense `N x N` with `N <= 32`; nalgebra's complex
//! eigendecomposition and SVD are more than adequate at this scale.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Maximum entrywise deviation of `m` from its adjoint.
pub fn hermitian_asymmetry(m: &DMatrix<Complex64>) -> f64 {
    let adj = m.adjoint();
    (m - adj).iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Eigenvalues of a Hermitian matrix, ascending. The input is symmetrized
/// as `(m + m^H)/2` first so that roundoff-level asymmetry is harmless.
pub fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    let h = (m + m.adjoint()).scale(0.5);
    let mut eigs: Vec<f64> = h.symmetric_eigen().eigenvalues.iter().cloned().collect();
    eigs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    eigs
}

/// Smallest eigenvalue together with a unit eigenvector attaining it.
pub fn hermitian_min_eigenpair(m: &DMatrix<Complex64>) -> (f64, Vec<Complex64>) {
    let h = (m + m.adjoint()).scale(0.5);
    let se = h.clone().symmetric_eigen();
    let mut idx = 0;
    for (i, v) in se.eigenvalues.iter().enumerate() {
        if *v < se.eigenvalues[idx] {
            idx = i;
        }
    }
    let vec = se.eigenvectors.column(idx).iter().cloned().collect();
    (se.eigenvalues[idx], vec)
}

/// Spectral norm (largest singular value), computed as
/// `sqrt(lambda_max(A^H A))`.
pub fn spectral_norm(m: &DMatrix<Complex64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    let gram = m.adjoint() * m;
    let eigs = hermitian_eigenvalues(&gram);
    eigs.last().copied().unwrap_or(0.0).max(0.0).sqrt()
}

/// Hermitian square root and inverse square root of a positive definite
/// matrix, via the eigendecomposition. Fails with [`Error::SingularGram`]
/// when the smallest eigenvalue is not safely positive.
pub fn hermitian_sqrt_pair(m: &DMatrix<Complex64>) -> Result<(DMatrix<Complex64>, DMatrix<Complex64>)> {
    let h = (m + m.adjoint()).scale(0.5);
    let n = h.nrows();
    let se = h.symmetric_eigen();
    let max_eig = se.eigenvalues.iter().cloned().fold(0.0_f64, f64::max);
    let min_eig = se.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(min_eig > 0.0) || min_eig <= max_eig * 1e-15 {
        return Err(Error::SingularGram);
    }
    let u = &se.eigenvectors;
    let mut sqrt_d = DMatrix::zeros(n, n);
    let mut inv_sqrt_d = DMatrix::zeros(n, n);
    for i in 0..n {
        let s = se.eigenvalues[i].sqrt();
        sqrt_d[(i, i)] = Complex64::new(s, 0.0);
        inv_sqrt_d[(i, i)] = Complex64::new(1.0 / s, 0.0);
    }
    let sqrt = u * sqrt_d * u.adjoint();
    let inv_sqrt = u * inv_sqrt_d * u.adjoint();
    Ok((sqrt, inv_sqrt))
}

/// Condition estimate `lambda_max / lambda_min` of a Hermitian matrix.
/// Returns infinity when the smallest eigenvalue is not positive.
pub fn hermitian_condition(m: &DMatrix<Complex64>) -> f64 {
    let eigs = hermitian_eigenvalues(m);
    let min = eigs.first().copied().unwrap_or(0.0);
    let max = eigs.last().copied().unwrap_or(0.0);
    if min <= 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Verifies `m` is Hermitian within `tol` (absolute, on entries).
pub fn require_hermitian(m: &DMatrix<Complex64>, tol: f64) -> Result<()> {
    let asym = hermitian_asymmetry(m);
    if asym > tol {
        return Err(Error::NonHermitian { asymmetry: asym });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eig_of_pauli_like_matrix() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3.
        let m = DMatrix::from_row_slice(2, 2, &[c(2.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(2.0, 0.0)]);
        let e = hermitian_eigenvalues(&m);
        assert!((e[0] - 1.0).abs() < 1e-12);
        assert!((e[1] - 3.0).abs() < 1e-12);
        assert!((spectral_norm(&m) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn sqrt_pair_reconstructs() {
        let m = DMatrix::from_row_slice(2, 2, &[c(2.0, 0.0), c(0.5, 0.25), c(0.5, -0.25), c(1.0, 0.0)]);
        let (s, si) = hermitian_sqrt_pair(&m).unwrap();
        let err = (&s * &s - &m).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(err < 1e-12, "sqrt residual {err}");
        let id_err = (&s * &si - DMatrix::<Complex64>::identity(2, 2))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        assert!(id_err < 1e-12, "inverse residual {id_err}");
    }

    #[test]
    fn singular_matrix_rejected() {
        let m = DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)]);
        assert!(matches!(hermitian_sqrt_pair(&m), Err(Error::SingularGram)));
    }
}
