//! Dense Hermitian eigensolves with a fast path for real-symmetric matrices.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::algebra::Hamiltonian;
use crate::error::{KrylovError, Result};

/// Default largest Hilbert-space dimension for which full eigensolves are attempted.
pub const DENSE_EIGEN_LIMIT: usize = 4096;

pub(crate) enum EigenVectors {
    Real(DMatrix<f64>),
    Complex(DMatrix<Complex64>),
}

/// Eigenvalues and eigenvectors (as columns) of a Hamiltonian.
pub(crate) struct Eigensystem {
    pub values: Vec<f64>,
    pub vectors: EigenVectors,
}

pub(crate) fn check_limit(dim: usize, limit: usize) -> Result<()> {
    if dim > limit {
        return Err(KrylovError::DimensionLimit { dim, limit });
    }
    Ok(())
}

fn is_real(m: &DMatrix<Complex64>) -> bool {
    m.iter().all(|z| z.im == 0.0)
}

pub(crate) fn real_part(m: &DMatrix<Complex64>) -> DMatrix<f64> {
    m.map(|z| z.re)
}

impl Eigensystem {
    pub fn of(h: &Hamiltonian, limit: usize) -> Result<Self> {
        check_limit(h.dim(), limit)?;
        if h.is_real() {
            let eig = real_part(h.matrix()).symmetric_eigen();
            Ok(Self {
                values: eig.eigenvalues.iter().copied().collect(),
                vectors: EigenVectors::Real(eig.eigenvectors),
            })
        } else {
            let eig = h.matrix().clone().symmetric_eigen();
            Ok(Self {
                values: eig.eigenvalues.iter().copied().collect(),
                vectors: EigenVectors::Complex(eig.eigenvectors),
            })
        }
    }

    pub fn min_max(&self) -> (f64, f64) {
        self.values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &e| (lo.min(e), hi.max(e)))
    }

    /// Matrix elements `V^dagger O V` of an operator in the eigenbasis.
    pub fn to_eigenbasis(&self, o: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        match &self.vectors {
            EigenVectors::Real(v) => {
                let vt = v.transpose();
                if is_real(o) {
                    let re = real_part(o);
                    (&vt * (&re * v)).map(|x| Complex64::new(x, 0.0))
                } else {
                    let re = &vt * (real_part(o) * v);
                    let im = &vt * (o.map(|z| z.im) * v);
                    re.zip_map(&im, Complex64::new)
                }
            }
            EigenVectors::Complex(v) => v.adjoint() * (o * v),
        }
    }

    pub fn vectors_complex(&self) -> DMatrix<Complex64> {
        match &self.vectors {
            EigenVectors::Real(v) => v.map(|x| Complex64::new(x, 0.0)),
            EigenVectors::Complex(v) => v.clone(),
        }
    }
}

/// Eigen-decomposition of a real symmetric tridiagonal matrix given by its
/// diagonal and off-diagonal. Returns ascending eigenvalues and the matching
/// eigenvectors as columns.
pub(crate) fn tridiagonal_eigh(diag: &[f64], off: &[f64]) -> (Vec<f64>, DMatrix<f64>) {
    let n = diag.len();
    debug_assert!(off.len() + 1 == n || (n == 0 && off.is_empty()));
    let mut t = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        t[(i, i)] = diag[i];
    }
    for (i, &b) in off.iter().enumerate() {
        t[(i, i + 1)] = b;
        t[(i + 1, i)] = b;
    }
    let eig = t.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    (values, vectors)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tridiagonal_eigh_of_two_site_chain() {
        let (vals, vecs) = tridiagonal_eigh(&[0.0, 0.0], &[1.0]);
        assert!((vals[0] + 1.0).abs() < 1e-14);
        assert!((vals[1] - 1.0).abs() < 1e-14);
        assert!((vecs[(0, 1)].abs() - 0.5f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn real_and_complex_paths_agree() {
        let m = DMatrix::from_row_slice(3, 3, &[1.0, 0.5, 0.0, 0.5, -2.0, 0.25, 0.0, 0.25, 0.3]);
        let h = Hamiltonian::from_real(&m, "r").unwrap();
        let real = Eigensystem::of(&h, 16).unwrap();
        assert!(matches!(real.vectors, EigenVectors::Real(_)));
        let o = DMatrix::from_fn(3, 3, |i, j| Complex64::new((i + j) as f64, i as f64 - j as f64));
        let via_real = real.to_eigenbasis(&o);
        let v = real.vectors_complex();
        let direct = v.adjoint() * &o * &v;
        assert!((via_real - direct).iter().all(|z| z.norm() < 1e-13));
        assert!(matches!(Eigensystem::of(&h, 2), Err(KrylovError::DimensionLimit { .. })));
    }
}
