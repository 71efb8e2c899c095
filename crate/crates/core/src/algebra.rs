//! Operator-space arithmetic at infinite temperature.
//!
//! Operators on an `N`-dimensional Hilbert space are treated as vectors of the
//! `N^2`-dimensional operator space with the inner product
//! `(A|B) = Tr[A^dagger B] / N`. The Liouvillian `L = i[H, .]` and its
//! Hermitian variant `L~ = [H, .]` act on these vectors.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{KrylovError, Result};

/// Absolute tolerance on `max |O - O^dagger|` for an operator to count as Hermitian.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Squared norms at or below this are treated as the zero operator.
pub const NULL_NORM_SQ: f64 = 1e-28;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HilbertSpace {
    dim: usize,
}

impl HilbertSpace {
    pub fn new(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(KrylovError::InvalidParameter(format!(
                "Hilbert-space dimension must be at least 2, got {dim}"
            )));
        }
        Ok(Self { dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Upper bound `N^2 - N + 1` on the dimension of any operator Krylov space.
    pub fn krylov_bound(&self) -> usize {
        self.dim * self.dim - self.dim + 1
    }
}

/// An element of the operator space, carrying whether it is known to be Hermitian.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorState {
    matrix: DMatrix<Complex64>,
    hermitian: bool,
    space: HilbertSpace,
}

impl OperatorState {
    /// Wraps a square matrix; the Hermitian flag is set when the matrix passes
    /// the [`HERMITICITY_TOL`] check.
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(KrylovError::DimensionMismatch {
                left: matrix.nrows(),
                right: matrix.ncols(),
            });
        }
        let space = HilbertSpace::new(matrix.nrows())?;
        let hermitian = hermiticity_deviation(&matrix) <= HERMITICITY_TOL;
        Ok(Self { matrix, hermitian, space })
    }

    pub fn from_real(matrix: &DMatrix<f64>) -> Result<Self> {
        Self::new(matrix.map(|x| Complex64::new(x, 0.0)))
    }

    pub(crate) fn with_flag(matrix: DMatrix<Complex64>, hermitian: bool) -> Self {
        let space = HilbertSpace { dim: matrix.nrows() };
        Self { matrix, hermitian, space }
    }

    pub fn zeros(space: HilbertSpace) -> Self {
        Self::with_flag(DMatrix::zeros(space.dim, space.dim), true)
    }

    pub fn identity(space: HilbertSpace) -> Self {
        Self::with_flag(DMatrix::identity(space.dim, space.dim), true)
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.matrix
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn space(&self) -> HilbertSpace {
        self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim
    }

    /// `max_ij |O_ij - conj(O_ji)|`.
    pub fn hermiticity_deviation(&self) -> f64 {
        hermiticity_deviation(&self.matrix)
    }

    pub fn norm(&self) -> f64 {
        inner_unchecked(self, self).re.max(0.0).sqrt()
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        let hermitian = self.hermitian && factor.im == 0.0;
        Self::with_flag(self.matrix.map(|z| z * factor), hermitian)
    }

    /// Largest entrywise distance to another operator.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.matrix
            .iter()
            .zip(other.matrix.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub(crate) fn as_slice(&self) -> &[Complex64] {
        self.matrix.as_slice()
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [Complex64] {
        self.matrix.as_mut_slice()
    }

    pub(crate) fn set_hermitian_flag(&mut self, flag: bool) {
        self.hermitian = flag;
    }
}

/// A Hermitian Hamiltonian matrix with a model descriptor.
#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian {
    matrix: DMatrix<Complex64>,
    label: String,
}

impl Hamiltonian {
    pub fn new(matrix: DMatrix<Complex64>, label: impl Into<String>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(KrylovError::DimensionMismatch {
                left: matrix.nrows(),
                right: matrix.ncols(),
            });
        }
        HilbertSpace::new(matrix.nrows())?;
        let deviation = hermiticity_deviation(&matrix);
        if deviation > HERMITICITY_TOL {
            return Err(KrylovError::NotHermitian { deviation });
        }
        Ok(Self { matrix, label: label.into() })
    }

    pub fn from_real(matrix: &DMatrix<f64>, label: impl Into<String>) -> Result<Self> {
        Self::new(matrix.map(|x| Complex64::new(x, 0.0)), label)
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn space(&self) -> HilbertSpace {
        HilbertSpace { dim: self.matrix.nrows() }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// True when every entry has an exactly zero imaginary part.
    pub fn is_real(&self) -> bool {
        self.matrix.iter().all(|z| z.im == 0.0)
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        hermiticity_deviation(&self.matrix)
    }
}

pub fn hermiticity_deviation(m: &DMatrix<Complex64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for j in 0..n {
        for i in 0..=j {
            let d = (m[(i, j)] - m[(j, i)].conj()).norm();
            worst = worst.max(d);
        }
    }
    worst
}

fn check_same_space(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(KrylovError::DimensionMismatch { left: a, right: b });
    }
    Ok(())
}

/// `(A|B) = Tr[A^dagger B] / N`.
pub fn inner_product(a: &OperatorState, b: &OperatorState) -> Result<Complex64> {
    check_same_space(a.dim(), b.dim())?;
    Ok(inner_unchecked(a, b))
}

pub(crate) fn inner_unchecked(a: &OperatorState, b: &OperatorState) -> Complex64 {
    // Tr[A^dagger B] = sum_ij conj(A_ij) B_ij
    let sum: Complex64 = a
        .as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(x, y)| x.conj() * y)
        .sum();
    sum / a.dim() as f64
}

fn commutator(h: &Hamiltonian, o: &OperatorState) -> DMatrix<Complex64> {
    h.matrix() * o.matrix() - o.matrix() * h.matrix()
}

/// `L O = i[H, O]`. Hermitian input gives Hermitian output.
pub fn apply_liouvillian(h: &Hamiltonian, o: &OperatorState) -> Result<OperatorState> {
    check_same_space(h.dim(), o.dim())?;
    let c = commutator(h, o);
    Ok(OperatorState::with_flag(c.map(|z| I * z), o.is_hermitian()))
}

/// `L~ O = [H, O]`. Maps Hermitian operators to anti-Hermitian ones and back.
pub fn apply_liouvillian_tilde(h: &Hamiltonian, o: &OperatorState) -> Result<OperatorState> {
    check_same_space(h.dim(), o.dim())?;
    Ok(OperatorState::with_flag(commutator(h, o), false))
}

/// Hermitian part `(O + O^dagger) / 2`.
pub fn hermitize(o: &OperatorState) -> OperatorState {
    let m = o.matrix();
    let n = m.nrows();
    let mut out = DMatrix::<Complex64>::zeros(n, n);
    for j in 0..n {
        for i in 0..n {
            out[(i, j)] = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
        }
    }
    OperatorState::with_flag(out, true)
}

/// Rescales to unit norm under the infinite-temperature inner product.
pub fn normalize(o: &OperatorState) -> Result<OperatorState> {
    let norm_sq = inner_unchecked(o, o).re;
    if norm_sq <= NULL_NORM_SQ {
        return Err(KrylovError::NullOperator { norm_sq });
    }
    let mut out = o.clone();
    let inv = 1.0 / norm_sq.sqrt();
    for z in out.as_mut_slice() {
        *z *= inv;
    }
    Ok(out)
}

/// Single-qubit matrices in the computational basis `(|0>, |1>)`.
pub mod pauli {
    use nalgebra::DMatrix;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    pub fn identity() -> DMatrix<Complex64> {
        DMatrix::identity(2, 2)
    }

    pub fn x() -> DMatrix<Complex64> {
        DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)])
    }

    pub fn y() -> DMatrix<Complex64> {
        DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)])
    }

    pub fn z() -> DMatrix<Complex64> {
        DMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)])
    }

    /// Projector `|1><1|` onto the "up" state.
    pub fn up_projector() -> DMatrix<Complex64> {
        DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., 0.), c(0., 0.), c(1., 0.)])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    fn op(m: DMatrix<Complex64>) -> OperatorState {
        OperatorState::new(m).unwrap()
    }

    fn sigma_z_hamiltonian() -> Hamiltonian {
        Hamiltonian::new(pauli::z(), "sz").unwrap()
    }

    #[test]
    fn pauli_inner_products() {
        let x = op(pauli::x());
        let y = op(pauli::y());
        assert!(close(inner_product(&x, &x).unwrap(), Complex64::new(1.0, 0.0), 1e-15));
        assert!(close(inner_product(&x, &y).unwrap(), Complex64::new(0.0, 0.0), 1e-15));
        for dim in [2, 3, 8] {
            let id = OperatorState::identity(HilbertSpace::new(dim).unwrap());
            assert!(close(inner_product(&id, &id).unwrap(), Complex64::new(1.0, 0.0), 1e-15));
        }
    }

    #[test]
    fn mismatched_dimensions_are_rejected() {
        let a = OperatorState::identity(HilbertSpace::new(2).unwrap());
        let b = OperatorState::identity(HilbertSpace::new(4).unwrap());
        assert!(matches!(
            inner_product(&a, &b),
            Err(KrylovError::DimensionMismatch { left: 2, right: 4 })
        ));
        let h = Hamiltonian::new(DMatrix::identity(4, 4), "id").unwrap();
        assert!(apply_liouvillian(&h, &a).is_err());
        assert!(apply_liouvillian_tilde(&h, &a).is_err());
    }

    #[test]
    fn liouvillian_on_two_level_system() {
        // i[sz, sx] = i * 2i sy = -2 sy
        let h = sigma_z_hamiltonian();
        let x = op(pauli::x());
        let lx = apply_liouvillian(&h, &x).unwrap();
        let expected = op(pauli::y().map(|z| z * -2.0));
        assert!(lx.max_abs_diff(&expected) < 1e-15);
        assert!(lx.is_hermitian());

        let tx = apply_liouvillian_tilde(&h, &x).unwrap();
        let expected = op(pauli::y().map(|z| z * Complex64::new(0.0, 2.0)));
        assert!(tx.max_abs_diff(&expected) < 1e-15);
        assert!(!tx.is_hermitian());
    }

    #[test]
    fn liouvillian_annihilates_identity_and_hamiltonian() {
        let h = Hamiltonian::new(
            DMatrix::from_row_slice(
                2,
                2,
                &[
                    Complex64::new(0.3, 0.0),
                    Complex64::new(0.1, -0.7),
                    Complex64::new(0.1, 0.7),
                    Complex64::new(-1.2, 0.0),
                ],
            ),
            "h",
        )
        .unwrap();
        let id = OperatorState::identity(h.space());
        assert!(apply_liouvillian(&h, &id).unwrap().max_abs() < 1e-15);
        assert!(apply_liouvillian_tilde(&h, &id).unwrap().max_abs() < 1e-15);
        let h_op = op(h.matrix().clone());
        assert!(apply_liouvillian(&h, &h_op).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn liouvillian_kinds_differ_by_factor_i() {
        let h = sigma_z_hamiltonian();
        let o = op(pauli::x() + pauli::y().map(|z| z * 0.5));
        let l = apply_liouvillian(&h, &o).unwrap();
        let t = apply_liouvillian_tilde(&h, &o).unwrap();
        assert!(l.max_abs_diff(&t.scaled(I)) < 1e-15);
    }

    #[test]
    fn hermitize_examples() {
        let x = op(pauli::x());
        assert!(hermitize(&x).max_abs_diff(&x) < 1e-15);

        let ix = op(pauli::x().map(|z| z * I));
        assert!(hermitize(&ix).max_abs() < 1e-15);

        let mixed = op(pauli::x() + pauli::y().map(|z| z * I));
        assert!(hermitize(&mixed).max_abs_diff(&x) < 1e-15);
        let once = hermitize(&mixed);
        assert_eq!(hermitize(&once), once);
    }

    #[test]
    fn normalize_examples() {
        let two_x = op(pauli::x().map(|z| z * 2.0));
        assert!(normalize(&two_x).unwrap().max_abs_diff(&op(pauli::x())) < 1e-15);

        // (n|n) = Tr[n^2]/2 = 1/2, so the normalized projector is sqrt(2) n.
        let n = op(pauli::up_projector());
        assert!((inner_product(&n, &n).unwrap().re - 0.5).abs() < 1e-15);
        let nn = normalize(&n).unwrap();
        assert!(nn.max_abs_diff(&n.scaled(Complex64::new(2f64.sqrt(), 0.0))) < 1e-15);
        assert!((nn.norm() - 1.0).abs() < 1e-12);

        let x = op(pauli::x());
        assert!(normalize(&x).unwrap().max_abs_diff(&x) < 1e-15);

        let zero = OperatorState::zeros(HilbertSpace::new(2).unwrap());
        assert!(matches!(normalize(&zero), Err(KrylovError::NullOperator { .. })));
    }

    #[test]
    fn hamiltonian_must_be_hermitian() {
        let m = pauli::x().map(|z| z * I);
        assert!(matches!(Hamiltonian::new(m, "bad"), Err(KrylovError::NotHermitian { .. })));
        assert!(HilbertSpace::new(1).is_err());
    }
}
