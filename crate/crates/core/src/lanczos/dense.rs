use num_complex::Complex64;

use super::{KrylovSpace, LiouvillianKind};
use crate::algebra::{
    apply_liouvillian, apply_liouvillian_tilde, hermitize, inner_unchecked, Hamiltonian,
    OperatorState, HERMITICITY_TOL,
};

/// Krylov vectors stored as full operator matrices.
#[derive(Debug, Clone, Copy)]
pub struct DenseSpace<'a> {
    h: &'a Hamiltonian,
}

impl<'a> DenseSpace<'a> {
    pub fn new(h: &'a Hamiltonian) -> Self {
        Self { h }
    }
}

impl KrylovSpace for DenseSpace<'_> {
    type Vector = OperatorState;

    fn apply(&self, v: &OperatorState, kind: LiouvillianKind) -> OperatorState {
        // dimensions are checked on entry to the recursion
        match kind {
            LiouvillianKind::Standard => apply_liouvillian(self.h, v),
            LiouvillianKind::Tilde => apply_liouvillian_tilde(self.h, v),
        }
        .expect("operator dimension matches the Hamiltonian")
    }

    fn inner(&self, a: &OperatorState, b: &OperatorState) -> Complex64 {
        inner_unchecked(a, b)
    }

    fn hermitize(&self, v: &mut OperatorState) {
        *v = hermitize(v);
    }

    fn axpy(&self, alpha: Complex64, x: &OperatorState, y: &mut OperatorState) {
        for (yi, xi) in y.as_mut_slice().iter_mut().zip(x.as_slice()) {
            *yi += alpha * xi;
        }
        if alpha.im.abs() > HERMITICITY_TOL || !x.is_hermitian() {
            y.set_hermitian_flag(false);
        }
    }

    fn scale(&self, v: &mut OperatorState, factor: f64) {
        for z in v.as_mut_slice() {
            *z *= factor;
        }
    }

    fn krylov_bound(&self) -> usize {
        self.h.space().krylov_bound()
    }
}
