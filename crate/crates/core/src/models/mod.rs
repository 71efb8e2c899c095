//! Hamiltonians, initial operators and analytic coefficient sequences.

pub mod east;
pub mod majorana;
pub mod operator;
pub mod rng;
pub mod syk;

pub use east::{build_quantum_east, east_matrix, Boundary, EastParams};
pub use majorana::{build_majoranas, fermion_parity, parity_sector_check};
pub use operator::{build_operator, OperatorContext, OperatorSpec, Site};
pub use rng::{derive_rng, PRNG_NAME};
pub use syk::{build_syk, build_syk_from_couplings, SykCouplings, SykParams};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{KrylovError, Result};
use crate::observables::{BSequence, Provenance};

/// Large-q SYK coefficients `b_n = J sqrt(n(n-1))` for `n = 2..=m`. The
/// subleading `b_1` is left out, so the sequence starts at index 2.
pub fn synthetic_largeq_chain(j_scale: f64, m: usize) -> Result<BSequence> {
    if m < 2 {
        return Err(KrylovError::InvalidParameter(format!("chain length must be at least 2, got {m}")));
    }
    if !(j_scale > 0.0 && j_scale.is_finite()) {
        return Err(KrylovError::InvalidParameter(format!("J must be positive, got {j_scale}")));
    }
    let values = (2..=m).map(|n| j_scale * ((n * (n - 1)) as f64).sqrt()).collect();
    BSequence::with_first_index(values, 2, Provenance::new("synthetic").with_parameter("J", j_scale))
}

/// Random Hermitian matrix with independent standard complex normal entries
/// above the diagonal and real normals on it.
pub fn random_hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DMatrix<Complex64> {
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    for j in 0..dim {
        m[(j, j)] = Complex64::new(rng.sample(StandardNormal), 0.0);
        for i in 0..j {
            let z = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
                * std::f64::consts::FRAC_1_SQRT_2;
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}
