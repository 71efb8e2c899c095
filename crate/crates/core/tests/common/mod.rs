#![allow(dead_code)]

use krylov_core::models::{derive_rng, random_hermitian};
use krylov_core::{Hamiltonian, OperatorState};

/// A random Hermitian Hamiltonian and initial operator of dimension `dim`.
pub fn random_system(dim: usize, index: u64) -> (Hamiltonian, OperatorState) {
    let mut rng = derive_rng("tests", 2024, index);
    let h = Hamiltonian::new(random_hermitian(dim, &mut rng), format!("random {dim}")).unwrap();
    let o = OperatorState::new(random_hermitian(dim, &mut rng)).unwrap();
    (h, o)
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
