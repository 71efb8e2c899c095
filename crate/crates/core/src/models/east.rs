//! Quantum East chain in the computational basis.
//!
//! Site 1 is the leftmost tensor factor, i.e. the most significant bit of the
//! basis index. `n_i = |1><1|` projects on spin up at site `i`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::algebra::Hamiltonian;
use crate::error::{KrylovError, Result};

/// Largest chain built densely (`2^14 = 16384` states).
pub const MAX_EAST_SITES: usize = 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum Boundary {
    /// A spin up fixed to the left of site 1 and dephasing at site `L + 1`.
    #[default]
    Effective,
    /// Only the bulk constrained hopping.
    Bare,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EastParams {
    pub l: usize,
    pub s: f64,
    pub boundary: Boundary,
}

impl EastParams {
    pub fn new(l: usize, s: f64) -> Self {
        Self { l, s, boundary: Boundary::Effective }
    }

    pub fn validate(&self) -> Result<()> {
        if self.l < 2 || self.l > MAX_EAST_SITES {
            return Err(KrylovError::InvalidParameter(format!(
                "East chain length must be in 2..={MAX_EAST_SITES}, got {}",
                self.l
            )));
        }
        if !self.s.is_finite() {
            return Err(KrylovError::InvalidParameter(format!("s must be finite, got {}", self.s)));
        }
        Ok(())
    }
}

pub(crate) fn site_mask(l: usize, site: usize) -> usize {
    1usize << (l - site)
}

/// Real matrix of
/// `H = -1/2 (e^{-s} X_1 - 1) - 1/2 sum_{i<L} n_i (e^{-s} X_{i+1} - 1) - 1/2 n_L (e^{-s} - 1)`,
/// dropping the first and last terms for [`Boundary::Bare`].
pub fn east_matrix(params: &EastParams) -> Result<DMatrix<f64>> {
    params.validate()?;
    let l = params.l;
    let dim = 1usize << l;
    let hop = -0.5 * (-params.s).exp();
    let effective = params.boundary == Boundary::Effective;
    let occupied = |b: usize, site: usize| b & site_mask(l, site) != 0;

    let mut h = DMatrix::<f64>::zeros(dim, dim);
    for b in 0..dim {
        if effective {
            h[(b ^ site_mask(l, 1), b)] += hop;
            h[(b, b)] += 0.5;
            if occupied(b, l) {
                h[(b, b)] -= 0.5 * ((-params.s).exp() - 1.0);
            }
        }
        for i in 1..l {
            if occupied(b, i) {
                h[(b ^ site_mask(l, i + 1), b)] += hop;
                h[(b, b)] += 0.5;
            }
        }
    }
    Ok(h)
}

pub fn build_quantum_east(params: &EastParams) -> Result<Hamiltonian> {
    let label = format!(
        "east L={} s={} {}",
        params.l,
        params.s,
        match params.boundary {
            Boundary::Effective => "effective",
            Boundary::Bare => "bare",
        }
    );
    Hamiltonian::from_real(&east_matrix(params)?, label)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::pauli;
    use num_complex::Complex64;

    fn kron_all(ops: &[DMatrix<Complex64>]) -> DMatrix<Complex64> {
        ops.iter().skip(1).fold(ops[0].clone(), |acc, m| acc.kronecker(m))
    }

    fn site_op(l: usize, site: usize, op: DMatrix<Complex64>) -> DMatrix<Complex64> {
        let ops: Vec<_> =
            (1..=l).map(|i| if i == site { op.clone() } else { pauli::identity() }).collect();
        kron_all(&ops)
    }

    /// Independent construction from tensor products.
    fn east_by_kron(l: usize, s: f64, boundary: Boundary) -> DMatrix<Complex64> {
        let dim = 1 << l;
        let id = DMatrix::<Complex64>::identity(dim, dim);
        let e = Complex64::new((-s).exp(), 0.0);
        let half = Complex64::new(-0.5, 0.0);
        let mut h = DMatrix::<Complex64>::zeros(dim, dim);
        for i in 1..l {
            let n = site_op(l, i, pauli::up_projector());
            let x = site_op(l, i + 1, pauli::x());
            h += n * (x * e - &id) * half;
        }
        if boundary == Boundary::Effective {
            h += (site_op(l, 1, pauli::x()) * e - &id) * half;
            h += site_op(l, l, pauli::up_projector()) * (e - 1.0) * half;
        }
        h
    }

    #[test]
    fn matches_tensor_product_construction() {
        for &(l, s) in &[(2, 0.0), (3, -1.3), (4, 0.7)] {
            for boundary in [Boundary::Effective, Boundary::Bare] {
                let h = build_quantum_east(&EastParams { l, s, boundary }).unwrap();
                let diff = (h.matrix() - east_by_kron(l, s, boundary)).iter().map(|z| z.norm()).fold(0.0, f64::max);
                assert!(diff < 1e-14, "L={l} s={s} {boundary:?}: {diff}");
                assert!(h.is_real());
            }
        }
    }

    #[test]
    fn two_sites_at_s_zero() {
        // -1/2 (X_1 - 1) - 1/2 n_1 (X_2 - 1), basis |00>,|01>,|10>,|11>
        let h = east_matrix(&EastParams::new(2, 0.0)).unwrap();
        let expected = DMatrix::from_row_slice(
            4,
            4,
            &[
                0.5, 0.0, -0.5, 0.0, //
                0.0, 0.5, 0.0, -0.5, //
                -0.5, 0.0, 1.0, -0.5, //
                0.0, -0.5, -0.5, 1.0,
            ],
        );
        assert!((h - expected).abs().max() < 1e-15);
    }

    #[test]
    fn boundary_terms_only_differ_at_the_edges() {
        let s = 0.9;
        let eff = east_matrix(&EastParams { l: 3, s, boundary: Boundary::Effective }).unwrap();
        let bare = east_matrix(&EastParams { l: 3, s, boundary: Boundary::Bare }).unwrap();
        let dim = 8;
        let mut terms = DMatrix::<f64>::zeros(dim, dim);
        for b in 0..dim {
            terms[(b ^ 4, b)] += -0.5 * (-s).exp();
            terms[(b, b)] += 0.5;
            if b & 1 != 0 {
                terms[(b, b)] += -0.5 * ((-s).exp() - 1.0);
            }
        }
        assert!((eff - bare - terms).abs().max() < 1e-15);
    }

    #[test]
    fn rejects_short_chains() {
        assert!(build_quantum_east(&EastParams::new(1, 0.0)).is_err());
        assert!(build_quantum_east(&EastParams::new(3, f64::NAN)).is_err());
    }
}
