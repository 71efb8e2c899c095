//! Coupled SYK model:
//! `H = (2/sqrt N) sum_{i<j<k<l} J_ijkl chi_i chi_j chi_k chi_l + i sum_{i<j} kappa_ij chi_i chi_j`
//! with `Var J_ijkl = 6 J^2 / N^3` and `Var kappa_ij = kappa^2 / N`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::majorana::{check_majorana_count, majorana_monomials};
use super::rng::derive_rng;
use crate::algebra::Hamiltonian;
use crate::error::{KrylovError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SykParams {
    pub n: usize,
    pub j: f64,
    pub kappa: f64,
    pub seed: u64,
    pub realization: u64,
}

impl SykParams {
    pub fn new(n: usize, kappa: f64, seed: u64, realization: u64) -> Self {
        Self { n, j: 1.0, kappa, seed, realization }
    }

    pub fn validate(&self) -> Result<()> {
        check_majorana_count(self.n)?;
        if self.n < 4 {
            return Err(KrylovError::InvalidParameter(format!(
                "SYK needs at least 4 Majoranas, got {}",
                self.n
            )));
        }
        if !(self.j.is_finite() && self.kappa.is_finite()) {
            return Err(KrylovError::InvalidParameter("SYK couplings must be finite".into()));
        }
        Ok(())
    }

    pub fn quartic_variance(&self) -> f64 {
        6.0 * self.j * self.j / (self.n as f64).powi(3)
    }

    pub fn quadratic_variance(&self) -> f64 {
        self.kappa * self.kappa / self.n as f64
    }
}

/// One disorder realization. Indices are 1-based.
#[derive(Debug, Clone, PartialEq)]
pub struct SykCouplings {
    pub quartic: Vec<([usize; 4], f64)>,
    pub quadratic: Vec<([usize; 2], f64)>,
}

impl SykCouplings {
    /// Standard normals are drawn for all `J_ijkl` in lexicographic order, then
    /// for all `kappa_ij`, and scaled by the standard deviations. The stream
    /// depends only on `(seed, realization)`, so changing `kappa` rescales the
    /// same draws.
    pub fn draw(params: &SykParams) -> Result<Self> {
        params.validate()?;
        let n = params.n;
        let mut rng = derive_rng("syk", params.seed, params.realization);
        let sj = params.quartic_variance().sqrt();
        let sk = params.quadratic_variance().sqrt();
        let mut quartic = Vec::new();
        for i in 1..=n {
            for j in i + 1..=n {
                for k in j + 1..=n {
                    for l in k + 1..=n {
                        let z: f64 = rng.sample(StandardNormal);
                        quartic.push(([i, j, k, l], sj * z));
                    }
                }
            }
        }
        let mut quadratic = Vec::new();
        for i in 1..=n {
            for j in i + 1..=n {
                let z: f64 = rng.sample(StandardNormal);
                quadratic.push(([i, j], sk * z));
            }
        }
        Ok(Self { quartic, quadratic })
    }
}

pub fn build_syk(params: &SykParams) -> Result<Hamiltonian> {
    let couplings = SykCouplings::draw(params)?;
    build_syk_from_couplings(params.n, &couplings, &format!("syk N={} kappa={}", params.n, params.kappa))
}

pub fn build_syk_from_couplings(
    n: usize,
    couplings: &SykCouplings,
    label: &str,
) -> Result<Hamiltonian> {
    let chi = majorana_monomials(n)?;
    let dim = 1usize << (n / 2);
    let mut h = DMatrix::<Complex64>::zeros(dim, dim);
    let pre = 2.0 / (n as f64).sqrt();
    for &(idx, jv) in &couplings.quartic {
        check_indices(n, &idx)?;
        let term = chi[idx[0] - 1].mul(&chi[idx[1] - 1]).mul(&chi[idx[2] - 1]).mul(&chi[idx[3] - 1]);
        term.add_to(Complex64::new(pre * jv, 0.0), &mut h);
    }
    for &(idx, kv) in &couplings.quadratic {
        check_indices(n, &idx)?;
        let term = chi[idx[0] - 1].mul(&chi[idx[1] - 1]);
        term.add_to(Complex64::new(0.0, kv), &mut h);
    }
    // roundoff can leave the two triangles differing in the last bit
    let h = (&h + h.adjoint()) * Complex64::new(0.5, 0.0);
    Hamiltonian::new(h, label)
}

fn check_indices(n: usize, idx: &[usize]) -> Result<()> {
    if idx.iter().any(|&i| i == 0 || i > n) || idx.windows(2).any(|w| w[0] >= w[1]) {
        return Err(KrylovError::InvalidParameter(format!(
            "coupling indices {idx:?} must be strictly increasing within 1..={n}"
        )));
    }
    Ok(())
}
