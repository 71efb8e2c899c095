//! Majorana operators from Jordan-Wigner fermions.
//!
//! Convention: `N/2` Dirac modes, mode 1 is the leftmost tensor factor (most
//! significant bit of the basis index). On one mode `c = [[0,1],[0,0]]`,
//! i.e. `c|1> = |0>`, and `c_j` carries a string of `Z = (-1)^n` on modes
//! `1..j-1`. Then `chi_{2j} = (c_j + c_j^dagger)/sqrt2` and
//! `chi_{2j-1} = i(c_j - c_j^dagger)/sqrt2`, so `{chi_a, chi_b} = delta_ab`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::algebra::{Hamiltonian, OperatorState};
use crate::error::{KrylovError, Result};

/// An operator with one nonzero entry per column: `M|b> = phase[b] |b ^ mask>`.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Monomial {
    mask: usize,
    phase: Vec<Complex64>,
}

impl Monomial {
    pub fn identity(dim: usize) -> Self {
        Self { mask: 0, phase: vec![Complex64::new(1.0, 0.0); dim] }
    }

    /// `self * other`.
    pub fn mul(&self, other: &Monomial) -> Monomial {
        let phase = other
            .phase
            .iter()
            .enumerate()
            .map(|(b, p)| self.phase[b ^ other.mask] * p)
            .collect();
        Monomial { mask: self.mask ^ other.mask, phase }
    }

    pub fn scaled(mut self, c: Complex64) -> Self {
        self.phase.iter_mut().for_each(|p| *p *= c);
        self
    }

    /// `target += coeff * self`.
    pub fn add_to(&self, coeff: Complex64, target: &mut DMatrix<Complex64>) {
        for (b, p) in self.phase.iter().enumerate() {
            target[(b ^ self.mask, b)] += coeff * p;
        }
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let dim = self.phase.len();
        let mut m = DMatrix::zeros(dim, dim);
        self.add_to(Complex64::new(1.0, 0.0), &mut m);
        m
    }
}

pub(crate) fn check_majorana_count(n: usize) -> Result<()> {
    if n < 2 || n % 2 != 0 {
        return Err(KrylovError::InvalidParameter(format!(
            "number of Majorana fermions must be even and at least 2, got {n}"
        )));
    }
    if n / 2 >= usize::BITS as usize - 1 {
        return Err(KrylovError::InvalidParameter(format!("{n} Majorana fermions is too many")));
    }
    Ok(())
}

/// All `n` Majoranas in monomial form, index `a` holding `chi_{a+1}`.
pub(crate) fn majorana_monomials(n: usize) -> Result<Vec<Monomial>> {
    check_majorana_count(n)?;
    let modes = n / 2;
    let dim = 1usize << modes;
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::with_capacity(n);
    for j in 1..=modes {
        let bit = modes - j;
        let mask = 1usize << bit;
        // occupied modes to the left of j
        let string_mask = !((1usize << (bit + 1)) - 1) & (dim - 1);
        let sign = |b: usize| if (b & string_mask).count_ones() % 2 == 0 { 1.0 } else { -1.0 };

        // chi_{2j-1} = i(c - c^dagger)/sqrt2
        let odd: Vec<Complex64> = (0..dim)
            .map(|b| {
                let s = if b & mask != 0 { 1.0 } else { -1.0 };
                Complex64::new(0.0, s * sign(b) * r)
            })
            .collect();
        // chi_{2j} = (c + c^dagger)/sqrt2
        let even: Vec<Complex64> = (0..dim).map(|b| Complex64::new(sign(b) * r, 0.0)).collect();
        out.push(Monomial { mask, phase: odd });
        out.push(Monomial { mask, phase: even });
    }
    Ok(out)
}

/// `chi_1 .. chi_n` on the `2^{n/2}`-dimensional Fock space.
pub fn build_majoranas(n: usize) -> Result<Vec<OperatorState>> {
    majorana_monomials(n)?
        .iter()
        .map(|m| OperatorState::new(m.to_dense()))
        .collect()
}

/// `chi_{i_1} chi_{i_2} ...` for distinct 1-based indices, without any phase.
pub(crate) fn majorana_product(n: usize, indices: &[usize]) -> Result<Monomial> {
    let chis = majorana_monomials(n)?;
    let mut out = Monomial::identity(1usize << (n / 2));
    for &i in indices {
        if i == 0 || i > n {
            return Err(KrylovError::InvalidParameter(format!(
                "Majorana index {i} outside 1..={n}"
            )));
        }
        out = out.mul(&chis[i - 1]);
    }
    Ok(out)
}

/// Fermion parity `(-1)^Q` with `Q = sum_j c_j^dagger c_j`.
pub fn fermion_parity(n: usize) -> Result<DMatrix<Complex64>> {
    check_majorana_count(n)?;
    let dim = 1usize << (n / 2);
    Ok(DMatrix::from_fn(dim, dim, |i, j| {
        if i != j {
            Complex64::new(0.0, 0.0)
        } else if i.count_ones() % 2 == 0 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(-1.0, 0.0)
        }
    }))
}

/// True when `max |[H, (-1)^Q]| <= 1e-10`.
pub fn parity_sector_check(h: &Hamiltonian, n: usize) -> Result<bool> {
    let p = fermion_parity(n)?;
    if p.nrows() != h.dim() {
        return Err(KrylovError::DimensionMismatch { left: h.dim(), right: p.nrows() });
    }
    let c = h.matrix() * &p - &p * h.matrix();
    Ok(c.iter().all(|z| z.norm() <= 1e-10))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn anticommutator(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        a * b + b * a
    }

    #[test]
    fn two_majoranas_from_one_mode() {
        let chi = build_majoranas(2).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let c = |re: f64, im: f64| Complex64::new(re, im);
        // c = [[0,1],[0,0]]
        let chi1 = DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., r), c(0., -r), c(0., 0.)]);
        let chi2 = DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(r, 0.), c(r, 0.), c(0., 0.)]);
        assert!((chi[0].matrix() - &chi1).iter().all(|z| z.norm() < 1e-15));
        assert!((chi[1].matrix() - &chi2).iter().all(|z| z.norm() < 1e-15));
        let half = DMatrix::<Complex64>::identity(2, 2) * c(0.5, 0.0);
        for x in &chi {
            assert!((x.matrix() * x.matrix() - &half).iter().all(|z| z.norm() < 1e-15));
            assert!(x.is_hermitian());
        }
    }

    #[test]
    fn four_majoranas_anticommute() {
        let chi = build_majoranas(4).unwrap();
        for (a, x) in chi.iter().enumerate() {
            for (b, y) in chi.iter().enumerate() {
                let ac = anticommutator(x.matrix(), y.matrix());
                let expect = if a == b { 1.0 } else { 0.0 };
                let target = DMatrix::<Complex64>::identity(4, 4) * Complex64::new(expect, 0.0);
                assert!((ac - target).iter().all(|z| z.norm() < 1e-14), "{a} {b}");
            }
        }
    }

    #[test]
    fn odd_counts_are_rejected() {
        assert!(build_majoranas(3).is_err());
        assert!(build_majoranas(0).is_err());
    }

    #[test]
    fn monomial_product_matches_dense() {
        let chi = majorana_monomials(6).unwrap();
        let p = chi[0].mul(&chi[3]).mul(&chi[4]);
        let dense = chi[0].to_dense() * chi[3].to_dense() * chi[4].to_dense();
        assert!((p.to_dense() - dense).iter().all(|z| z.norm() < 1e-15));
    }

    #[test]
    fn single_majorana_breaks_parity() {
        let chi = build_majoranas(4).unwrap();
        let h = Hamiltonian::new(chi[0].matrix().clone(), "chi1").unwrap();
        assert!(!parity_sector_check(&h, 4).unwrap());
        let bilinear = chi[0].matrix() * chi[1].matrix() * Complex64::new(0.0, 1.0);
        let h = Hamiltonian::new(bilinear, "i chi1 chi2").unwrap();
        assert!(parity_sector_check(&h, 4).unwrap());
    }
}
