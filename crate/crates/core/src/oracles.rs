//! Independent reference computations: moments of the Liouvillian and the
//! exact Heisenberg autocorrelation.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::algebra::{apply_liouvillian_tilde, inner_unchecked, normalize, Hamiltonian, OperatorState};
use crate::error::{KrylovError, Result};
use crate::linalg::{Eigensystem, DENSE_EIGEN_LIMIT};

/// Largest `k` for which `mu_{2k}` is computed.
pub const MAX_MOMENT_ORDER: usize = 12;

/// Tolerance on the imaginary part of the autocorrelation.
pub const AUTOCORRELATION_IMAG_TOL: f64 = 1e-10;

/// Even moments `mu[k] = (O|L~^{2k}|O)` for `k = 0..=k_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSequence {
    pub mu: Vec<f64>,
}

impl MomentSequence {
    pub fn k_max(&self) -> usize {
        self.mu.len().saturating_sub(1)
    }
}

fn check_order(k_max: usize) -> Result<()> {
    if k_max > MAX_MOMENT_ORDER {
        return Err(KrylovError::MomentOrderTooLarge { k_max, limit: MAX_MOMENT_ORDER });
    }
    Ok(())
}

/// Moments from repeated commutators, using `(O|L~^{2k}O) = |L~^k O|^2`.
pub fn moments(h: &Hamiltonian, o0: &OperatorState, k_max: usize) -> Result<MomentSequence> {
    check_order(k_max)?;
    let mut v = normalize(o0)?;
    if v.dim() != h.dim() {
        return Err(KrylovError::DimensionMismatch { left: h.dim(), right: v.dim() });
    }
    let mut mu = vec![inner_unchecked(&v, &v).re];
    for _ in 0..k_max {
        v = apply_liouvillian_tilde(h, &v)?;
        mu.push(inner_unchecked(&v, &v).re);
    }
    Ok(MomentSequence { mu })
}

/// Moments `(T^{2k})_{00}` of the chain with zero diagonal and hoppings `b`.
pub fn chain_moments(b: &[f64], k_max: usize) -> MomentSequence {
    let sites = b.len() + 1;
    let mut v = vec![0.0; sites];
    v[0] = 1.0;
    let mut mu = vec![1.0];
    let mut next = vec![0.0; sites];
    for _ in 0..k_max {
        for n in 0..sites {
            let mut x = 0.0;
            if n > 0 {
                x += b[n - 1] * v[n - 1];
            }
            if n + 1 < sites {
                x += b[n] * v[n + 1];
            }
            next[n] = x;
        }
        std::mem::swap(&mut v, &mut next);
        mu.push(v.iter().map(|x| x * x).sum());
    }
    MomentSequence { mu }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentStop {
    /// All available moments were used.
    Exhausted,
    /// A coefficient vanished: the Krylov space is finite.
    Terminated,
    /// Roundoff made `b_n^2` negative; the coefficients before it are kept.
    LostPositivity { index: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentCoefficients {
    pub b: Vec<f64>,
    pub stop: MomentStop,
}

/// Lanczos coefficients from even moments by the recursion
/// `M^(n)_{2k} = M^(n-1)_{2k} / b_{n-1}^2 - M^(n-2)_{2k-2} / b_{n-2}^2`,
/// `b_n^2 = M^(n)_{2n}`, started from `M^(0) = mu / mu_0`, `M^(-1) = 0`,
/// `b_{-1} = b_0 = 1`. Moments up to `k_max` give at most `k_max` coefficients.
pub fn bn_from_moments(mu: &MomentSequence) -> Result<MomentCoefficients> {
    let m = &mu.mu;
    let k_max = m.len().checked_sub(1).ok_or(KrylovError::EmptyInput("moments"))?;
    if !(m[0] > 0.0) {
        return Err(KrylovError::NullOperator { norm_sq: m[0] });
    }
    let mut older = vec![0.0; k_max + 1];
    let mut old: Vec<f64> = m.iter().map(|x| x / m[0]).collect();
    let (mut b2_older, mut b2_old) = (1.0f64, 1.0f64);
    let mut b = Vec::new();
    let mut scale = 1.0f64;

    for n in 1..=k_max {
        let mut cur = vec![0.0; k_max + 1];
        for k in n..=k_max {
            cur[k] = old[k] / b2_old - older[k - 1] / b2_older;
        }
        let b2 = cur[n];
        let floor = 1e-10 * scale;
        if b2 <= floor {
            let stop = if b2 >= -floor { MomentStop::Terminated } else { MomentStop::LostPositivity { index: n } };
            return Ok(MomentCoefficients { b, stop });
        }
        scale = scale.max(b2);
        b.push(b2.sqrt());
        older = old;
        old = cur;
        b2_older = b2_old;
        b2_old = b2;
    }
    Ok(MomentCoefficients { b, stop: MomentStop::Exhausted })
}

/// `C(t) = (O|e^{iHt} O e^{-iHt})` for a normalized `O`, built from explicit
/// propagators. Negative times are allowed.
pub fn exact_autocorrelation(h: &Hamiltonian, o0: &OperatorState, t_grid: &[f64]) -> Result<Vec<f64>> {
    if h.dim() != o0.dim() {
        return Err(KrylovError::DimensionMismatch { left: h.dim(), right: o0.dim() });
    }
    let o = normalize(o0)?;
    let eig = Eigensystem::of(h, DENSE_EIGEN_LIMIT)?;
    let v = eig.vectors_complex();
    let v_adj = v.adjoint();
    let dim = h.dim();
    let mut out = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        // U = e^{-iHt} = V diag(e^{-iEt}) V^dagger
        let phases = DMatrix::from_fn(dim, dim, |i, j| {
            if i == j {
                Complex64::from_polar(1.0, -eig.values[i] * t)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let u = &v * phases * &v_adj;
        let evolved = u.adjoint() * o.matrix() * &u;
        let c = inner_unchecked(&o, &OperatorState::new(evolved)?);
        if c.im.abs() > AUTOCORRELATION_IMAG_TOL {
            return Err(KrylovError::ComplexAutocorrelation { time: t, imag: c.im });
        }
        out.push(c.re);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::pauli;

    fn two_level() -> (Hamiltonian, OperatorState) {
        (Hamiltonian::new(pauli::z(), "sz").unwrap(), OperatorState::new(pauli::x()).unwrap())
    }

    #[test]
    fn two_level_moments() {
        let (h, o) = two_level();
        let mu = moments(&h, &o, 4).unwrap();
        assert!((mu.mu[0] - 1.0).abs() < 1e-15);
        assert!((mu.mu[1] - 4.0).abs() < 1e-14);
        assert!((mu.mu[2] - 16.0).abs() < 1e-13);
        let c = bn_from_moments(&mu).unwrap();
        assert_eq!(c.b.len(), 1);
        assert!((c.b[0] - 2.0).abs() < 1e-14);
        assert_eq!(c.stop, MomentStop::Terminated);
    }

    #[test]
    fn conserved_operator_has_vanishing_moments() {
        let (h, _) = two_level();
        let mu = moments(&h, &OperatorState::new(pauli::z()).unwrap(), 3).unwrap();
        assert_eq!(mu.mu[0], 1.0);
        assert!(mu.mu[1..].iter().all(|&m| m == 0.0));
        assert!(bn_from_moments(&mu).unwrap().b.is_empty());
    }

    #[test]
    fn order_limit() {
        let (h, o) = two_level();
        assert!(matches!(moments(&h, &o, 13), Err(KrylovError::MomentOrderTooLarge { .. })));
    }

    #[test]
    fn flat_moments_recover_a_single_hopping() {
        let mu = chain_moments(&[1.0], 6);
        assert!(mu.mu.iter().all(|&m| (m - 1.0).abs() < 1e-15));
        let c = bn_from_moments(&mu).unwrap();
        assert_eq!(c.b, vec![1.0]);
        assert_eq!(c.stop, MomentStop::Terminated);
    }

    #[test]
    fn chain_moments_invert() {
        let b = [0.8, 1.3, 0.6, 1.1, 0.9];
        let c = bn_from_moments(&chain_moments(&b, 5)).unwrap();
        for (x, y) in c.b.iter().zip(&b) {
            assert!((x - y).abs() < 1e-10);
        }
        assert_eq!(c.stop, MomentStop::Exhausted);
    }

    #[test]
    fn two_level_autocorrelation() {
        let (h, o) = two_level();
        let t: Vec<f64> = (-20..=20).map(|k| k as f64 * 0.25).collect();
        let c = exact_autocorrelation(&h, &o, &t).unwrap();
        for (ti, ci) in t.iter().zip(&c) {
            assert!((ci - (2.0 * ti).cos()).abs() < 1e-12);
        }
        let conserved = exact_autocorrelation(&h, &OperatorState::new(pauli::z()).unwrap(), &t).unwrap();
        assert!(conserved.iter().all(|c| (c - 1.0).abs() < 1e-12));
    }
}
