//! Operator wavefunction on the Krylov chain.
//!
//! With `O(t) = sum_n i^n phi_n(t) O_n` the Heisenberg equation becomes
//! `d phi_n / dt = b_n phi_{n-1} - b_{n+1} phi_{n+1}`, `phi_n(0) = delta_n0`.
//! The generator is antisymmetric, so `sum phi_n^2` is conserved. Writing
//! `phi_n = i^n psi_n` turns it into `i d psi / dt = T psi` with the real
//! symmetric tridiagonal `T` (zero diagonal, `b_n` off the diagonal).

use num_complex::Complex64;

use crate::error::{KrylovError, Result};
use crate::linalg::tridiagonal_eigh;
use crate::observables::BSequence;

/// Default fixed step for Runge-Kutta is this factor over the largest `b_n`.
pub const RK4_STEP_FACTOR: f64 = 0.01;

/// Norm drift at which fixed-step integration is declared to have failed.
const DIVERGENCE_TOL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EvolutionMethod {
    /// Eigendecomposition of `T`, evaluated at every time.
    Exact,
    /// Classical fourth-order Runge-Kutta; `None` uses `RK4_STEP_FACTOR / max b`.
    Rk4 { dt: Option<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainState {
    times: Vec<f64>,
    /// `phi[t][n]`.
    phi: Vec<Vec<f64>>,
    b: BSequence,
}

impl ChainState {
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn phi(&self) -> &[Vec<f64>] {
        &self.phi
    }

    pub fn b(&self) -> &BSequence {
        &self.b
    }

    /// Number of chain sites, `len(b) + 1`.
    pub fn sites(&self) -> usize {
        self.phi.first().map_or(0, Vec::len)
    }

    pub fn phi0(&self) -> Vec<f64> {
        self.phi.iter().map(|p| p[0]).collect()
    }

    /// `|sum_n phi_n^2 - 1|` at every stored time.
    pub fn norm_errors(&self) -> Vec<f64> {
        self.phi.iter().map(|p| (p.iter().map(|x| x * x).sum::<f64>() - 1.0).abs()).collect()
    }
}

fn check_grid(t_grid: &[f64]) -> Result<()> {
    if t_grid.is_empty() {
        return Err(KrylovError::EmptyInput("time grid"));
    }
    if t_grid[0] != 0.0 {
        return Err(KrylovError::InvalidParameter(format!("time grid must start at 0, starts at {}", t_grid[0])));
    }
    if t_grid.iter().any(|t| !t.is_finite()) || t_grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(KrylovError::InvalidParameter("time grid must be finite and sorted".into()));
    }
    Ok(())
}

fn default_step(hop: &[f64], dt: Option<f64>) -> Result<f64> {
    let bmax = hop.iter().copied().fold(0.0, f64::max);
    let dt = dt.unwrap_or(if bmax > 0.0 { RK4_STEP_FACTOR / bmax } else { 1.0 });
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(KrylovError::InvalidParameter(format!("step must be positive, got {dt}")));
    }
    Ok(dt)
}

pub fn evolve_chain(b: &BSequence, t_grid: &[f64], method: EvolutionMethod) -> Result<ChainState> {
    check_grid(t_grid)?;
    let hop = b.chain_hoppings();
    let phi = match method {
        EvolutionMethod::Exact => evolve_exact(&hop, t_grid),
        EvolutionMethod::Rk4 { dt } => evolve_rk4(&hop, t_grid, default_step(&hop, dt)?)?,
    };
    Ok(ChainState { times: t_grid.to_vec(), phi, b: b.clone() })
}

fn evolve_exact(hop: &[f64], t_grid: &[f64]) -> Vec<Vec<f64>> {
    let sites = hop.len() + 1;
    let (lambda, v) = tridiagonal_eigh(&vec![0.0; sites], hop);
    let v0: Vec<f64> = (0..sites).map(|k| v[(0, k)]).collect();
    t_grid
        .iter()
        .map(|&t| {
            if t == 0.0 {
                let mut delta = vec![0.0; sites];
                delta[0] = 1.0;
                return delta;
            }
            // psi_n = sum_k V_nk V_0k e^{-i lambda_k t} = A_n - i B_n
            let c: Vec<f64> = (0..sites).map(|k| v0[k] * (lambda[k] * t).cos()).collect();
            let s: Vec<f64> = (0..sites).map(|k| v0[k] * (lambda[k] * t).sin()).collect();
            (0..sites)
                .map(|n| {
                    let row = v.row(n);
                    let a: f64 = row.iter().zip(&c).map(|(x, y)| x * y).sum();
                    let bb: f64 = row.iter().zip(&s).map(|(x, y)| x * y).sum();
                    // real part of i^n (A - iB)
                    match n % 4 {
                        0 => a,
                        1 => bb,
                        2 => -a,
                        _ => -bb,
                    }
                })
                .collect()
        })
        .collect()
}

fn generator(hop: &[f64], phi: &[f64], out: &mut [f64]) {
    let sites = phi.len();
    for n in 0..sites {
        let mut d = 0.0;
        if n > 0 {
            d += hop[n - 1] * phi[n - 1];
        }
        if n + 1 < sites {
            d -= hop[n] * phi[n + 1];
        }
        out[n] = d;
    }
}

fn evolve_rk4(hop: &[f64], t_grid: &[f64], dt: f64) -> Result<Vec<Vec<f64>>> {
    let sites = hop.len() + 1;
    let mut phi = vec![0.0; sites];
    phi[0] = 1.0;
    let mut k1 = vec![0.0; sites];
    let mut k2 = vec![0.0; sites];
    let mut k3 = vec![0.0; sites];
    let mut k4 = vec![0.0; sites];
    let mut tmp = vec![0.0; sites];
    let mut out = Vec::with_capacity(t_grid.len());
    let mut t = 0.0;
    for &target in t_grid {
        let span = target - t;
        let steps = (span / dt).ceil() as usize;
        let h = if steps > 0 { span / steps as f64 } else { 0.0 };
        for _ in 0..steps {
            generator(hop, &phi, &mut k1);
            for n in 0..sites {
                tmp[n] = phi[n] + 0.5 * h * k1[n];
            }
            generator(hop, &tmp, &mut k2);
            for n in 0..sites {
                tmp[n] = phi[n] + 0.5 * h * k2[n];
            }
            generator(hop, &tmp, &mut k3);
            for n in 0..sites {
                tmp[n] = phi[n] + h * k3[n];
            }
            generator(hop, &tmp, &mut k4);
            for n in 0..sites {
                phi[n] += h / 6.0 * (k1[n] + 2.0 * k2[n] + 2.0 * k3[n] + k4[n]);
            }
        }
        t = target;
        let norm: f64 = phi.iter().map(|x| x * x).sum();
        if !norm.is_finite() || (norm - 1.0).abs() > DIVERGENCE_TOL {
            return Err(KrylovError::IntegrationFailure { time: t, norm });
        }
        out.push(phi.clone());
    }
    Ok(out)
}

/// `psi_n(t)` from fixed-step Runge-Kutta on `i d psi / dt = T psi`, `psi(0) = delta_n0`.
pub fn evolve_wavefunction(b: &BSequence, t_grid: &[f64], dt: Option<f64>) -> Result<Vec<Vec<Complex64>>> {
    check_grid(t_grid)?;
    let hop = b.chain_hoppings();
    let dt = default_step(&hop, dt)?;
    let sites = hop.len() + 1;
    let minus_i = Complex64::new(0.0, -1.0);
    let rhs = |psi: &[Complex64], out: &mut [Complex64]| {
        for n in 0..sites {
            let mut d = Complex64::new(0.0, 0.0);
            if n > 0 {
                d += hop[n - 1] * psi[n - 1];
            }
            if n + 1 < sites {
                d += hop[n] * psi[n + 1];
            }
            out[n] = minus_i * d;
        }
    };
    let zero = Complex64::new(0.0, 0.0);
    let mut psi = vec![zero; sites];
    psi[0] = Complex64::new(1.0, 0.0);
    let (mut k1, mut k2, mut k3, mut k4, mut tmp) =
        (vec![zero; sites], vec![zero; sites], vec![zero; sites], vec![zero; sites], vec![zero; sites]);
    let mut out = Vec::with_capacity(t_grid.len());
    let mut t = 0.0;
    for &target in t_grid {
        let span = target - t;
        let steps = (span / dt).ceil() as usize;
        let h = if steps > 0 { span / steps as f64 } else { 0.0 };
        for _ in 0..steps {
            rhs(&psi, &mut k1);
            for n in 0..sites {
                tmp[n] = psi[n] + k1[n] * (0.5 * h);
            }
            rhs(&tmp, &mut k2);
            for n in 0..sites {
                tmp[n] = psi[n] + k2[n] * (0.5 * h);
            }
            rhs(&tmp, &mut k3);
            for n in 0..sites {
                tmp[n] = psi[n] + k3[n] * h;
            }
            rhs(&tmp, &mut k4);
            for n in 0..sites {
                psi[n] += (k1[n] + k2[n] * 2.0 + k3[n] * 2.0 + k4[n]) * (h / 6.0);
            }
        }
        t = target;
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if !norm.is_finite() || (norm - 1.0).abs() > DIVERGENCE_TOL {
            return Err(KrylovError::IntegrationFailure { time: t, norm });
        }
        out.push(psi.clone());
    }
    Ok(out)
}

/// `K(t) = sum_n n phi_n(t)^2`.
pub fn krylov_complexity(state: &ChainState) -> Vec<f64> {
    state
        .phi
        .iter()
        .map(|p| p.iter().enumerate().map(|(n, x)| n as f64 * x * x).sum())
        .collect()
}
