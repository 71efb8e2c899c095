//! Operator Lanczos recursion with full orthogonalization.
//!
//! The recursion is written once against the [`KrylovSpace`] trait. Two
//! backends implement it: [`DenseSpace`] stores every Krylov vector as an
//! `N x N` matrix, and [`SpectralMeasure`] works in the eigenbasis of `H`
//! where the Liouvillian is diagonal and only the weights of the initial
//! operator on each frequency matter.

mod backend;
mod dense;
mod spectral;

pub use backend::{run_with_backend, Backend, BackendRun, AUTO_DENSE_LIMIT, COMPRESSION_THRESHOLD};
pub use dense::DenseSpace;
pub use spectral::{SpectralMeasure, SpectralVector};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{normalize, Hamiltonian, OperatorState, HERMITICITY_TOL};
use crate::error::{KrylovError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum LiouvillianKind {
    /// `L = i[H, .]`, which keeps Hermitian operators Hermitian.
    #[default]
    Standard,
    /// `L~ = [H, .]`, whose Krylov basis alternates Hermitian and anti-Hermitian.
    Tilde,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Termination {
    MaxSteps,
    BelowTolerance,
}

/// Cap on sweeps per step, fixed or adaptive.
pub const MAX_ORTHOGONALIZATION_PASSES: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LanczosConfig {
    pub max_steps: usize,
    pub termination_tol: f64,
    pub full_orthogonalization: bool,
    /// Orthogonalization sweeps always made per step when `full_orthogonalization` is on.
    pub orthogonalization_passes: usize,
    /// Sweep again, up to `MAX_ORTHOGONALIZATION_PASSES`, while a sweep
    /// shrinks the vector below `1/sqrt(2)` of its norm.
    pub adaptive_reorthogonalization: bool,
    pub enforce_hermiticity: bool,
    /// Return the Krylov basis in the result. The basis is always kept while
    /// running since full orthogonalization needs it.
    pub retain_basis: bool,
    pub liouvillian_kind: LiouvillianKind,
}

impl Default for LanczosConfig {
    fn default() -> Self {
        Self {
            max_steps: 1000,
            termination_tol: 1e-14,
            full_orthogonalization: true,
            orthogonalization_passes: 1,
            adaptive_reorthogonalization: true,
            enforce_hermiticity: true,
            retain_basis: false,
            liouvillian_kind: LiouvillianKind::Standard,
        }
    }
}

impl LanczosConfig {
    pub fn with_max_steps(mut self, max_steps: usize) -> Self {
        self.max_steps = max_steps;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.max_steps == 0 {
            return Err(KrylovError::InvalidParameter("max_steps must be positive".into()));
        }
        if !(self.termination_tol >= 0.0) {
            return Err(KrylovError::InvalidParameter(format!(
                "termination_tol must be nonnegative, got {}",
                self.termination_tol
            )));
        }
        if self.full_orthogonalization
            && !(1..=MAX_ORTHOGONALIZATION_PASSES).contains(&self.orthogonalization_passes)
        {
            return Err(KrylovError::InvalidParameter(format!(
                "orthogonalization_passes must be between 1 and {MAX_ORTHOGONALIZATION_PASSES}, got {}",
                self.orthogonalization_passes
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LanczosResult<V> {
    /// `b_1 .. b_M` in the energy units of the Hamiltonian.
    pub b_raw: Vec<f64>,
    /// `epsilon[k]` is the orthogonality error of the vector produced with `b_raw[k]`.
    pub epsilon: Vec<f64>,
    pub terminated_by: Termination,
    pub basis: Option<Vec<V>>,
    /// Number of Krylov vectors built, counting the initial operator.
    pub krylov_dim_reached: usize,
    /// `max_steps` after clamping to one less than the Krylov-space bound.
    pub max_steps_effective: usize,
}

impl<V> LanczosResult<V> {
    pub fn max_epsilon(&self) -> f64 {
        self.epsilon.iter().copied().fold(0.0, f64::max)
    }

    pub fn without_basis(self) -> LanczosResult<()> {
        LanczosResult {
            b_raw: self.b_raw,
            epsilon: self.epsilon,
            terminated_by: self.terminated_by,
            basis: None,
            krylov_dim_reached: self.krylov_dim_reached,
            max_steps_effective: self.max_steps_effective,
        }
    }
}

/// Vector-space operations the Lanczos recursion needs.
pub trait KrylovSpace {
    type Vector: Clone;

    fn apply(&self, v: &Self::Vector, kind: LiouvillianKind) -> Self::Vector;

    /// Inner product, antilinear in the first argument.
    fn inner(&self, a: &Self::Vector, b: &Self::Vector) -> Complex64;

    /// Replace `v` by its Hermitian part.
    fn hermitize(&self, v: &mut Self::Vector);

    /// `y += alpha * x`.
    fn axpy(&self, alpha: Complex64, x: &Self::Vector, y: &mut Self::Vector);

    fn scale(&self, v: &mut Self::Vector, factor: f64);

    /// Largest possible Krylov dimension.
    fn krylov_bound(&self) -> usize;

    fn norm(&self, v: &Self::Vector) -> f64 {
        self.inner(v, v).re.max(0.0).sqrt()
    }
}

/// Runs the recursion on the dense backend. `o0` is normalized internally.
pub fn run_lanczos(
    h: &Hamiltonian,
    o0: &OperatorState,
    cfg: &LanczosConfig,
) -> Result<LanczosResult<OperatorState>> {
    if h.dim() != o0.dim() {
        return Err(KrylovError::DimensionMismatch { left: h.dim(), right: o0.dim() });
    }
    if cfg.enforce_hermiticity {
        let deviation = o0.hermiticity_deviation();
        if deviation > HERMITICITY_TOL {
            return Err(KrylovError::NotHermitian { deviation });
        }
    }
    let start = normalize(o0)?;
    run_lanczos_in(&DenseSpace::new(h), start, cfg)
}

/// Runs the recursion in any backend. `start` must already have unit norm.
pub fn run_lanczos_in<S: KrylovSpace>(
    space: &S,
    start: S::Vector,
    cfg: &LanczosConfig,
) -> Result<LanczosResult<S::Vector>> {
    cfg.validate()?;
    let norm = space.norm(&start);
    if norm * norm <= crate::algebra::NULL_NORM_SQ {
        return Err(KrylovError::NullOperator { norm_sq: norm * norm });
    }
    if (norm - 1.0).abs() > 1e-10 {
        return Err(KrylovError::InvalidParameter(format!(
            "initial vector must be normalized, has norm {norm}"
        )));
    }

    // a Krylov space of dimension D has at most D - 1 nonzero coefficients
    let max_steps = cfg.max_steps.min(space.krylov_bound().saturating_sub(1));
    let hermitize = cfg.enforce_hermiticity && cfg.liouvillian_kind == LiouvillianKind::Standard;

    let mut basis: Vec<S::Vector> = vec![start];
    let mut b_raw: Vec<f64> = Vec::new();
    let mut epsilon = Vec::new();
    let mut terminated_by = Termination::MaxSteps;

    for n in 1..=max_steps {
        let mut a = space.apply(&basis[n - 1], cfg.liouvillian_kind);
        if hermitize {
            space.hermitize(&mut a);
        }
        if cfg.full_orthogonalization {
            let mut norm = space.norm(&a);
            for pass in 1..=MAX_ORTHOGONALIZATION_PASSES {
                for q in &basis {
                    let c = space.inner(q, &a);
                    space.axpy(-c, q, &mut a);
                }
                if pass < cfg.orthogonalization_passes {
                    continue;
                }
                let reduced = space.norm(&a);
                if !cfg.adaptive_reorthogonalization || reduced >= std::f64::consts::FRAC_1_SQRT_2 * norm {
                    break;
                }
                norm = reduced;
            }
        } else if n >= 2 {
            // Three-term recursion as literally written: A_n = L O_{n-1} - b_{n-1} O_{n-2}.
            space.axpy(Complex64::new(-b_raw[n - 2], 0.0), &basis[n - 2], &mut a);
        }

        let b = space.norm(&a);
        if b <= cfg.termination_tol {
            terminated_by = Termination::BelowTolerance;
            break;
        }
        space.scale(&mut a, 1.0 / b);
        let eps = max_overlap(space, &basis, &a);
        b_raw.push(b);
        epsilon.push(eps);
        basis.push(a);
    }

    let krylov_dim_reached = basis.len();
    Ok(LanczosResult {
        b_raw,
        epsilon,
        terminated_by,
        basis: cfg.retain_basis.then_some(basis),
        krylov_dim_reached,
        max_steps_effective: max_steps,
    })
}

fn max_overlap<S: KrylovSpace>(space: &S, earlier: &[S::Vector], v: &S::Vector) -> f64 {
    earlier.iter().map(|q| space.inner(q, v).norm()).fold(0.0, f64::max)
}

/// `epsilon_n = max_{i<n} |(O_i|O_n)|`, with `epsilon_0 = 0`.
pub fn orthogonality_error<S: KrylovSpace>(space: &S, basis: &[S::Vector], n: usize) -> Result<f64> {
    if n >= basis.len() {
        return Err(KrylovError::InvalidParameter(format!(
            "index {n} out of range for a basis of {} vectors",
            basis.len()
        )));
    }
    Ok(max_overlap(space, &basis[..n], &basis[n]))
}
