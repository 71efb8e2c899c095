//! Picking a representation for a run.

use serde::{Deserialize, Serialize};

use super::{run_lanczos, run_lanczos_in, LanczosConfig, LanczosResult, SpectralMeasure};
use crate::algebra::{Hamiltonian, OperatorState};
use crate::error::{KrylovError, Result};
use crate::observables::spectral_bounds;

/// Hilbert-space dimension up to which `Auto` stays with dense operators.
pub const AUTO_DENSE_LIMIT: usize = 128;

/// Spectral measures with more points than this are compressed before the run.
/// The uncompressed recursion stores one vector of this length per step.
pub const COMPRESSION_THRESHOLD: usize = 250_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    #[default]
    Auto,
    Dense,
    Spectral,
}

impl std::str::FromStr for Backend {
    type Err = KrylovError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Backend::Auto),
            "dense" => Ok(Backend::Dense),
            "spectral" => Ok(Backend::Spectral),
            other => Err(KrylovError::InvalidParameter(format!(
                "unknown backend '{other}', expected auto, dense or spectral"
            ))),
        }
    }
}

impl std::fmt::Display for Backend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Backend::Auto => "auto",
            Backend::Dense => "dense",
            Backend::Spectral => "spectral",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BackendRun {
    /// The basis is never kept here; use [`run_lanczos`] directly for that.
    pub result: LanczosResult<()>,
    /// `Dense` or `Spectral`, never `Auto`.
    pub backend: Backend,
    pub spectral_bounds: (f64, f64),
    /// Points in the measure the recursion ran on, for spectral runs.
    pub measure_points: Option<usize>,
    pub compressed: bool,
}

impl Backend {
    pub fn resolve(self, hilbert_dim: usize) -> Backend {
        match self {
            Backend::Auto if hilbert_dim <= AUTO_DENSE_LIMIT => Backend::Dense,
            Backend::Auto => Backend::Spectral,
            other => other,
        }
    }
}

/// Runs the recursion for `H` and `O0` in the requested representation.
pub fn run_with_backend(
    h: &Hamiltonian,
    o0: &OperatorState,
    cfg: &LanczosConfig,
    backend: Backend,
) -> Result<BackendRun> {
    match backend.resolve(h.dim()) {
        Backend::Dense => {
            let cfg = LanczosConfig { retain_basis: false, ..cfg.clone() };
            let result = run_lanczos(h, o0, &cfg)?.without_basis();
            Ok(BackendRun {
                result,
                backend: Backend::Dense,
                spectral_bounds: spectral_bounds(h)?,
                measure_points: None,
                compressed: false,
            })
        }
        _ => {
            cfg.validate()?;
            let mut measure = SpectralMeasure::from_operator(h, o0)?;
            if measure.len() > COMPRESSION_THRESHOLD {
                let steps = cfg.max_steps.min(2 * measure.len());
                measure = measure.compress(steps, 16 * (steps / 2 + 2));
            }
            let bounds = measure.spectral_bounds().expect("measure built from an eigensolve");
            let cfg = LanczosConfig { retain_basis: false, ..cfg.clone() };
            let result = run_lanczos_in(&measure, measure.start_vector(), &cfg)?.without_basis();
            Ok(BackendRun {
                result,
                backend: Backend::Spectral,
                spectral_bounds: bounds,
                measure_points: Some(measure.len()),
                compressed: measure.is_compressed(),
            })
        }
    }
}
