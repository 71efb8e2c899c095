//! One unit of work: a model at one parameter value and one realization.

use anyhow::{Context, Result};
use krylov_core::algebra::pauli;
use krylov_core::models::{
    build_operator, build_quantum_east, build_syk, synthetic_largeq_chain, EastParams, OperatorContext,
    OperatorSpec, SykParams,
};
use krylov_core::observables::{rescale, BSequence, Provenance};
use krylov_core::{run_with_backend, Backend, Hamiltonian, LanczosConfig, OperatorState, Termination};
use rayon::prelude::*;

use crate::config::{ModelKind, RunConfig};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Job {
    pub param_value: f64,
    pub realization: u64,
}

#[derive(Debug, Clone)]
pub struct JobResult {
    pub job: Job,
    pub b: BSequence,
    pub rescaled: Option<BSequence>,
    /// Empty for analytic sequences.
    pub epsilon: Vec<f64>,
    pub backend: Option<Backend>,
    pub terminated_by: Option<Termination>,
}

impl JobResult {
    pub fn max_epsilon(&self) -> f64 {
        self.epsilon.iter().copied().fold(0.0, f64::max)
    }
}

/// Jobs in canonical order: parameter value, then realization.
pub fn jobs(cfg: &RunConfig) -> Vec<Job> {
    cfg.param_values
        .iter()
        .flat_map(|&param_value| (0..cfg.realizations).map(move |realization| Job { param_value, realization }))
        .collect()
}

fn provenance(cfg: &RunConfig, job: Job) -> Provenance {
    let mut p = Provenance::new(cfg.model.name());
    if let Some(size) = cfg.size {
        let size_name = match cfg.model {
            ModelKind::Syk => "N",
            ModelKind::East => "L",
            _ => "M",
        };
        p = p.with_parameter(size_name, size as f64);
    }
    p = p.with_parameter(cfg.param_name.clone(), job.param_value);
    if let Some(op) = &cfg.operator {
        p = p.with_operator(op.clone());
    }
    if cfg.model.is_disordered() {
        p = p.with_seed(cfg.seed, job.realization);
    }
    p
}

/// The Hamiltonian and normalized initial operator for a job of a dense model.
pub fn system(cfg: &RunConfig, job: Job) -> Result<(Hamiltonian, OperatorState)> {
    let operator = || -> Result<OperatorSpec> {
        Ok(cfg.operator.as_deref().context("model needs an operator")?.parse()?)
    };
    Ok(match cfg.model {
        ModelKind::Syk => {
            let n = cfg.size.context("SYK needs a size")?;
            let h = build_syk(&SykParams::new(n, job.param_value, cfg.seed, job.realization))?;
            (h, build_operator(&operator()?, OperatorContext::Syk { n })?)
        }
        ModelKind::East => {
            let l = cfg.size.context("East needs a size")?;
            let mut params = EastParams::new(l, job.param_value);
            if let Some(b) = cfg.boundary {
                params.boundary = b.into();
            }
            let h = build_quantum_east(&params)?;
            (h, build_operator(&operator()?, OperatorContext::East { l })?)
        }
        ModelKind::TwoLevel => (Hamiltonian::new(pauli::z(), "sz")?, OperatorState::new(pauli::x())?),
        ModelKind::Synthetic => anyhow::bail!("the synthetic model has no Hamiltonian"),
    })
}

pub fn run_job(cfg: &RunConfig, job: Job) -> Result<JobResult> {
    let prov = provenance(cfg, job);
    if cfg.model == ModelKind::Synthetic {
        let m = cfg.size.context("synthetic chain needs a size")?;
        let values = synthetic_largeq_chain(job.param_value, m)?.values().to_vec();
        let b = BSequence::with_first_index(values, 2, prov)?;
        return Ok(JobResult { job, b, rescaled: None, epsilon: Vec::new(), backend: None, terminated_by: None });
    }
    let (h, o) = system(cfg, job)?;
    let lanczos = LanczosConfig::default().with_max_steps(cfg.max_steps);
    let run = run_with_backend(&h, &o, &lanczos, cfg.backend)?;
    let b = BSequence::from_lanczos(&run.result, prov)?;
    let rescaled = Some(rescale(&b, run.spectral_bounds)?);
    Ok(JobResult {
        job,
        b,
        rescaled,
        epsilon: run.result.epsilon,
        backend: Some(run.backend),
        terminated_by: Some(run.result.terminated_by),
    })
}

/// Runs every job on `pool`; results come back in job order regardless of scheduling.
pub fn run_all(cfg: &RunConfig, pool: &rayon::ThreadPool) -> Result<Vec<JobResult>> {
    let jobs = jobs(cfg);
    pool.install(|| jobs.par_iter().map(|&job| run_job(cfg, job)).collect())
}
