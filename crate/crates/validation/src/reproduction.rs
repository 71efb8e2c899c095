//! Desk-scale sweeps of the quantum East chain and the coupled SYK model, and
//! the stability and qualitative checks evaluated on them.

use std::time::Instant;

use krylov_core::models::{
    build_operator, build_quantum_east, build_syk, EastParams, OperatorContext, OperatorSpec, SykParams,
};
use krylov_core::observables::{disorder_average, krylov_variance, BSequence, Provenance};
use krylov_core::{run_with_backend, Backend, LanczosConfig, Result};

use crate::{evaluate, Outcome};

pub const STABILITY: &str = "Lanczos stability";
pub const EAST_SHAPE: &str = "quantum East variance shape";
pub const SYK_ORDERING: &str = "coupled SYK variance ordering";

pub const EAST_SIZES: [usize; 3] = [7, 9, 11];
pub const EAST_S: [f64; 7] = [-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0];
pub const EAST_STEPS: usize = 600;
pub const EAST_OPERATOR: &str = "n:mid";

pub const SYK_SIZES: [usize; 3] = [10, 12, 14];
pub const SYK_KAPPAS: [f64; 3] = [0.01, 1.0, 100.0];
pub const SYK_REALIZATIONS: u64 = 3;
pub const SYK_STEPS: usize = 500;
pub const SYK_SEED: u64 = 1;
pub const SYK_OPERATOR: &str = "chi:1";

pub const CUTOFF: usize = 50;
pub const STABILITY_STEPS: usize = 500;
pub const STABILITY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct Run {
    pub model: &'static str,
    /// `L` or `N`.
    pub size: usize,
    /// `s` or `kappa`.
    pub param: f64,
    pub realization: u64,
    pub backend: Backend,
    pub measure_points: Option<usize>,
    pub b: BSequence,
    pub epsilon: Vec<f64>,
    pub seconds: f64,
}

impl Run {
    /// Largest orthogonality error among the first `steps` vectors.
    pub fn max_epsilon(&self, steps: usize) -> f64 {
        self.epsilon.iter().take(steps).copied().fold(0.0, f64::max)
    }

    pub fn label(&self) -> String {
        match self.model {
            "east" => format!("east L={} s={}", self.size, self.param),
            _ => format!("syk N={} kappa={} r={}", self.size, self.param, self.realization),
        }
    }
}

pub fn east_run(l: usize, s: f64, steps: usize) -> Result<Run> {
    let start = Instant::now();
    let h = build_quantum_east(&EastParams::new(l, s))?;
    let spec: OperatorSpec = EAST_OPERATOR.parse()?;
    let o = build_operator(&spec, OperatorContext::East { l })?;
    let run = run_with_backend(&h, &o, &LanczosConfig::default().with_max_steps(steps), Backend::Auto)?;
    let provenance = Provenance::new("east")
        .with_parameter("L", l as f64)
        .with_parameter("s", s)
        .with_operator(spec.to_string());
    Ok(Run {
        model: "east",
        size: l,
        param: s,
        realization: 0,
        backend: run.backend,
        measure_points: run.measure_points,
        b: BSequence::from_lanczos(&run.result, provenance)?,
        epsilon: run.result.epsilon,
        seconds: start.elapsed().as_secs_f64(),
    })
}

pub fn syk_run(n: usize, kappa: f64, seed: u64, realization: u64, steps: usize) -> Result<Run> {
    let start = Instant::now();
    let h = build_syk(&SykParams::new(n, kappa, seed, realization))?;
    let spec: OperatorSpec = SYK_OPERATOR.parse()?;
    let o = build_operator(&spec, OperatorContext::Syk { n })?;
    let run = run_with_backend(&h, &o, &LanczosConfig::default().with_max_steps(steps), Backend::Auto)?;
    let provenance = Provenance::new("syk")
        .with_parameter("N", n as f64)
        .with_parameter("kappa", kappa)
        .with_operator(spec.to_string())
        .with_seed(seed, realization);
    Ok(Run {
        model: "syk",
        size: n,
        param: kappa,
        realization,
        backend: run.backend,
        measure_points: run.measure_points,
        b: BSequence::from_lanczos(&run.result, provenance)?,
        epsilon: run.result.epsilon,
        seconds: start.elapsed().as_secs_f64(),
    })
}

/// All runs behind the stability and qualitative checks.
#[derive(Debug, Clone, Default)]
pub struct Reproduction {
    pub east: Vec<Run>,
    pub syk: Vec<Run>,
}

impl Reproduction {
    /// Runs every sweep point, reporting each finished run to `progress`.
    pub fn compute(mut progress: impl FnMut(&Run)) -> Result<Self> {
        let mut out = Self::default();
        for &l in &EAST_SIZES {
            for &s in &EAST_S {
                let run = east_run(l, s, EAST_STEPS)?;
                progress(&run);
                out.east.push(run);
            }
        }
        for &n in &SYK_SIZES {
            for &kappa in &SYK_KAPPAS {
                // the intermediate coupling only enters the stability check
                let realizations = if kappa == 1.0 { 1 } else { SYK_REALIZATIONS };
                for r in 0..realizations {
                    let run = syk_run(n, kappa, SYK_SEED, r, SYK_STEPS)?;
                    progress(&run);
                    out.syk.push(run);
                }
            }
        }
        Ok(out)
    }

    pub fn stability(&self) -> Outcome {
        let runs: Vec<&Run> = self.east.iter().chain(&self.syk).collect();
        let worst = runs
            .iter()
            .map(|r| (r.max_epsilon(STABILITY_STEPS), r))
            .max_by(|a, b| a.0.total_cmp(&b.0));
        let Some((eps, at)) = worst else {
            return Outcome::new(STABILITY, false, "no runs");
        };
        let per_model = |model: &str| {
            runs.iter()
                .filter(|r| r.model == model)
                .map(|r| r.max_epsilon(STABILITY_STEPS))
                .fold(0.0, f64::max)
        };
        Outcome::new(
            STABILITY,
            eps < STABILITY_TOL,
            format!(
                "{} runs, first {STABILITY_STEPS} steps: max epsilon {eps:.1e} at {} (tol 1e-8); East max {:.1e}, SYK max {:.1e}",
                runs.len(),
                at.label(),
                per_model("east"),
                per_model("syk")
            ),
        )
    }

    /// `sigma^2(s)` for one chain length, in the order of [`EAST_S`].
    pub fn east_variances(&self, l: usize) -> Result<Vec<(f64, f64)>> {
        EAST_S
            .iter()
            .map(|&s| {
                let run = self
                    .east
                    .iter()
                    .find(|r| r.size == l && r.param == s)
                    .ok_or(krylov_core::KrylovError::EmptyInput("east run"))?;
                Ok((s, krylov_variance(&run.b, CUTOFF)?.sigma_sq))
            })
            .collect()
    }

    pub fn east_shape(&self) -> Outcome {
        evaluate(EAST_SHAPE, || {
            let mut passed = true;
            let mut parts = Vec::new();
            for &l in &EAST_SIZES {
                let v = self.east_variances(l)?;
                let at = |s: f64| v.iter().find(|p| p.0 == s).map(|p| p.1).unwrap_or(f64::NAN);
                let (lo, hi) = (at(-2.0), at(2.0));
                let peak = v.iter().copied().max_by(|a, b| a.1.total_cmp(&b.1)).map_or(f64::NAN, |p| p.0);
                let ordered = lo < hi / 5.0;
                let centred = (-0.5..=0.5).contains(&peak);
                passed &= ordered && centred;
                let curve: Vec<String> = v.iter().map(|(s, x)| format!("{s}:{x:.3e}")).collect();
                parts.push(format!(
                    "L={l} [{}] ratio s=2/s=-2 {:.2} (need > 5) {}, peak at s={peak} (need [-0.5, 0.5]) {}",
                    curve.join(" "),
                    hi / lo,
                    if ordered { "ok" } else { "NO" },
                    if centred { "ok" } else { "NO" }
                ));
            }
            Ok(Outcome::new(EAST_SHAPE, passed, parts.join("; ")))
        })
    }

    /// `sigma_bar^2` over the realizations of one `(N, kappa)` point.
    pub fn syk_variance(&self, n: usize, kappa: f64, cutoff: usize) -> Result<f64> {
        let records = self
            .syk
            .iter()
            .filter(|r| r.size == n && r.param == kappa)
            .map(|r| krylov_variance(&r.b, cutoff))
            .collect::<Result<Vec<_>>>()?;
        Ok(disorder_average(&records)?.sigma_bar_sq)
    }

    pub fn syk_ordering(&self) -> Outcome {
        evaluate(SYK_ORDERING, || {
            let mut passed = true;
            let mut parts = Vec::new();
            for &n in &SYK_SIZES {
                let ergodic = self.syk_variance(n, 0.01, CUTOFF)?;
                let broken = self.syk_variance(n, 100.0, CUTOFF)?;
                let ergodic_full = self.syk_variance(n, 0.01, 0)?;
                let kappa_ratio = broken / ergodic;
                let cutoff_ratio = ergodic_full / ergodic;
                passed &= kappa_ratio >= 5.0 && cutoff_ratio >= 10.0;
                parts.push(format!(
                    "N={n}: kappa=100/kappa=0.01 {kappa_ratio:.2} (need >= 5) {}, cutoff 0/50 at kappa=0.01 {cutoff_ratio:.2} (need >= 10) {}",
                    if kappa_ratio >= 5.0 { "ok" } else { "NO" },
                    if cutoff_ratio >= 10.0 { "ok" } else { "NO" }
                ));
            }
            Ok(Outcome::new(SYK_ORDERING, passed, parts.join("; ")))
        })
    }
}
