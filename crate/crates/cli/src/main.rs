mod config;
mod jobs;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use krylov_core::dynamics::{evolve_chain, krylov_complexity, EvolutionMethod};
use krylov_core::observables::{disorder_average, krylov_variance};
use krylov_core::Backend;
use krylov_validation::reproduction::{Reproduction, STABILITY_TOL};
use krylov_validation::{quick_suite, Outcome};
use serde_json::json;

use config::{BoundaryArg, ModelKind, RawConfig, RunConfig};
use jobs::JobResult;
use output::{per_job_name, write_table, BnRow, EpsilonRow, KtRow, RunInfo, SigmaRow};

/// Norm drift tolerated on the Krylov chain before a run is flagged.
const NORM_TOL: f64 = 1e-8;

#[derive(Parser, Debug)]
#[command(name = "krylov", version, about = "Operator Lanczos coefficients, Krylov variance and Krylov complexity")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Lanczos coefficients, one file per parameter value and realization.
    Lanczos(RunArgs),
    /// Disorder-averaged Krylov variance across a parameter sweep.
    Sweep(RunArgs),
    /// Krylov-chain amplitude phi_0(t) and complexity K(t).
    Evolve(EvolveArgs),
    /// Runs the oracle checks.
    Check(CheckArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Bn,
    Sigma,
    Kt,
    Epsilon,
}

#[derive(Args, Debug, Clone)]
struct RunArgs {
    #[arg(long, value_enum)]
    model: ModelKind,
    /// N for syk, L for east, last index for synthetic.
    #[arg(long)]
    size: Option<usize>,
    /// Parameter values as NAME=V1,V2,...; repeatable.
    #[arg(long = "param", value_name = "NAME=VALUES", allow_hyphen_values = true)]
    params: Vec<String>,
    /// e.g. chi:1, chi:1,2, n:mid, sx:6.
    #[arg(long)]
    operator: Option<String>,
    #[arg(long, default_value_t = 50)]
    cutoff: usize,
    #[arg(long, default_value_t = 1000)]
    max_steps: usize,
    /// Defaults to 5 for syk and 1 otherwise.
    #[arg(long)]
    realizations: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Only 0 is supported.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    beta: f64,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Worker threads; all cores when omitted.
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, default_value = "auto")]
    backend: Backend,
    #[arg(long, value_enum, default_value = "effective")]
    boundary: BoundaryArg,
    /// Tables to write; the command's main table when omitted.
    #[arg(long, value_enum, value_delimiter = ',')]
    emit: Vec<Emit>,
}

#[derive(Args, Debug, Clone)]
struct EvolveArgs {
    #[command(flatten)]
    run: RunArgs,
    #[arg(long, default_value_t = 10.0)]
    t_max: f64,
    #[arg(long, default_value_t = 0.01)]
    dt: f64,
    #[arg(long, value_enum, default_value = "exact")]
    method: Method,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
enum Method {
    Exact,
    Rk4,
}

#[derive(Args, Debug, Clone)]
struct CheckArgs {
    /// Also run the East and SYK reproduction sweeps (tens of minutes).
    #[arg(long)]
    full: bool,
}

impl RunArgs {
    fn config(&self) -> Result<RunConfig> {
        RunConfig::from_raw(RawConfig {
            model: self.model,
            size: self.size,
            params: &self.params,
            operator: self.operator.as_deref(),
            boundary: self.boundary,
            cutoff: self.cutoff,
            max_steps: self.max_steps,
            realizations: self.realizations,
            seed: self.seed,
            beta: self.beta,
            backend: self.backend,
        })
    }

    fn emits(&self, default: Emit, allowed: &[Emit]) -> Result<Vec<Emit>> {
        let emit = if self.emit.is_empty() { vec![default] } else { self.emit.clone() };
        if let Some(bad) = emit.iter().find(|e| !allowed.contains(e)) {
            bail!("this command cannot emit {bad:?}");
        }
        Ok(emit)
    }

    fn pool(&self) -> Result<rayon::ThreadPool> {
        Ok(rayon::ThreadPoolBuilder::new().num_threads(self.threads.unwrap_or(0)).build()?)
    }
}

/// Violations of the checks attached to a run.
#[derive(Default)]
struct Violations(Vec<String>);

impl Violations {
    fn check_stability(&mut self, results: &[JobResult], param_name: &str) {
        for r in results {
            let eps = r.max_epsilon();
            if eps >= STABILITY_TOL {
                self.0.push(format!(
                    "{param_name}={} r{}: max epsilon {eps:.2e} is not below {STABILITY_TOL:e}",
                    r.job.param_value, r.job.realization
                ));
            }
        }
    }

    fn report(self) -> ExitCode {
        if self.0.is_empty() {
            return ExitCode::SUCCESS;
        }
        for v in &self.0 {
            eprintln!("check failed: {v}");
        }
        ExitCode::from(1)
    }
}

fn write_bn(args: &RunArgs, cfg: &RunConfig, info: &RunInfo, results: &[JobResult]) -> Result<()> {
    for r in results {
        let rows: Vec<BnRow> = r
            .b
            .values()
            .iter()
            .enumerate()
            .map(|(k, &b)| BnRow {
                run_id: &info.run_id,
                model: cfg.model.name(),
                param_name: &cfg.param_name,
                param_value: r.job.param_value,
                realization: r.job.realization,
                n: r.b.index_of(k),
                b_raw: b,
                b_rescaled: r.rescaled.as_ref().map(|s| s.values()[k]),
                epsilon_n: r.epsilon.get(k).copied(),
                seed: cfg.seed,
                config_hash: &info.config_hash,
            })
            .collect();
        let name = per_job_name("bn", &cfg.param_name, r.job.param_value, r.job.realization);
        let extra = json!({
            "param_value": r.job.param_value,
            "realization": r.job.realization,
            "backend": r.backend.map(|b| b.to_string()),
            "terminated_by": r.terminated_by.map(|t| format!("{t:?}")),
            "spectral_bounds": r.rescaled.as_ref().and_then(|s| s.spectral_bounds()),
            "max_epsilon": r.max_epsilon(),
        });
        write_table(&args.out.join(name), "bn", &rows, info, extra)?;
    }
    Ok(())
}

fn write_epsilon(args: &RunArgs, cfg: &RunConfig, info: &RunInfo, results: &[JobResult]) -> Result<()> {
    let rows: Vec<EpsilonRow> = results
        .iter()
        .map(|r| EpsilonRow {
            run_id: &info.run_id,
            param_value: r.job.param_value,
            realization: r.job.realization,
            steps: r.b.len(),
            max_epsilon: r.max_epsilon(),
            backend: r.backend.map_or_else(|| "analytic".to_string(), |b| b.to_string()),
            terminated_by: r.terminated_by.map_or_else(String::new, |t| format!("{t:?}")),
            seed: cfg.seed,
            config_hash: &info.config_hash,
        })
        .collect();
    write_table(&args.out.join("epsilon.csv"), "epsilon", &rows, info, json!({}))
}

fn write_sigma(args: &RunArgs, cfg: &RunConfig, info: &RunInfo, results: &[JobResult]) -> Result<()> {
    let mut rows = Vec::new();
    for &value in &cfg.param_values {
        let records = results
            .iter()
            .filter(|r| r.job.param_value == value)
            .map(|r| krylov_variance(&r.b, cfg.cutoff))
            .collect::<krylov_core::Result<Vec<_>>>()
            .with_context(|| format!("variance at {}={value}", cfg.param_name))?;
        let avg = disorder_average(&records)?;
        rows.push(SigmaRow {
            run_id: &info.run_id,
            param_value: value,
            cutoff: cfg.cutoff,
            pairs_used: avg.pairs_used,
            sigma_bar: avg.sigma_bar,
            sigma_bar_sq: avg.sigma_bar_sq,
            realizations: avg.realizations,
            seed: cfg.seed,
            config_hash: &info.config_hash,
        });
    }
    write_table(&args.out.join("sigma.csv"), "sigma", &rows, info, json!({ "param_name": cfg.param_name }))?;
    for r in &rows {
        println!(
            "{}={}: sigma_bar^2 = {:.6e} over {} realizations, {} pairs",
            cfg.param_name, r.param_value, r.sigma_bar_sq, r.realizations, r.pairs_used
        );
    }
    Ok(())
}

fn cmd_coefficients(args: &RunArgs, command: &'static str, default: Emit) -> Result<ExitCode> {
    let cfg = args.config()?;
    let emits = args.emits(default, &[Emit::Bn, Emit::Sigma, Emit::Epsilon])?;
    let info = RunInfo::new(command, serde_json::to_value(&cfg)?, cfg.seed);
    let results = jobs::run_all(&cfg, &args.pool()?)?;
    for r in &results {
        println!(
            "{}={} r{}: {} coefficients, max epsilon {:.2e}",
            cfg.param_name,
            r.job.param_value,
            r.job.realization,
            r.b.len(),
            r.max_epsilon()
        );
    }
    if emits.contains(&Emit::Bn) {
        write_bn(args, &cfg, &info, &results)?;
    }
    if emits.contains(&Emit::Epsilon) {
        write_epsilon(args, &cfg, &info, &results)?;
    }
    if emits.contains(&Emit::Sigma) {
        write_sigma(args, &cfg, &info, &results)?;
    }
    let mut v = Violations::default();
    v.check_stability(&results, &cfg.param_name);
    Ok(v.report())
}

fn cmd_evolve(args: &EvolveArgs) -> Result<ExitCode> {
    let run = &args.run;
    let cfg = run.config()?;
    let emits = run.emits(Emit::Kt, &[Emit::Kt, Emit::Bn, Emit::Epsilon])?;
    if !(args.t_max >= 0.0 && args.dt > 0.0 && args.t_max.is_finite()) {
        bail!("need t-max >= 0 and dt > 0");
    }
    let points = (args.t_max / args.dt).round() as usize + 1;
    let t: Vec<f64> = (0..points).map(|k| k as f64 * args.dt).collect();
    let config = json!({ "run": cfg, "t_max": args.t_max, "dt": args.dt, "method": args.method });
    let info = RunInfo::new("evolve", config, cfg.seed);
    let results = jobs::run_all(&cfg, &run.pool()?)?;
    let method = match args.method {
        Method::Exact => EvolutionMethod::Exact,
        Method::Rk4 => EvolutionMethod::Rk4 { dt: None },
    };

    let mut v = Violations::default();
    v.check_stability(&results, &cfg.param_name);
    if emits.contains(&Emit::Kt) {
        for r in &results {
            let state = evolve_chain(&r.b, &t, method)?;
            let k = krylov_complexity(&state);
            let norm = state.norm_errors();
            let rows: Vec<KtRow> = t
                .iter()
                .zip(state.phi0())
                .zip(&k)
                .zip(&norm)
                .map(|(((&t, phi0), &k), &norm_error)| KtRow { t, phi0, k, norm_error })
                .collect();
            let worst = norm.iter().copied().fold(0.0, f64::max);
            if worst >= NORM_TOL {
                v.0.push(format!("{}={}: norm error {worst:.2e}", cfg.param_name, r.job.param_value));
            }
            let name = per_job_name("kt", &cfg.param_name, r.job.param_value, r.job.realization);
            let extra = json!({
                "param_value": r.job.param_value,
                "realization": r.job.realization,
                "chain_sites": state.sites(),
                "max_norm_error": worst,
            });
            write_table(&run.out.join(name), "kt", &rows, &info, extra)?;
            println!(
                "{}={} r{}: K({}) = {:.6}, max norm error {worst:.1e}",
                cfg.param_name,
                r.job.param_value,
                r.job.realization,
                args.t_max,
                k.last().copied().unwrap_or(0.0)
            );
        }
    }
    if emits.contains(&Emit::Bn) {
        write_bn(run, &cfg, &info, &results)?;
    }
    if emits.contains(&Emit::Epsilon) {
        write_epsilon(run, &cfg, &info, &results)?;
    }
    Ok(v.report())
}

fn cmd_check(args: &CheckArgs) -> Result<ExitCode> {
    let mut outcomes: Vec<Outcome> = quick_suite();
    for o in &outcomes {
        println!("{o}");
    }
    if args.full {
        let r = Reproduction::compute(|run| eprintln!("  {} done in {:.1}s", run.label(), run.seconds))?;
        for o in [r.stability(), r.east_shape(), r.syk_ordering()] {
            println!("{o}");
            outcomes.push(o);
        }
    }
    Ok(if outcomes.iter().all(|o| o.passed) { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Lanczos(a) => cmd_coefficients(a, "lanczos", Emit::Bn),
        Command::Sweep(a) => cmd_coefficients(a, "sweep", Emit::Sigma),
        Command::Evolve(a) => cmd_evolve(a),
        Command::Check(a) => cmd_check(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
