//! CSV tables with JSON sidecars.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use krylov_core::models::PRNG_NAME;
use serde::Serialize;
use serde_json::{json, Value};

pub const VARIANCE_CONVENTION: &str = "sigma^2 is the population variance of x_j = ln(b_{2j-1} / b_{2j}) over \
     pairs re-indexed from the first coefficient after the cutoff; sigma_bar is the mean of sigma over \
     realizations and sigma_bar_sq its square";
pub const RESCALING_CONVENTION: &str = "b_rescaled = b_raw / ((E_max - E_min) / 2)";

#[derive(Debug, Serialize)]
pub struct BnRow<'a> {
    pub run_id: &'a str,
    pub model: &'a str,
    pub param_name: &'a str,
    pub param_value: f64,
    pub realization: u64,
    pub n: usize,
    pub b_raw: f64,
    pub b_rescaled: Option<f64>,
    pub epsilon_n: Option<f64>,
    pub seed: u64,
    pub config_hash: &'a str,
}

#[derive(Debug, Serialize)]
pub struct SigmaRow<'a> {
    pub run_id: &'a str,
    pub param_value: f64,
    pub cutoff: usize,
    pub pairs_used: usize,
    pub sigma_bar: f64,
    pub sigma_bar_sq: f64,
    pub realizations: usize,
    pub seed: u64,
    pub config_hash: &'a str,
}

#[derive(Debug, Serialize)]
pub struct EpsilonRow<'a> {
    pub run_id: &'a str,
    pub param_value: f64,
    pub realization: u64,
    pub steps: usize,
    pub max_epsilon: f64,
    pub backend: String,
    pub terminated_by: String,
    pub seed: u64,
    pub config_hash: &'a str,
}

#[derive(Debug, Serialize)]
pub struct KtRow {
    pub t: f64,
    pub phi0: f64,
    pub k: f64,
    pub norm_error: f64,
}

/// Identity of a run, shared by every file it writes.
#[derive(Debug, Clone)]
pub struct RunInfo {
    pub command: &'static str,
    pub config: Value,
    pub config_hash: String,
    pub run_id: String,
    pub seed: u64,
}

impl RunInfo {
    pub fn new(command: &'static str, config: Value, seed: u64) -> Self {
        let config_hash = crate::config::config_hash(&json!({ "command": command, "config": config }));
        let run_id = config_hash[..12].to_string();
        Self { command, config, config_hash, run_id, seed }
    }

    fn meta(&self, schema: &str, columns: &[&str], extra: Value) -> Value {
        json!({
            "schema": schema,
            "columns": columns,
            "command": self.command,
            "config": self.config,
            "config_hash": self.config_hash,
            "run_id": self.run_id,
            "seed": self.seed,
            "prng": PRNG_NAME,
            "version": env!("CARGO_PKG_VERSION"),
            "variance_convention": VARIANCE_CONVENTION,
            "rescaling": RESCALING_CONVENTION,
            "inner_product": "(A|B) = Tr[A^dagger B] / N at infinite temperature",
            "details": extra,
        })
    }
}

pub fn sidecar_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("meta.json")
}

fn column_names<T: Serialize>(rows: &[T]) -> Result<Vec<String>> {
    // the header is whatever csv derives from the row type
    let mut w = csv::Writer::from_writer(Vec::new());
    if let Some(first) = rows.first() {
        w.serialize(first)?;
    }
    let bytes = w.into_inner().context("flushing header")?;
    let text = String::from_utf8(bytes)?;
    Ok(text.lines().next().unwrap_or("").split(',').map(str::to_string).collect())
}

/// Writes `rows` as CSV with a header, plus the `.meta.json` sidecar.
pub fn write_table<T: Serialize>(
    path: &Path,
    schema: &str,
    rows: &[T],
    info: &RunInfo,
    extra: Value,
) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let mut w = csv::Writer::from_path(path).with_context(|| format!("opening {}", path.display()))?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    let columns = column_names(rows)?;
    let columns: Vec<&str> = columns.iter().map(String::as_str).collect();
    let meta = info.meta(schema, &columns, extra);
    let sidecar = sidecar_path(path);
    fs::write(&sidecar, serde_json::to_string_pretty(&meta)? + "\n")
        .with_context(|| format!("writing {}", sidecar.display()))?;
    Ok(())
}

/// `bn_s=-2_r0.csv` style names.
pub fn per_job_name(kind: &str, param_name: &str, value: f64, realization: u64) -> String {
    format!("{kind}_{param_name}={value}_r{realization}.csv")
}
