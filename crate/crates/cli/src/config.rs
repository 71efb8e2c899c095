use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use krylov_core::models::{Boundary, OperatorSpec};
use krylov_core::Backend;
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    /// Coupled SYK model; size is the number of Majoranas N, parameter kappa.
    Syk,
    /// Quantum East chain; size is L, parameter s.
    East,
    /// Analytic large-q chain b_n = J sqrt(n(n-1)); size is the last index, parameter J.
    Synthetic,
    /// H = sigma_z with O = sigma_x.
    TwoLevel,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Syk => "syk",
            ModelKind::East => "east",
            ModelKind::Synthetic => "synthetic",
            ModelKind::TwoLevel => "two-level",
        }
    }

    pub fn param_name(self) -> &'static str {
        match self {
            ModelKind::Syk => "kappa",
            ModelKind::East => "s",
            ModelKind::Synthetic => "J",
            ModelKind::TwoLevel => "none",
        }
    }

    fn default_param(self) -> f64 {
        match self {
            ModelKind::Syk | ModelKind::Synthetic => 1.0,
            ModelKind::East | ModelKind::TwoLevel => 0.0,
        }
    }

    fn default_operator(self) -> Option<&'static str> {
        match self {
            ModelKind::Syk => Some("chi:1"),
            ModelKind::East => Some("n:mid"),
            _ => None,
        }
    }

    pub fn is_disordered(self) -> bool {
        self == ModelKind::Syk
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryArg {
    Effective,
    Bare,
}

impl From<BoundaryArg> for Boundary {
    fn from(b: BoundaryArg) -> Self {
        match b {
            BoundaryArg::Effective => Boundary::Effective,
            BoundaryArg::Bare => Boundary::Bare,
        }
    }
}

/// Everything that determines the numbers a run produces. Output location and
/// thread count are deliberately absent.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub model: ModelKind,
    pub size: Option<usize>,
    pub param_name: String,
    pub param_values: Vec<f64>,
    pub operator: Option<String>,
    pub boundary: Option<BoundaryArg>,
    pub cutoff: usize,
    pub max_steps: usize,
    pub realizations: u64,
    pub seed: u64,
    pub backend: Backend,
}

pub struct RawConfig<'a> {
    pub model: ModelKind,
    pub size: Option<usize>,
    pub params: &'a [String],
    pub operator: Option<&'a str>,
    pub boundary: BoundaryArg,
    pub cutoff: usize,
    pub max_steps: usize,
    pub realizations: Option<u64>,
    pub seed: u64,
    pub beta: f64,
    pub backend: Backend,
}

/// Parses `NAME=V1,V2,...` flags, all for the model's parameter.
fn parse_params(model: ModelKind, params: &[String]) -> Result<Vec<f64>> {
    let expected = model.param_name();
    let mut values = Vec::new();
    for p in params {
        let (name, list) = p
            .split_once('=')
            .with_context(|| format!("--param '{p}' must look like {expected}=v1,v2,..."))?;
        if name.trim() != expected {
            bail!("model {} takes parameter '{expected}', got '{name}'", model.name());
        }
        for v in list.split(',') {
            let x: f64 = v.trim().parse().with_context(|| format!("bad value '{v}' in --param '{p}'"))?;
            if !x.is_finite() {
                bail!("parameter values must be finite, got {x}");
            }
            values.push(x);
        }
    }
    if values.is_empty() {
        values.push(model.default_param());
    }
    values.sort_by(f64::total_cmp);
    values.dedup();
    Ok(values)
}

impl RunConfig {
    pub fn from_raw(raw: RawConfig<'_>) -> Result<Self> {
        if raw.beta != 0.0 {
            bail!("finite temperature not implemented (got --beta {})", raw.beta);
        }
        let model = raw.model;
        let param_values = parse_params(model, raw.params)?;
        let size = match model {
            ModelKind::Syk | ModelKind::East => {
                Some(raw.size.with_context(|| format!("--size is required for model {}", model.name()))?)
            }
            ModelKind::Synthetic => Some(raw.size.unwrap_or(raw.max_steps + 1)),
            ModelKind::TwoLevel => None,
        };
        let operator = match (model.default_operator(), raw.operator) {
            (Some(_), Some(op)) => Some(op.parse::<OperatorSpec>()?.to_string()),
            (Some(default), None) => Some(default.to_string()),
            (None, Some(op)) => bail!("model {} does not take an --operator (got '{op}')", model.name()),
            (None, None) => None,
        };
        let realizations = raw.realizations.unwrap_or(if model.is_disordered() { 5 } else { 1 });
        if realizations == 0 {
            bail!("--realizations must be at least 1");
        }
        if !model.is_disordered() && realizations != 1 {
            bail!("model {} has no disorder; use --realizations 1", model.name());
        }
        if raw.max_steps == 0 {
            bail!("--max-steps must be positive");
        }
        Ok(Self {
            model,
            size,
            param_name: model.param_name().to_string(),
            param_values,
            operator,
            boundary: (model == ModelKind::East).then_some(raw.boundary),
            cutoff: raw.cutoff,
            max_steps: raw.max_steps,
            realizations,
            seed: raw.seed,
            backend: raw.backend,
        })
    }
}

/// SHA-256 over the canonical JSON of `value` (object keys sorted).
pub fn config_hash(value: &serde_json::Value) -> String {
    let bytes = serde_json::to_vec(value).expect("JSON values always serialize");
    hex::encode(Sha256::digest(bytes))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(model: ModelKind, params: &[String]) -> RawConfig<'_> {
        RawConfig {
            model,
            size: Some(10),
            params,
            operator: None,
            boundary: BoundaryArg::Effective,
            cutoff: 50,
            max_steps: 100,
            realizations: None,
            seed: 0,
            beta: 0.0,
            backend: Backend::Auto,
        }
    }

    #[test]
    fn params_are_sorted_and_merged() {
        let p = vec!["kappa=100,0.01".to_string(), "kappa=1".to_string()];
        let cfg = RunConfig::from_raw(raw(ModelKind::Syk, &p)).unwrap();
        assert_eq!(cfg.param_values, vec![0.01, 1.0, 100.0]);
        assert_eq!(cfg.realizations, 5);
        assert_eq!(cfg.operator.as_deref(), Some("chi:1"));
    }

    #[test]
    fn wrong_parameter_name() {
        let p = vec!["s=1".to_string()];
        assert!(RunConfig::from_raw(raw(ModelKind::Syk, &p)).is_err());
    }

    #[test]
    fn nonzero_beta_is_rejected() {
        let mut r = raw(ModelKind::East, &[]);
        r.beta = 1.0;
        let err = RunConfig::from_raw(r).unwrap_err().to_string();
        assert!(err.contains("finite temperature not implemented"));
    }

    #[test]
    fn hash_ignores_key_order() {
        let a: serde_json::Value = serde_json::from_str(r#"{"a":1,"b":2}"#).unwrap();
        let b: serde_json::Value = serde_json::from_str(r#"{"b":2,"a":1}"#).unwrap();
        assert_eq!(config_hash(&a), config_hash(&b));
    }
}
