//! Lanczos sequences with provenance, spectral rescaling, and the Krylov variance.

use serde::{Deserialize, Serialize};

use crate::algebra::Hamiltonian;
use crate::error::{KrylovError, Result};
use crate::lanczos::LanczosResult;
use crate::linalg::{check_limit, real_part, DENSE_EIGEN_LIMIT};

/// Where a coefficient sequence came from.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Provenance {
    pub model: String,
    pub parameters: Vec<(String, f64)>,
    pub seed: Option<u64>,
    pub realization: Option<u64>,
    pub operator: Option<String>,
}

impl Provenance {
    pub fn new(model: impl Into<String>) -> Self {
        Self { model: model.into(), ..Self::default() }
    }

    pub fn with_parameter(mut self, name: impl Into<String>, value: f64) -> Self {
        self.parameters.push((name.into(), value));
        self
    }

    pub fn with_seed(mut self, seed: u64, realization: u64) -> Self {
        self.seed = Some(seed);
        self.realization = Some(realization);
        self
    }

    pub fn with_operator(mut self, operator: impl Into<String>) -> Self {
        self.operator = Some(operator.into());
        self
    }

    /// Same run apart from the disorder realization.
    fn same_ensemble(&self, other: &Self) -> bool {
        self.model == other.model
            && self.parameters == other.parameters
            && self.seed == other.seed
            && self.operator == other.operator
    }
}

/// Lanczos coefficients `b_k` for `k = first_index, first_index + 1, ...`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BSequence {
    values: Vec<f64>,
    first_index: usize,
    raw: bool,
    spectral_bounds: Option<(f64, f64)>,
    provenance: Provenance,
}

impl BSequence {
    /// Raw coefficients `b_1, b_2, ...` in model energy units.
    pub fn raw(values: Vec<f64>, provenance: Provenance) -> Result<Self> {
        Self::with_first_index(values, 1, provenance)
    }

    pub fn with_first_index(values: Vec<f64>, first_index: usize, provenance: Provenance) -> Result<Self> {
        if first_index == 0 {
            return Err(KrylovError::InvalidParameter("Lanczos indices start at 1".into()));
        }
        check_positive(&values, first_index)?;
        Ok(Self { values, first_index, raw: true, spectral_bounds: None, provenance })
    }

    pub fn from_lanczos<V>(result: &LanczosResult<V>, provenance: Provenance) -> Result<Self> {
        Self::raw(result.b_raw.clone(), provenance)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn first_index(&self) -> usize {
        self.first_index
    }

    /// Lanczos index of `values()[k]`.
    pub fn index_of(&self, k: usize) -> usize {
        self.first_index + k
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_raw(&self) -> bool {
        self.raw
    }

    pub fn spectral_bounds(&self) -> Option<(f64, f64)> {
        self.spectral_bounds
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Every value multiplied by `alpha > 0`; flags are kept.
    pub fn scaled(&self, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(KrylovError::InvalidParameter(format!("scale must be positive, got {alpha}")));
        }
        let mut out = self.clone();
        out.values.iter_mut().for_each(|b| *b *= alpha);
        check_positive(&out.values, out.first_index)?;
        Ok(out)
    }

    /// `b_1 .. b_M`, with zeros for indices below `first_index`.
    pub fn chain_hoppings(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.first_index - 1];
        out.extend_from_slice(&self.values);
        out
    }
}

fn check_positive(values: &[f64], first_index: usize) -> Result<()> {
    for (k, &b) in values.iter().enumerate() {
        if !(b > 0.0 && b.is_finite()) {
            return Err(KrylovError::NonPositiveCoefficient { index: first_index + k, value: b });
        }
    }
    Ok(())
}

/// `(E_min, E_max)` from a full eigensolve, refused above [`DENSE_EIGEN_LIMIT`].
pub fn spectral_bounds(h: &Hamiltonian) -> Result<(f64, f64)> {
    spectral_bounds_with_limit(h, DENSE_EIGEN_LIMIT)
}

pub fn spectral_bounds_with_limit(h: &Hamiltonian, limit: usize) -> Result<(f64, f64)> {
    check_limit(h.dim(), limit)?;
    let eigenvalues: Vec<f64> = if h.is_real() {
        real_part(h.matrix()).symmetric_eigenvalues().iter().copied().collect()
    } else {
        h.matrix().clone().symmetric_eigenvalues().iter().copied().collect()
    };
    Ok(eigenvalues
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &e| (lo.min(e), hi.max(e))))
}

/// Divides raw coefficients by half the spectral width `(E_max - E_min) / 2`.
pub fn rescale(b: &BSequence, bounds: (f64, f64)) -> Result<BSequence> {
    if !b.raw {
        return Err(KrylovError::InvalidParameter("sequence is already rescaled".into()));
    }
    let (lo, hi) = bounds;
    if !(lo.is_finite() && hi.is_finite()) || hi < lo {
        return Err(KrylovError::InvalidParameter(format!("invalid spectral bounds ({lo}, {hi})")));
    }
    let r = (hi - lo) / 2.0;
    if r <= 0.0 {
        return Err(KrylovError::ZeroWidthSpectrum(lo));
    }
    let mut out = b.clone();
    out.values.iter_mut().for_each(|v| *v /= r);
    out.raw = false;
    out.spectral_bounds = Some(bounds);
    Ok(out)
}

/// How coefficients are grouped into pairs after the cutoff.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum Pairing {
    /// Count from the first retained coefficient: `(b_{c+1}, b_{c+2}), (b_{c+3}, b_{c+4}), ...`.
    #[default]
    Reindexed,
    /// Keep the global pairs `(b_{2j-1}, b_{2j})` that lie entirely after the cutoff.
    Global,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VarianceRecord {
    pub sigma: f64,
    pub sigma_sq: f64,
    pub cutoff: usize,
    pub pairs_used: usize,
    pub pairing: Pairing,
    pub provenance: Provenance,
}

pub const MIN_RETAINED: usize = 4;

pub fn krylov_variance(b: &BSequence, cutoff: usize) -> Result<VarianceRecord> {
    krylov_variance_with(b, cutoff, Pairing::Reindexed)
}

/// Population variance of `x_j = ln(b_odd / b_even)` over the pairs after
/// dropping `b_1 .. b_cutoff`.
pub fn krylov_variance_with(b: &BSequence, cutoff: usize, pairing: Pairing) -> Result<VarianceRecord> {
    let skip = (cutoff + 1).saturating_sub(b.first_index).min(b.values.len());
    let retained = &b.values[skip..];
    let first = b.first_index + skip;
    if retained.len() < MIN_RETAINED {
        return Err(KrylovError::WindowTooShort { retained: retained.len(), required: MIN_RETAINED });
    }
    check_positive(retained, first)?;

    let offset = match pairing {
        Pairing::Reindexed => 0,
        Pairing::Global => usize::from(first % 2 == 0),
    };
    let x: Vec<f64> = retained[offset..]
        .chunks_exact(2)
        .map(|p| (p[0] / p[1]).ln())
        .collect();
    if x.len() < 2 {
        return Err(KrylovError::WindowTooShort { retained: retained.len(), required: MIN_RETAINED + offset });
    }
    let m = x.len() as f64;
    let mean = x.iter().sum::<f64>() / m;
    let sigma_sq = x.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / m;
    Ok(VarianceRecord {
        sigma: sigma_sq.sqrt(),
        sigma_sq,
        cutoff,
        pairs_used: x.len(),
        pairing,
        provenance: b.provenance.clone(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DisorderAverage {
    /// Mean of the per-realization `sigma`.
    pub sigma_bar: f64,
    /// `sigma_bar^2`, not the mean of `sigma^2`.
    pub sigma_bar_sq: f64,
    pub realizations: usize,
    pub cutoff: usize,
    /// Smallest pair count among the realizations.
    pub pairs_used: usize,
    pub provenance: Provenance,
}

pub fn disorder_average(records: &[VarianceRecord]) -> Result<DisorderAverage> {
    let first = records.first().ok_or(KrylovError::EmptyInput("variance records"))?;
    for r in records {
        if r.cutoff != first.cutoff || r.pairing != first.pairing {
            return Err(KrylovError::InvalidParameter(
                "records use different cutoffs or pairings".into(),
            ));
        }
        if !r.provenance.same_ensemble(&first.provenance) {
            return Err(KrylovError::InvalidParameter(
                "records come from different models, parameters or operators".into(),
            ));
        }
    }
    // summing in sorted order makes the result independent of record order
    let mut sigmas: Vec<f64> = records.iter().map(|r| r.sigma).collect();
    sigmas.sort_by(f64::total_cmp);
    let sigma_bar = sigmas.iter().sum::<f64>() / sigmas.len() as f64;
    let mut provenance = first.provenance.clone();
    provenance.realization = None;
    Ok(DisorderAverage {
        sigma_bar,
        sigma_bar_sq: sigma_bar * sigma_bar,
        realizations: records.len(),
        cutoff: first.cutoff,
        pairs_used: records.iter().map(|r| r.pairs_used).min().unwrap_or(0),
        provenance,
    })
}
