//! Reference checks for the Krylov pipeline and the desk-scale reproduction
//! runs. Each check returns an [`Outcome`]; nothing here panics on a failed
//! comparison, so a report can list every result.

pub mod checks;
pub mod reproduction;

use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Outcome {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self { name: name.into(), passed, detail: detail.into() }
    }

    /// An outcome for a check that could not be evaluated at all.
    pub fn error(name: impl Into<String>, err: impl fmt::Display) -> Self {
        Self::new(name, false, format!("error: {err}"))
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{tag}] {}: {}", self.name, self.detail)
    }
}

/// Runs `f`, turning an error into a failed outcome.
pub fn evaluate<F>(name: &str, f: F) -> Outcome
where
    F: FnOnce() -> krylov_core::Result<Outcome>,
{
    f().unwrap_or_else(|e| Outcome::error(name, e))
}

/// The oracle checks that finish in seconds.
pub fn quick_suite() -> Vec<Outcome> {
    vec![
        evaluate(checks::TWO_LEVEL, checks::two_level),
        evaluate(checks::MOMENTS, || checks::moment_equivalence(20)),
        evaluate(checks::LIOUVILLIANS, checks::liouvillian_equivalence),
        evaluate(checks::AUTOCORRELATION, checks::autocorrelation_consistency),
        evaluate(checks::SCALE, checks::scale_invariance),
        evaluate(checks::LARGE_Q, checks::large_q_limit),
        evaluate(checks::MODELS, checks::model_invariants),
    ]
}
