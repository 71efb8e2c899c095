//! Checks against closed forms and independent computations.

use krylov_core::algebra::pauli;
use krylov_core::dynamics::{evolve_chain, krylov_complexity, EvolutionMethod};
use krylov_core::models::{
    build_majoranas, build_quantum_east, build_syk, build_syk_from_couplings, derive_rng, parity_sector_check,
    random_hermitian, synthetic_largeq_chain, EastParams, SykCouplings, SykParams,
};
use krylov_core::observables::{krylov_variance, BSequence, Provenance};
use krylov_core::oracles::{bn_from_moments, exact_autocorrelation, moments};
use krylov_core::{
    run_lanczos, Hamiltonian, LanczosConfig, LiouvillianKind, OperatorState, Result, Termination,
};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::Outcome;

pub const TWO_LEVEL: &str = "two-level oracle";
pub const MOMENTS: &str = "moment-oracle equivalence";
pub const LIOUVILLIANS: &str = "L / L~ equivalence";
pub const AUTOCORRELATION: &str = "autocorrelation consistency";
pub const SCALE: &str = "scale invariance of the variance";
pub const LARGE_Q: &str = "large-q analytic limit";
pub const MODELS: &str = "model invariant suite";

const SEED: u64 = 2024;

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn grid(t_max: f64, points: usize) -> Vec<f64> {
    (0..points).map(|k| t_max * k as f64 / (points - 1) as f64).collect()
}

/// A random Hermitian Hamiltonian and initial operator, reproducible from `index`.
pub fn random_system(dim: usize, index: u64) -> Result<(Hamiltonian, OperatorState)> {
    let mut rng = derive_rng("validation", SEED, index);
    let h = Hamiltonian::new(random_hermitian(dim, &mut rng), format!("random {dim}"))?;
    let o = OperatorState::new(random_hermitian(dim, &mut rng))?;
    Ok((h, o))
}

/// `H = sigma_z`, `O = sigma_x`: `b_1 = 2`, then termination, and `K(t) = sin^2(2t)`.
pub fn two_level() -> Result<Outcome> {
    let h = Hamiltonian::new(pauli::z(), "sz")?;
    let o = OperatorState::new(pauli::x())?;
    let res = run_lanczos(&h, &o, &LanczosConfig::default())?;
    let b_err = res.b_raw.first().map_or(f64::INFINITY, |b| (b - 2.0).abs());
    let dim_ok = res.krylov_dim_reached == 2 && res.terminated_by == Termination::BelowTolerance;

    let t = grid(5.0, 501);
    let b = BSequence::from_lanczos(&res, Provenance::new("two-level"))?;
    let k = krylov_complexity(&evolve_chain(&b, &t, EvolutionMethod::Exact)?);
    let closed: Vec<f64> = t.iter().map(|t| (2.0 * t).sin().powi(2)).collect();
    let k_err = max_abs_diff(&k, &closed);

    let passed = b_err <= 1e-10 && dim_ok && k_err < 1e-8;
    Ok(Outcome::new(
        TWO_LEVEL,
        passed,
        format!(
            "|b1 - 2| = {b_err:.1e} (tol 1e-10), Krylov dimension {} ({:?}), max |K(t) - sin^2 2t| = {k_err:.1e} on [0, 5] (tol 1e-8)",
            res.krylov_dim_reached, res.terminated_by
        ),
    ))
}

/// First eight Lanczos coefficients against the moment recursion on random systems.
pub fn moment_equivalence(systems: usize) -> Result<Outcome> {
    let cfg = LanczosConfig::default().with_max_steps(8);
    let mut worst = 0.0f64;
    let mut short = 0;
    for k in 0..systems {
        let dim = [4, 6, 8][k % 3];
        let (h, o) = random_system(dim, k as u64)?;
        let lanczos = run_lanczos(&h, &o, &cfg)?;
        let from_moments = bn_from_moments(&moments(&h, &o, 8)?)?;
        if from_moments.b.len() < 8 || lanczos.b_raw.len() < 8 {
            short += 1;
        }
        worst = worst.max(max_abs_diff(&lanczos.b_raw, &from_moments.b));
    }
    Ok(Outcome::new(
        MOMENTS,
        worst < 1e-6 && short == 0,
        format!("{systems} systems, N in {{4, 6, 8}}: max |b_lanczos - b_moments| over 8 coefficients = {worst:.1e} (tol 1e-6), {short} with fewer than 8"),
    ))
}

/// Full runs with `L` and `L~` on random systems up to `N = 8`.
pub fn liouvillian_equivalence() -> Result<Outcome> {
    let tilde = LanczosConfig {
        liouvillian_kind: LiouvillianKind::Tilde,
        enforce_hermiticity: false,
        ..LanczosConfig::default()
    };
    let mut worst = 0.0f64;
    let mut length_mismatch = 0;
    let mut compared = 0;
    for (k, dim) in (2..=8).flat_map(|d| [d, d]).enumerate() {
        let (h, o) = random_system(dim, 1000 + k as u64)?;
        let a = run_lanczos(&h, &o, &LanczosConfig::default())?;
        let b = run_lanczos(&h, &o, &tilde)?;
        if a.b_raw.len() != b.b_raw.len() {
            length_mismatch += 1;
        }
        compared += a.b_raw.len().min(b.b_raw.len());
        worst = worst.max(max_abs_diff(&a.b_raw, &b.b_raw));
    }
    Ok(Outcome::new(
        LIOUVILLIANS,
        worst < 1e-8 && length_mismatch == 0,
        format!("14 systems, N = 2..8, {compared} coefficients: max difference {worst:.1e} (tol 1e-8), {length_mismatch} length mismatches"),
    ))
}

/// `phi_0(t)` from the chain against explicit Heisenberg evolution, with norm conservation.
pub fn autocorrelation_consistency() -> Result<Outcome> {
    let t = grid(10.0, 201);
    let neg: Vec<f64> = t.iter().map(|x| -x).collect();
    let (mut phi_err, mut norm_err, mut even_err) = (0.0f64, 0.0f64, 0.0f64);
    let mut systems = 0;
    for (k, dim) in [2usize, 3, 4, 5, 6, 7, 8].into_iter().enumerate() {
        let (h, o) = random_system(dim, 2000 + k as u64)?;
        let res = run_lanczos(&h, &o, &LanczosConfig::default())?;
        let b = BSequence::from_lanczos(&res, Provenance::new("random"))?;
        let oracle = exact_autocorrelation(&h, &o, &t)?;
        let mirrored = exact_autocorrelation(&h, &o, &neg)?;
        even_err = even_err.max(max_abs_diff(&oracle, &mirrored));
        for method in [EvolutionMethod::Exact, EvolutionMethod::Rk4 { dt: None }] {
            let state = evolve_chain(&b, &t, method)?;
            phi_err = phi_err.max(max_abs_diff(&state.phi0(), &oracle));
            norm_err = state.norm_errors().into_iter().fold(norm_err, f64::max);
        }
        systems += 1;
    }
    Ok(Outcome::new(
        AUTOCORRELATION,
        phi_err < 1e-6 && norm_err < 1e-8 && even_err < 1e-10,
        format!(
            "{systems} systems, N = 2..8, t in [0, 10], exact and RK4: max |phi0 - C| = {phi_err:.1e} (tol 1e-6), max norm error {norm_err:.1e} (tol 1e-8), max |C(t) - C(-t)| = {even_err:.1e} (tol 1e-10)"
        ),
    ))
}

/// `sigma^2(alpha b) = sigma^2(b)` for random positive sequences.
pub fn scale_invariance() -> Result<Outcome> {
    let mut rng = derive_rng("validation-scale", SEED, 0);
    let mut worst = 0.0f64;
    let trials = 50;
    for _ in 0..trials {
        let len = rng.gen_range(8..400);
        let values: Vec<f64> = (0..len).map(|_| (4.0 * (rng.gen::<f64>() - 0.5)).exp()).collect();
        let cutoff = rng.gen_range(0..4);
        let b = BSequence::raw(values, Provenance::new("random"))?;
        let base = krylov_variance(&b, cutoff)?.sigma_sq;
        for alpha in [1e-3, 1.0, 1e3] {
            let scaled = krylov_variance(&b.scaled(alpha)?, cutoff)?.sigma_sq;
            worst = worst.max((scaled - base).abs());
        }
    }
    Ok(Outcome::new(
        SCALE,
        worst <= 1e-12,
        format!("{trials} random sequences, alpha in {{1e-3, 1, 1e3}}: max |delta sigma^2| = {worst:.1e} (tol 1e-12)"),
    ))
}

/// Variance of `x_k = ln(b_2k / b_2k+1)` for the pairs of `b_n = sqrt(n(n-1))`,
/// evaluated from `x_k = ln((2k-1)/(2k+1)) / 2`.
pub fn closed_form_large_q_variance(pairs: usize) -> f64 {
    let x: Vec<f64> = (1..=pairs).map(|k| 0.5 * ((2 * k - 1) as f64 / (2 * k + 1) as f64).ln()).collect();
    let m = x.len() as f64;
    let mean = x.iter().sum::<f64>() / m;
    x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / m
}

pub fn large_q_limit() -> Result<Outcome> {
    let sigma = |pairs: usize| -> Result<(f64, usize)> {
        let b = synthetic_largeq_chain(1.0, 2 * pairs + 1)?;
        let r = krylov_variance(&b, 0)?;
        Ok((r.sigma_sq, r.pairs_used))
    };
    let (s10, p10) = sigma(10)?;
    let (s100, p100) = sigma(100)?;
    let oracle_err = (s10 - closed_form_large_q_variance(10))
        .abs()
        .max((s100 - closed_form_large_q_variance(100)).abs());
    let passed = s100 < 0.2 * s10 && p10 == 10 && p100 == 100 && oracle_err < 1e-12;
    Ok(Outcome::new(
        LARGE_Q,
        passed,
        format!(
            "sigma^2(M=10) = {s10:.4e}, sigma^2(M=100) = {s100:.4e}, ratio {:.4} (need < 0.2), closed-form mismatch {oracle_err:.1e}",
            s100 / s10
        ),
    ))
}

fn max_norm(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Anticommutators, Hermiticity, parity conservation and coupling statistics.
pub fn model_invariants() -> Result<Outcome> {
    let mut anti = 0.0f64;
    for n in (2..=14).step_by(2) {
        let chi = build_majoranas(n)?;
        let dim = chi[0].dim();
        let id = DMatrix::<Complex64>::identity(dim, dim);
        for a in 0..n {
            for b in 0..=a {
                let ac = chi[a].matrix() * chi[b].matrix() + chi[b].matrix() * chi[a].matrix();
                let dev = if a == b { max_norm(&(ac - &id)) } else { max_norm(&ac) };
                anti = anti.max(dev);
            }
        }
    }

    // a single quartic term squares to 1/16
    let single = SykCouplings { quartic: vec![([1, 2, 3, 4], 1.0)], quadratic: vec![] };
    let h4 = build_syk_from_couplings(4, &single, "single")?;
    let h4_sq = h4.matrix() * h4.matrix();
    let single_err = max_norm(&(h4_sq - DMatrix::identity(4, 4) * Complex64::new(1.0 / 16.0, 0.0)));

    let mut herm = 0.0f64;
    let mut parity_ok = true;
    for (n, kappa) in [(8usize, 0.01), (10, 1.0), (12, 100.0), (14, 1.0)] {
        let h = build_syk(&SykParams::new(n, kappa, 1, 0))?;
        herm = herm.max(h.hermiticity_deviation());
        parity_ok &= parity_sector_check(&h, n)?;
    }
    for s in [-2.0, 0.0, 2.0] {
        herm = herm.max(build_quantum_east(&EastParams::new(9, s))?.hermiticity_deviation());
    }

    let n = 24;
    let params = |r| SykParams::new(n, 1.0, 7, r);
    let (mut q, mut k) = (Vec::new(), Vec::new());
    let mut r = 0;
    while k.len() < 10_000 {
        let c = SykCouplings::draw(&params(r))?;
        q.extend(c.quartic.into_iter().map(|(_, v)| v));
        k.extend(c.quadratic.into_iter().map(|(_, v)| v));
        r += 1;
    }
    let var = |xs: &[f64]| xs.iter().map(|x| x * x).sum::<f64>() / xs.len() as f64;
    let vq = var(&q) / params(0).quartic_variance();
    let vk = var(&k) / params(0).quadratic_variance();

    let passed = anti < 1e-12
        && single_err < 1e-14
        && herm < 1e-12
        && parity_ok
        && (vq - 1.0).abs() < 0.05
        && (vk - 1.0).abs() < 0.05;
    Ok(Outcome::new(
        MODELS,
        passed,
        format!(
            "anticommutators N <= 14: {anti:.1e}; single-term H^2 = 1/16: {single_err:.1e}; Hermiticity: {herm:.1e}; parity conserved: {parity_ok}; coupling variance ratios (N = 24, {} quartic / {} quadratic samples): {vq:.4}, {vk:.4} (tol 5%)",
            q.len(),
            k.len()
        ),
    ))
}
