mod common;

use common::random_system;
use krylov_core::dynamics::{evolve_chain, evolve_wavefunction, krylov_complexity, EvolutionMethod};
use krylov_core::models::{build_operator, build_quantum_east, synthetic_largeq_chain, EastParams, OperatorContext};
use krylov_core::observables::{BSequence, Provenance};
use krylov_core::oracles::exact_autocorrelation;
use krylov_core::*;
use num_complex::Complex64;

fn grid(t_max: f64, points: usize) -> Vec<f64> {
    (0..points).map(|k| t_max * k as f64 / (points - 1) as f64).collect()
}

fn east_chain(steps: usize) -> BSequence {
    let h = build_quantum_east(&EastParams::new(7, -0.5)).unwrap();
    let o = build_operator(&"n:mid".parse().unwrap(), OperatorContext::East { l: 7 }).unwrap();
    let res = run_lanczos(&h, &o, &LanczosConfig::default().with_max_steps(steps)).unwrap();
    BSequence::from_lanczos(&res, Provenance::new("east")).unwrap()
}

#[test]
fn exact_and_runge_kutta_agree_on_long_chains() {
    let b = east_chain(200);
    assert_eq!(b.len(), 200);
    let t = grid(20.0, 41);
    let exact = evolve_chain(&b, &t, EvolutionMethod::Exact).unwrap();
    let rk = evolve_chain(&b, &t, EvolutionMethod::Rk4 { dt: None }).unwrap();
    for (p, q) in exact.phi().iter().zip(rk.phi()) {
        for (x, y) in p.iter().zip(q) {
            assert!((x - y).abs() < 1e-6);
        }
    }
    assert!(exact.norm_errors().iter().all(|&e| e < 1e-12));
    assert!(rk.norm_errors().iter().all(|&e| e < 1e-8));
}

#[test]
fn chain_reproduces_the_exact_autocorrelation() {
    let t = grid(10.0, 101);
    for (k, dim) in [2usize, 4, 6, 8].into_iter().enumerate() {
        let (h, o) = random_system(dim, 600 + k as u64);
        let res = run_lanczos(&h, &o, &LanczosConfig::default()).unwrap();
        let b = BSequence::from_lanczos(&res, Provenance::new("random")).unwrap();
        let oracle = exact_autocorrelation(&h, &o, &t).unwrap();
        for method in [EvolutionMethod::Exact, EvolutionMethod::Rk4 { dt: None }] {
            let state = evolve_chain(&b, &t, method).unwrap();
            for (x, y) in state.phi0().iter().zip(&oracle) {
                assert!((x - y).abs() < 1e-6, "dim {dim} {method:?}: {x} vs {y}");
            }
            assert!(state.norm_errors().iter().all(|&e| e < 1e-8));
        }
    }
}

#[test]
fn autocorrelation_is_even_and_starts_at_one() {
    let (h, o) = random_system(6, 700);
    let t = grid(10.0, 51);
    let neg: Vec<f64> = t.iter().map(|x| -x).collect();
    let plus = exact_autocorrelation(&h, &o, &t).unwrap();
    let minus = exact_autocorrelation(&h, &o, &neg).unwrap();
    assert!((plus[0] - 1.0).abs() < 1e-12);
    for (a, b) in plus.iter().zip(&minus) {
        assert!((a - b).abs() < 1e-10);
    }
}

#[test]
fn schroedinger_form_maps_onto_the_real_amplitudes() {
    let b = east_chain(60);
    let t = grid(8.0, 17);
    let phi = evolve_chain(&b, &t, EvolutionMethod::Exact).unwrap();
    let psi = evolve_wavefunction(&b, &t, None).unwrap();
    let minus_i = Complex64::new(0.0, -1.0);
    for (p, s) in phi.phi().iter().zip(&psi) {
        for (n, (&x, &y)) in p.iter().zip(s).enumerate() {
            let expected = minus_i.powu(n as u32) * x;
            assert!((y - expected).norm() < 1e-8, "n {n}: {y} vs {expected}");
        }
    }
}

#[test]
fn missing_first_coefficient_freezes_the_operator() {
    // the large-q chain starts at b_2, so site 0 is disconnected
    let b = synthetic_largeq_chain(1.0, 10).unwrap();
    let state = evolve_chain(&b, &grid(2.0, 5), EvolutionMethod::Exact).unwrap();
    assert!(state.phi0().iter().all(|&x| x == 1.0));
}

#[test]
fn two_level_complexity() {
    let h = Hamiltonian::new(algebra::pauli::z(), "sz").unwrap();
    let o = OperatorState::new(algebra::pauli::x()).unwrap();
    let res = run_lanczos(&h, &o, &LanczosConfig::default()).unwrap();
    let b = BSequence::from_lanczos(&res, Provenance::new("two-level")).unwrap();
    let t = grid(5.0, 501);
    for method in [EvolutionMethod::Exact, EvolutionMethod::Rk4 { dt: None }] {
        let k = krylov_complexity(&evolve_chain(&b, &t, method).unwrap());
        for (ti, ki) in t.iter().zip(&k) {
            assert!((ki - (2.0 * ti).sin().powi(2)).abs() < 1e-8);
        }
    }
}

#[test]
fn complexity_stays_on_the_chain() {
    let values = synthetic_largeq_chain(1.0, 41).unwrap().values().to_vec();
    let b = BSequence::raw(values, Provenance::new("synthetic")).unwrap();
    let state = evolve_chain(&b, &grid(3.0, 31), EvolutionMethod::Exact).unwrap();
    assert_eq!(state.sites(), 41);
    let k = krylov_complexity(&state);
    assert_eq!(k[0], 0.0);
    assert!(k.iter().all(|&x| (0.0..=40.0).contains(&x)));
    assert!(k.windows(2).take(10).all(|w| w[1] > w[0]));
}
