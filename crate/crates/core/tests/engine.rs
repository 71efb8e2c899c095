mod common;

use common::{max_abs_diff, random_system};
use krylov_core::algebra::pauli;
use krylov_core::models::{build_operator, build_quantum_east, build_syk, EastParams, OperatorContext, SykParams};
use krylov_core::oracles::{bn_from_moments, chain_moments, moments};
use krylov_core::*;

#[test]
fn first_coefficients_match_the_moment_method() {
    for (k, dim) in [4usize, 6, 8].into_iter().enumerate() {
        let (h, o) = random_system(dim, k as u64);
        let lanczos = run_lanczos(&h, &o, &LanczosConfig::default().with_max_steps(8)).unwrap();
        let from_moments = bn_from_moments(&moments(&h, &o, 8).unwrap()).unwrap();
        assert_eq!(from_moments.b.len(), 8);
        assert!(max_abs_diff(&lanczos.b_raw, &from_moments.b) < 1e-6, "dim {dim}");
    }
}

#[test]
fn standard_and_tilde_liouvillians_give_the_same_coefficients() {
    for (k, dim) in [2usize, 3, 4, 5, 8].into_iter().enumerate() {
        let (h, o) = random_system(dim, 100 + k as u64);
        let standard = run_lanczos(&h, &o, &LanczosConfig::default()).unwrap();
        let tilde_cfg = LanczosConfig {
            liouvillian_kind: LiouvillianKind::Tilde,
            enforce_hermiticity: false,
            ..LanczosConfig::default()
        };
        let tilde = run_lanczos(&h, &o, &tilde_cfg).unwrap();
        assert_eq!(standard.b_raw.len(), tilde.b_raw.len(), "dim {dim}");
        assert!(max_abs_diff(&standard.b_raw, &tilde.b_raw) < 1e-8, "dim {dim}");
    }
}

#[test]
fn tilde_basis_alternates_hermiticity() {
    let (h, o) = random_system(4, 7);
    let cfg = LanczosConfig {
        liouvillian_kind: LiouvillianKind::Tilde,
        enforce_hermiticity: false,
        retain_basis: true,
        max_steps: 6,
        ..LanczosConfig::default()
    };
    let basis = run_lanczos(&h, &o, &cfg).unwrap().basis.unwrap();
    for (n, v) in basis.iter().enumerate() {
        let anti = OperatorState::new(v.matrix().adjoint()).unwrap();
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let expected = v.scaled(num_complex::Complex64::new(sign, 0.0));
        assert!(anti.max_abs_diff(&expected) < 1e-10, "n = {n}");
    }
}

#[test]
fn tridiagonal_moments_reproduce_direct_moments() {
    for (k, dim) in [3usize, 5, 8].into_iter().enumerate() {
        let (h, o) = random_system(dim, 200 + k as u64);
        let res = run_lanczos(&h, &o, &LanczosConfig::default()).unwrap();
        let direct = moments(&h, &o, 6).unwrap();
        let chain = chain_moments(&res.b_raw, 6);
        for (a, b) in direct.mu.iter().zip(&chain.mu) {
            assert!((a - b).abs() <= 1e-8 * a.max(1.0), "dim {dim}: {a} vs {b}");
        }
    }
}

#[test]
fn full_orthogonalization_twice_changes_nothing() {
    let (h, o) = random_system(6, 300);
    let once = run_lanczos(&h, &o, &LanczosConfig::default().with_max_steps(30)).unwrap();
    let twice_cfg = LanczosConfig { orthogonalization_passes: 2, max_steps: 30, ..LanczosConfig::default() };
    let twice = run_lanczos(&h, &o, &twice_cfg).unwrap();
    assert!(max_abs_diff(&once.b_raw, &twice.b_raw) < 1e-12);
}

#[test]
fn quadratic_dominated_syk_needs_a_second_sweep() {
    let h = build_syk(&SykParams::new(10, 100.0, 1, 1)).unwrap();
    let o = build_operator(&"chi:1".parse().unwrap(), OperatorContext::Syk { n: 10 }).unwrap();
    let single = LanczosConfig { adaptive_reorthogonalization: false, ..LanczosConfig::default() }.with_max_steps(500);
    let adaptive = LanczosConfig::default().with_max_steps(500);
    assert!(run_lanczos(&h, &o, &single).unwrap().max_epsilon() > 1e-6);
    assert!(run_lanczos(&h, &o, &adaptive).unwrap().max_epsilon() < 1e-12);
}

#[test]
fn runs_are_bitwise_deterministic() {
    let (h, o) = random_system(5, 301);
    let a = run_lanczos(&h, &o, &LanczosConfig::default()).unwrap();
    let b = run_lanczos(&h, &o, &LanczosConfig::default()).unwrap();
    assert_eq!(a.b_raw, b.b_raw);
    assert_eq!(a.epsilon, b.epsilon);
}

#[test]
fn krylov_dimension_respects_the_bound() {
    for dim in [2usize, 3, 4] {
        let (h, o) = random_system(dim, 400 + dim as u64);
        let res = run_lanczos(&h, &o, &LanczosConfig::default()).unwrap();
        assert!(res.krylov_dim_reached <= dim * dim - dim + 1);
        assert_eq!(res.max_steps_effective, dim * dim - dim);
    }
}

#[test]
fn two_level_regression_needs_full_orthogonalization() {
    let h = Hamiltonian::new(pauli::z(), "sz").unwrap();
    let o = OperatorState::new(pauli::x()).unwrap();
    let plain = LanczosConfig { full_orthogonalization: false, ..LanczosConfig::default() };
    let res = run_lanczos(&h, &o, &plain).unwrap();
    assert_ne!(res.krylov_dim_reached, 2);
    let res = run_lanczos(&h, &o, &LanczosConfig::default()).unwrap();
    assert_eq!(res.krylov_dim_reached, 2);
    assert!((res.b_raw[0] - 2.0).abs() < 1e-10);
}

#[test]
fn retained_basis_is_orthonormal_within_epsilon() {
    let (h, o) = random_system(4, 500);
    let cfg = LanczosConfig { retain_basis: true, ..LanczosConfig::default() };
    let res = run_lanczos(&h, &o, &cfg).unwrap();
    let basis = res.basis.as_ref().unwrap();
    let tol = res.max_epsilon().max(1e-14) * 10.0;
    for (i, a) in basis.iter().enumerate() {
        assert!((a.norm() - 1.0).abs() < 1e-12);
        for b in &basis[..i] {
            assert!(inner_product(b, a).unwrap().norm() <= tol);
        }
    }
    for n in 1..basis.len() {
        let space = DenseSpace::new(&h);
        assert_eq!(orthogonality_error(&space, basis, n).unwrap(), res.epsilon[n - 1]);
    }
}

#[test]
fn spectral_backend_matches_dense() {
    let h = build_syk(&SykParams::new(8, 1.0, 9, 0)).unwrap();
    let o = build_operator(&"chi:1".parse().unwrap(), OperatorContext::Syk { n: 8 }).unwrap();
    // chi_1 at N = 8 has a Krylov space of about 130 vectors; stay clear of its edge
    let cfg = LanczosConfig::default().with_max_steps(80);
    let dense = run_lanczos(&h, &o, &cfg).unwrap();
    let measure = SpectralMeasure::from_operator(&h, &o).unwrap();
    let spectral = run_lanczos_in(&measure, measure.start_vector(), &cfg).unwrap();
    assert_eq!(dense.b_raw.len(), spectral.b_raw.len());
    assert!(max_abs_diff(&dense.b_raw, &spectral.b_raw) < 1e-8);
}

#[test]
fn compressed_measure_reproduces_coefficients() {
    let h = build_quantum_east(&EastParams::new(7, 0.5)).unwrap();
    let o = build_operator(&"n:mid".parse().unwrap(), OperatorContext::East { l: 7 }).unwrap();
    let measure = SpectralMeasure::from_operator(&h, &o).unwrap();
    let cfg = LanczosConfig::default().with_max_steps(300);
    let full = run_lanczos_in(&measure, measure.start_vector(), &cfg).unwrap();
    let small = measure.compress(300, 500);
    assert!(small.is_compressed() && small.len() < measure.len() / 4);
    let compressed = run_lanczos_in(&small, small.start_vector(), &cfg).unwrap();
    for (a, b) in full.b_raw.iter().zip(&compressed.b_raw) {
        assert!((a - b).abs() < 1e-8 * a, "{a} vs {b}");
    }
}

#[test]
fn east_chain_stays_orthogonal() {
    let h = build_quantum_east(&EastParams::new(7, -1.0)).unwrap();
    let o = build_operator(&"sx:mid".parse().unwrap(), OperatorContext::East { l: 7 }).unwrap();
    let res = run_lanczos(&h, &o, &LanczosConfig::default().with_max_steps(200)).unwrap();
    assert_eq!(res.b_raw.len(), 200);
    assert!(res.max_epsilon() < 1e-8);
}
