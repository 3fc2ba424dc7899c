//! Gauss-rule properties of the truncated `X` matrix and the assembled pencil.

use proptest::prelude::*;
use tra_spectrum::hmd::{assemble_system, build_x_matrix, quadrature_matrix, QuadratureRule};
use tra_spectrum::linalg::{symmetric_eigen, Cholesky};
use tra_spectrum::oracle::{direct_matrix_element, quadrature_discrepancy, Kernel};
use tra_spectrum::potential::max_basis_index;
use tra_spectrum::{BasisParams, PotentialParams, Real, SolverRegistry};

/// Valid bases whose next polynomial `P_size` is still orthogonal, so its
/// zeros (the nodes) lie in `(1, ∞)`: `μ + ν < −2·size − 1`.
fn valid_basis() -> impl Strategy<Value = BasisParams> {
    (1usize..=60, -0.99f64..8.0, 1e-3f64..40.0).prop_map(|(size, mu, gap)| {
        let nu = -2.0 * size as f64 - 1.0 - mu - gap;
        BasisParams::with_size(mu, nu, size).unwrap()
    })
}

fn table_potential(lambda: f64) -> PotentialParams {
    PotentialParams::new(-300.0, 5.0, 3.0, lambda).unwrap()
}

fn table_basis(size: usize) -> BasisParams {
    BasisParams::with_size(1.5, -2.0 * size as f64 - 3.5, size).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn nodes_lie_above_one(basis in valid_basis()) {
        // exact F_n degeneracies are rejected upstream, not a node property
        if let Ok(rule) = QuadratureRule::<f64>::for_basis(&basis) {
            prop_assert!(rule.min_node() > 1.0, "min τ = {}", rule.min_node());
        }
    }

    #[test]
    fn rule_reconstructs_x(basis in valid_basis()) {
        if let Ok(rule) = QuadratureRule::<f64>::for_basis(&basis) {
            let x = build_x_matrix::<f64>(&basis).unwrap().to_dense();
            let scale = x.max_abs();
            let back = quadrature_matrix(&rule, |t| t).unwrap();
            prop_assert!(back.sub(&x).max_abs() < 1e-10 * scale);
            let ident = quadrature_matrix(&rule, |_| 1.0).unwrap();
            prop_assert!(ident.sub(&tra_spectrum::linalg::Matrix::identity(basis.size())).max_abs() < 1e-10);
        }
    }

    #[test]
    fn overlap_positive_definite(basis in valid_basis()) {
        if let Ok(rule) = QuadratureRule::<f64>::for_basis(&basis) {
            let omega = quadrature_matrix(&rule, |t| 1.0 / (t * t - 1.0)).unwrap();
            prop_assert!(Cholesky::factor(&omega).is_ok());
            let eig = symmetric_eigen(&omega).unwrap();
            prop_assert!(eig.values.iter().all(|&v| v > 0.0));
        }
    }
}

#[test]
fn low_degree_kernels_are_exact() {
    // Gauss with `size` nodes integrates degree ≤ 2·size − 1 exactly, which
    // covers x²·P_n·P_m except at the bottom-right corner
    for size in 1..=5 {
        let basis = BasisParams::with_size(1.2, -2.0 * size as f64 - 9.0, size).unwrap();
        let rule = QuadratureRule::<f64>::for_basis(&basis).unwrap();
        for (kernel, degree) in [(Kernel::One, 0), (Kernel::X, 1), (Kernel::XSquared, 2)] {
            let w = |t: f64| kernel.at(t);
            let q = quadrature_matrix(&rule, w).unwrap();
            for n in 0..size {
                for m in 0..size {
                    if n + m + degree > 2 * size - 1 {
                        continue;
                    }
                    let exact = direct_matrix_element(&basis, kernel, n, m, 1e-12).unwrap().value;
                    assert!(
                        (q[(n, m)] - exact).abs() < 1e-9,
                        "size {size} w={} ({n},{m}): {} vs {exact}",
                        kernel.label(),
                        q[(n, m)]
                    );
                }
            }
        }
    }
}

#[test]
fn x_square_corner_is_not_exact() {
    let basis = BasisParams::with_size(1.2, -15.0, 3).unwrap();
    let rule = QuadratureRule::<f64>::for_basis(&basis).unwrap();
    let q = quadrature_matrix(&rule, |t| t * t).unwrap();
    let exact = direct_matrix_element(&basis, Kernel::XSquared, 2, 2, 1e-12).unwrap().value;
    assert!((q[(2, 2)] - exact).abs() > 1e-6, "{} vs {exact}", q[(2, 2)]);
}

#[test]
fn recursion_kernel_matches_oracle() {
    for size in 1..=5 {
        let basis = table_basis(size);
        let d = quadrature_discrepancy(&basis, Kernel::X, 1e-12).unwrap();
        assert!(d.max_abs_discrepancy < 1e-9, "size {size}: {}", d.max_abs_discrepancy);
    }
}

#[test]
fn table_overlaps_positive_definite() {
    for size in [10, 20, 50, 100] {
        let sys = assemble_system::<tra_spectrum::DoubleDouble>(&table_basis(size), &table_potential(1.0)).unwrap();
        assert!(Cholesky::factor(&sys.omega).is_ok(), "size {size}");
        assert!(sys.h.asymmetry().to_f64_lossy() < 1e-12);
    }
}

#[test]
fn spectrum_independent_of_lambda() {
    let solvers = SolverRegistry::with_builtins();
    let solver = solvers.default_solver().unwrap();
    for size in [10, 20] {
        let basis = table_basis(size);
        let reference = solver.solve(&basis, &table_potential(1.0)).unwrap();
        for lambda in [0.5, 2.0] {
            let s = solver.solve(&basis, &table_potential(lambda)).unwrap();
            assert_eq!(s.len(), reference.len());
            for (a, b) in s.epsilons.iter().zip(&reference.epsilons) {
                assert!((a - b).abs() <= 1e-12 * b.abs());
            }
        }
    }
}

#[test]
fn bound_state_count_capped() {
    let cap = max_basis_index(-300.0).unwrap() + 1;
    assert_eq!(cap, 12);
    let solver = SolverRegistry::with_builtins();
    let solver = solver.get("cholesky-f64").unwrap();
    for size in [1, 2, 5, 10, 20, 30, 50] {
        let s = solver.solve(&table_basis(size), &table_potential(1.0)).unwrap();
        assert!(s.len() <= cap, "size {size}: {} states", s.len());
    }
}
