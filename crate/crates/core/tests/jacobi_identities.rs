//! Orthogonality of the Jacobi basis on `[1, ∞)` checked by direct integration.

use proptest::prelude::*;
use tra_spectrum::oracle::{direct_matrix_element, shifted_overlap_integral, Kernel};
use tra_spectrum::special::{normalization_c_squared, JacobiPair};
use tra_spectrum::BasisParams;

/// Closed-form `∫₁^∞ (x−1)^μ (x+1)^ν P_n² dx`, the reciprocal of `c_n²`.
fn closed_form(pair: JacobiPair, n: usize) -> f64 {
    1.0 / normalization_c_squared(pair, n).unwrap().value()
}

fn pair_strategy() -> impl Strategy<Value = (usize, JacobiPair)> {
    (0usize..=4, -0.9f64..3.0, 0.5f64..12.0).prop_map(|(big_n, mu, gap)| {
        let nu = -2.0 * big_n as f64 - 1.0 - mu - gap;
        (big_n, JacobiPair::new(mu, nu))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn orthonormality_on_half_line((big_n, pair) in pair_strategy()) {
        let basis = BasisParams::new(pair.mu, pair.nu, big_n).unwrap();
        for n in 0..=big_n {
            for m in 0..=n {
                let v = direct_matrix_element(&basis, Kernel::One, n, m, 1e-11).unwrap().value;
                let expected = if n == m { 1.0 } else { 0.0 };
                prop_assert!((v - expected).abs() <= 1e-8, "({}, {}) = {}", n, m, v);
            }
        }
    }

    #[test]
    fn shifted_orthogonality(
        big_n in 0usize..=2,
        mu in -0.5f64..2.0,
        gap in 0.5f64..3.0,
    ) {
        let pair = JacobiPair::new(mu, -2.0 * big_n as f64 - 1.0 - mu - gap);
        let shift = 2f64.powf(pair.mu + pair.nu + 1.0);
        for n in 0..=big_n {
            let diag = closed_form(pair, n) / shift;
            for m in 0..=n {
                let v = shifted_overlap_integral(pair, n, m, 1e-12).unwrap().value;
                let expected = if n == m { diag } else { 0.0 };
                prop_assert!((v - expected).abs() <= 1e-8 * diag + 1e-11, "({}, {}) {} vs {}", n, m, v, expected);
            }
        }
    }
}

#[test]
fn table_basis_ground_normalization() {
    let pair = JacobiPair::new(1.5, -25.5);
    let c2 = normalization_c_squared(pair, 0).unwrap().value();
    assert!((c2 * closed_form(pair, 0) - 1.0).abs() < 1e-14);
    let basis = BasisParams::new(1.5, -25.5, 0).unwrap();
    let v = direct_matrix_element(&basis, Kernel::One, 0, 0, 1e-12).unwrap().value;
    assert!((v - 1.0).abs() < 1e-9, "{v}");
}
