//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Criterion 3 is known to be unattainable: the Gauss-rule matrices of the
//! singular kernels differ from the exact integrals by O(0.1..1), not 1e-7.
//! It is still evaluated in full and reported as FAIL. Only unexpected
//! failures make the process exit non-zero.

use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tra_spectrum::hmd::{assemble_system, QuadratureRule};
use tra_spectrum::linalg::Cholesky;
use tra_spectrum::oracle::{direct_matrix_element, quadrature_discrepancy, shifted_overlap_integral, Kernel};
use tra_spectrum::potential::{classify_shape, max_basis_index};
use tra_spectrum::solver::{plateau_scan, TableRule};
use tra_spectrum::special::{jacobi_eval, normalization_c_squared, JacobiPair};
use tra_spectrum::tra::{d_coefficient, f_coefficient, g_squared_form, h_polynomial_sequence};
use tra_spectrum::wavefunction::{count_sign_changes, default_grid, log_grid, sample_wavefunction};
use tra_spectrum::{BasisParams, DoubleDouble, PotentialParams, Real, SolverRegistry, SpectrumSolver};

const SEED: u64 = 0x0007_ab1e_0001;

const REFERENCE: [(usize, [f64; 5]); 4] = [
    (10, [249.6186960, 121.1023091, 54.5612094, 20.1791388, 4.8218491]),
    (20, [249.6474349, 121.1387777, 54.5922339, 20.1738603, 4.2733151]),
    (50, [249.6474353, 121.1387781, 54.5922342, 20.1738321, 4.2434960]),
    (100, [249.6474353, 121.1387781, 54.5922342, 20.1738321, 4.2427578]),
];

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Self { passed, detail: detail.into() }
    }
}

fn potential(lambda: f64) -> PotentialParams {
    PotentialParams::new(-300.0, 5.0, 3.0, lambda).unwrap()
}

fn table_basis(size: usize) -> BasisParams {
    BasisParams::with_size(1.5, -2.0 * size as f64 - 3.5, size).unwrap()
}

fn solver() -> Box<dyn SpectrumSolver> {
    Box::new(tra_spectrum::solver::CholeskySolver::<DoubleDouble>::new())
}

fn reference_spectrum() -> Outcome {
    let s = solver();
    let mut worst: f64 = 0.0;
    let mut notes = Vec::new();
    let mut ok = true;
    for (size, expected) in REFERENCE {
        let start = Instant::now();
        let spec = s.solve(&table_basis(size), &potential(1.0)).unwrap();
        let elapsed = start.elapsed().as_secs_f64();
        if spec.len() != 5 {
            ok = false;
            notes.push(format!("N={size}: {} states", spec.len()));
            continue;
        }
        for (got, want) in spec.report_units.iter().zip(expected) {
            worst = worst.max((got - want).abs());
        }
        if size == 100 {
            notes.push(format!("N=100 solve {elapsed:.2} s"));
            ok &= elapsed < 5.0;
        }
    }
    ok &= worst < 5e-7;
    notes.insert(0, format!("max |Δ| over 20 entries = {worst:.2e} (limit 5e-7)"));
    Outcome::new(ok, notes.join(", "))
}

fn convergence() -> Outcome {
    let s = solver();
    let a = s.solve(&table_basis(50), &potential(1.0)).unwrap().report_units;
    let b = s.solve(&table_basis(100), &potential(1.0)).unwrap().report_units;
    if a.len() != 5 || b.len() != 5 {
        return Outcome::new(false, format!("state counts {} and {}", a.len(), b.len()));
    }
    let diffs: Vec<f64> = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).collect();
    let ok = diffs[..4].iter().all(|&d| d < 1e-6) && diffs[4] < 1e-2;
    let shown: Vec<String> = diffs.iter().map(|d| format!("{d:.1e}")).collect();
    Outcome::new(ok, format!("|ε(50) − ε(100)| per state = [{}]", shown.join(", ")))
}

fn quadrature_vs_oracle() -> Outcome {
    let mut worst_x: f64 = 0.0;
    let mut worst = [0.0f64; 3];
    for size in 1..=5 {
        let basis = table_basis(size);
        for kernel in Kernel::HAMILTONIAN {
            let d = quadrature_discrepancy(&basis, kernel, 1e-12).unwrap().max_abs_discrepancy;
            match kernel {
                Kernel::X => worst_x = worst_x.max(d),
                Kernel::InvOneMinusX => worst[0] = worst[0].max(d),
                Kernel::InvOnePlusX => worst[1] = worst[1].max(d),
                _ => worst[2] = worst[2].max(d),
            }
        }
    }
    let ok = worst_x < 1e-9 && worst.iter().all(|&d| d < 1e-7);
    Outcome::new(
        ok,
        format!(
            "N ≤ 4: w=x {worst_x:.1e} (limit 1e-9); 1/(1−x) {:.2}, 1/(1+x) {:.3}, 1/(x²−1) {:.2} (limit 1e-7)",
            worst[0], worst[1], worst[2]
        ),
    )
}

fn jacobi_identities(rng: &mut ChaCha8Rng) -> Outcome {
    let (mut orth, mut shifted, mut sym, mut de): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
    for _ in 0..20 {
        let big_n = rng.gen_range(0..=4usize);
        let mu = rng.gen_range(-0.5..2.0);
        let nu = -2.0 * big_n as f64 - 1.0 - mu - rng.gen_range(0.5..3.0);
        let pair = JacobiPair::new(mu, nu);
        let basis = BasisParams::new(mu, nu, big_n).unwrap();
        let shift = 2f64.powf(mu + nu + 1.0);
        for n in 0..=big_n {
            let diag = 1.0 / (normalization_c_squared(pair, n).unwrap().value() * shift);
            for m in 0..=n {
                let delta = if n == m { 1.0 } else { 0.0 };
                let v = direct_matrix_element(&basis, Kernel::One, n, m, 1e-11).unwrap().value;
                orth = orth.max((v - delta).abs());
                let w = shifted_overlap_integral(pair, n, m, 1e-12).unwrap().value;
                shifted = shifted.max((w - delta * diag).abs() / diag);
            }
        }
        for _ in 0..5 {
            let n = rng.gen_range(0..=big_n);
            let x: f64 = rng.gen_range(1.01..10.0);
            let a = jacobi_eval(pair, n, x).unwrap();
            let b = jacobi_eval(pair.swapped(), n, -x).unwrap();
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            sym = sym.max((a - sign * b).abs() / a.abs().max(1e-300));

            let h = 1e-4 * x;
            let p = |t: f64| jacobi_eval(pair, n, t).unwrap();
            let (pm, p0, pp) = (p(x - h), p(x), p(x + h));
            let nf = n as f64;
            let terms = [
                (1.0 - x * x) * (pp - 2.0 * p0 + pm) / (h * h),
                -((mu + nu + 2.0) * x + mu - nu) * (pp - pm) / (2.0 * h),
                nf * (nf + mu + nu + 1.0) * p0,
            ];
            let scale = terms.iter().fold(p0.abs(), |m, t| m.max(t.abs()));
            de = de.max(terms.iter().sum::<f64>().abs() / scale);
        }
    }
    let ok = orth < 1e-8 && shifted < 1e-8 && sym < 1e-10 && de < 1e-6;
    Outcome::new(
        ok,
        format!(
            "20 random sets: orthonormality {orth:.1e}, shifted form {shifted:.1e}, symmetry {sym:.1e}, ODE residual {de:.1e}"
        ),
    )
}

fn recursion_consistency(rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let n_max = rng.gen_range(1..12usize);
        let mu = rng.gen_range(-0.9..6.0);
        let nu = -2.0 * n_max as f64 - 1.0 - mu - rng.gen_range(0.3..30.0);
        let c = rng.gen_range(0.2..10.0);
        let b = c * rng.gen_range(1.0..4.0);
        let f = h_polynomial_sequence(JacobiPair::new(mu, nu), b, c, n_max).unwrap().values();
        for n in 0..n_max {
            let g = g_squared_form(mu, nu, n);
            let fc = f_coefficient::<f64>(mu, nu, n).unwrap();
            let d = d_coefficient::<f64>(mu, nu, n).unwrap();
            let back = if n == 0 { 0.0 } else { d_coefficient::<f64>(mu, nu, n - 1).unwrap() * f[n - 1] };
            let r = (b / c) * f[n] - (-g / c + fc) * f[n] - back - d * f[n + 1];
            worst = worst.max(r.abs() / (1.0 + f[n].abs()));
        }
    }
    Outcome::new(worst < 1e-10, format!("50 random sets: max residual/(1+|f_n|) = {worst:.1e} (limit 1e-10)"))
}

fn structural_invariants(rng: &mut ChaCha8Rng) -> Outcome {
    let mut min_tau = f64::INFINITY;
    for _ in 0..100 {
        let size = rng.gen_range(1..=60usize);
        let mu = rng.gen_range(-0.99..8.0);
        let nu = -2.0 * size as f64 - 1.0 - mu - rng.gen_range(1e-3..40.0);
        let basis = BasisParams::with_size(mu, nu, size).unwrap();
        if let Ok(rule) = QuadratureRule::<f64>::for_basis(&basis) {
            min_tau = min_tau.min(rule.min_node() - 1.0);
        }
    }
    let s = solver();
    let cap = max_basis_index(-300.0).unwrap() + 1;
    let mut spd = true;
    let mut lambda_gap: f64 = 0.0;
    let mut max_count = 0;
    for (size, _) in REFERENCE {
        let basis = table_basis(size);
        let rule = QuadratureRule::<DoubleDouble>::for_basis(&basis).unwrap();
        min_tau = min_tau.min((rule.min_node() - DoubleDouble::one()).to_f64_lossy());
        let sys = assemble_system::<DoubleDouble>(&basis, &potential(1.0)).unwrap();
        spd &= Cholesky::factor(&sys.omega).is_ok();
        let reference = s.solve(&basis, &potential(1.0)).unwrap();
        max_count = max_count.max(reference.len());
        for lambda in [0.5, 2.0] {
            let other = s.solve(&basis, &potential(lambda)).unwrap();
            if other.len() != reference.len() {
                lambda_gap = f64::INFINITY;
                continue;
            }
            for (a, b) in other.epsilons.iter().zip(&reference.epsilons) {
                lambda_gap = lambda_gap.max((a - b).abs() / b.abs());
            }
        }
    }
    for size in [1, 2, 3, 5, 8, 30] {
        max_count = max_count.max(s.solve(&table_basis(size), &potential(1.0)).unwrap().len());
    }
    let ok = min_tau > 0.0 && spd && lambda_gap <= 1e-12 && max_count <= cap;
    Outcome::new(
        ok,
        format!(
            "min τ − 1 = {min_tau:.2e}; ω positive definite: {spd}; λ spread {lambda_gap:.1e}; max count {max_count} ≤ {cap}"
        ),
    )
}

fn wavefunction_shape() -> Outcome {
    let p = potential(1.0);
    let eps =
        SolverRegistry::with_builtins().get("cholesky-f64").unwrap().solve(&table_basis(100), &p).unwrap().epsilons;
    if eps.len() != 5 {
        return Outcome::new(false, format!("{} states", eps.len()));
    }
    let fine = log_grid(1e-3, 15.0, 10_000).unwrap();
    let grid = default_grid(1.0).unwrap();
    let mut nodes = Vec::new();
    let mut worst_slope: f64 = 0.0;
    let mut origin = true;
    for (k, &e) in eps.iter().enumerate() {
        nodes.push(count_sign_changes(&sample_wavefunction(k, e, &p, &fine, None).unwrap().psi));
        let t = sample_wavefunction(k, e, &p, &grid, None).unwrap();
        let m = t.psi.len();
        let (r0, r1) = (t.r_grid[m - 50], t.r_grid[m - 1]);
        let slope = (t.psi[m - 1].abs().ln() - t.psi[m - 50].abs().ln()) / (r1 - r0);
        worst_slope = worst_slope.max((slope / -t.mu_k - 1.0).abs());
        let a: Vec<f64> = t.psi[..3].iter().map(|v| v.abs()).collect();
        origin &= a[0] < a[1] && a[1] < a[2];
    }
    let ok = nodes == [0, 1, 2, 3, 4] && worst_slope < 0.01 && origin;
    Outcome::new(
        ok,
        format!(
            "sign changes {nodes:?}; tail slope off by {:.2e} relative; |ψ| decreasing towards r=0: {origin}",
            worst_slope
        ),
    )
}

fn plateau() -> Outcome {
    let s = solver();
    let grid: Vec<f64> = (5..=30).map(|i| i as f64 / 10.0).collect();
    let scan = plateau_scan(s.as_ref(), &TableRule, &potential(1.0), 100, &grid).unwrap();
    if scan.states.len() != 5 {
        return Outcome::new(false, format!("{} states in scan", scan.states.len()));
    }
    let all_contain = scan.states.iter().all(|st| st.contains(1.5));
    let d0 = scan.states[0].delta.unwrap_or(f64::INFINITY);
    let d4 = scan.states[4].delta.unwrap_or(f64::INFINITY);
    let ranges: Vec<String> = scan
        .states
        .iter()
        .map(|st| match st.mu_range {
            Some((a, b)) => format!("[{a:.1}, {b:.1}]"),
            None => "none".into(),
        })
        .collect();
    Outcome::new(all_contain && d0 <= d4, format!("plateaus {}; Δ_0 = {d0:.1e}, Δ_4 = {d4:.1e}", ranges.join(" ")))
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn shape_analysis() -> Outcome {
    let wide = PotentialParams::new(17.0, 7.0, 1.0, 1.0).unwrap();
    let report = classify_shape(&wide).unwrap();
    let extrema: Vec<f64> = report.extrema.iter().map(|e| e.x).collect();
    let extrema_ok = extrema.len() == 2 && extrema[0] == 2.0 && (extrema[1] - 8.0 / 3.0).abs() < 1e-15;

    let well = PotentialParams::new(-2.0, 2.0, 1.0, 1.0).unwrap();
    let report = classify_shape(&well).unwrap();
    let crossings: Vec<f64> = report.crossings.iter().map(|c| c.x).collect();
    // independent check: scan U(x) for sign changes away from x = 1 and bisect
    let u = |x: f64| well.u_of_x(x);
    let mut roots = Vec::new();
    let mut x = 1.0 + 1e-6;
    while x < 100.0 {
        let next = x + 0.01;
        if (u(x) > 0.0) != (u(next) > 0.0) {
            roots.push(bisect(u, x, next));
        }
        x = next;
    }
    let exact = 0.5 * (1.0 + 17f64.sqrt());
    let crossing_ok = crossings.len() == 1
        && roots.len() == 1
        && (crossings[0] - roots[0]).abs() < 1e-9
        && (crossings[0] - exact).abs() < 1e-12;
    Outcome::new(
        extrema_ok && crossing_ok,
        format!("γ=7, ξ=17 extrema {extrema:?}; γ=2, ξ=−2 crossings {crossings:?}, bisection {roots:?}"),
    )
}

fn main() -> ExitCode {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let runs: Vec<(u8, &str, bool, Outcome)> = vec![
        (1, "reference spectrum", false, reference_spectrum()),
        (2, "convergence N=50 vs N=100", false, convergence()),
        (3, "quadrature vs direct integration", true, quadrature_vs_oracle()),
        (4, "Jacobi identities", false, jacobi_identities(&mut rng)),
        (5, "recursion consistency", false, recursion_consistency(&mut rng)),
        (6, "structural invariants", false, structural_invariants(&mut rng)),
        (7, "wavefunction properties", false, wavefunction_shape()),
        (8, "plateau of stability", false, plateau()),
        (9, "shape analysis", false, shape_analysis()),
    ];
    let mut unexpected = 0;
    for (id, title, known, outcome) in &runs {
        let verdict = if outcome.passed { "PASS" } else { "FAIL" };
        let tag = if *known && !outcome.passed { " [known unattainable]" } else { "" };
        println!("criterion {id}: {verdict}{tag}  {title}: {}", outcome.detail);
        if !outcome.passed && !known {
            unexpected += 1;
        }
    }
    let passed = runs.iter().filter(|r| r.3.passed).count();
    println!("acceptance: {passed}/{} passed, {unexpected} unexpected failure(s)", runs.len());
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
