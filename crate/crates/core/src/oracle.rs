//! Brute-force matrix elements by adaptive Gauss–Kronrod integration.
//!
//! Integrals over `x ∈ [1, ∞)` are mapped to the whole line with
//! `x = 1 + e^t`, which turns the algebraic endpoint behaviour at `x = 1`
//! and the power-law tail into exponential decay on both sides. Nothing
//! here touches the Gauss-node machinery of the solver.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hmd::{quadrature_matrix, QuadratureRule};
use crate::linalg::Matrix;
use crate::special::{jacobi_eval, normalization_c, JacobiPair};
use crate::tra::BasisParams;

/// Hard cap on integrand evaluations per integral.
pub const EVALUATION_BUDGET: usize = 10_000_000;

/// Largest degree the oracle accepts.
pub const MAX_ORACLE_DEGREE: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntegrationResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub evaluations: usize,
}

/// Kernels `w(x)` of the matrix elements. Evaluated from `d = x − 1` so
/// the singular ones stay accurate next to `x = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Kernel {
    One,
    X,
    XSquared,
    /// `1/(1 − x)`
    InvOneMinusX,
    /// `1/(1 + x)`
    InvOnePlusX,
    /// `1/(x² − 1)`
    InvXSquaredMinusOne,
}

impl Kernel {
    /// The four kernels the Hamiltonian and overlap are built from.
    pub const HAMILTONIAN: [Kernel; 4] =
        [Kernel::X, Kernel::InvOneMinusX, Kernel::InvOnePlusX, Kernel::InvXSquaredMinusOne];

    pub fn label(&self) -> &'static str {
        match self {
            Kernel::One => "1",
            Kernel::X => "x",
            Kernel::XSquared => "x^2",
            Kernel::InvOneMinusX => "1/(1-x)",
            Kernel::InvOnePlusX => "1/(1+x)",
            Kernel::InvXSquaredMinusOne => "1/(x^2-1)",
        }
    }

    pub fn at(&self, x: f64) -> f64 {
        self.at_offset(x - 1.0)
    }

    /// `w(1 + d)`.
    pub fn at_offset(&self, d: f64) -> f64 {
        match self {
            Kernel::One => 1.0,
            Kernel::X => 1.0 + d,
            Kernel::XSquared => (1.0 + d) * (1.0 + d),
            Kernel::InvOneMinusX => -1.0 / d,
            Kernel::InvOnePlusX => 1.0 / (2.0 + d),
            Kernel::InvXSquaredMinusOne => 1.0 / (d * (d + 2.0)),
        }
    }

    /// Power of `(x − 1)` as `x → 1`.
    fn endpoint_order(&self) -> f64 {
        match self {
            Kernel::InvOneMinusX | Kernel::InvXSquaredMinusOne => -1.0,
            _ => 0.0,
        }
    }

    /// Power of `x` as `x → ∞`.
    fn growth_order(&self) -> f64 {
        match self {
            Kernel::One => 0.0,
            Kernel::X => 1.0,
            Kernel::XSquared => 2.0,
            Kernel::InvOneMinusX | Kernel::InvOnePlusX => -1.0,
            Kernel::InvXSquaredMinusOne => -2.0,
        }
    }
}

// 7-point Gauss / 15-point Kronrod abscissae and weights on [−1, 1].
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> Result<Panel> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for j in 0..7 {
        let f1 = f(c - h * XGK[j]);
        let f2 = f(c + h * XGK[j]);
        k += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            g += WG[j / 2] * (f1 + f2);
        }
    }
    let (value, error) = (k * h, ((k - g) * h).abs());
    if !value.is_finite() || !error.is_finite() {
        return Err(Error::NonFinite(format!("integrand on [{a}, {b}]")));
    }
    Ok(Panel { a, b, value, error })
}

/// Outer end of the significant region in direction `dir`, plus an estimate
/// of the neglected tail mass beyond it.
fn tail_cutoff(g: &impl Fn(f64) -> f64, dir: f64, target: f64) -> Result<(f64, f64)> {
    let mut prev_t = 0.0;
    let mut prev_v = g(0.0).abs();
    let mut t = 1.0;
    while t <= 1.0e4 {
        let v = g(dir * t).abs();
        if v == 0.0 && prev_v == 0.0 {
            return Ok((dir * t, 0.0));
        }
        if v.is_finite() && v > 0.0 && prev_v > 0.0 {
            let slope = (v / prev_v).ln() / (t - prev_t);
            if slope < 0.0 {
                let tail = v / -slope;
                if tail < target {
                    return Ok((dir * t, tail));
                }
            }
        }
        prev_t = t;
        prev_v = v;
        t *= 2.0;
    }
    Err(Error::invalid("integrand does not decay fast enough for the oracle"))
}

/// `∫_{−∞}^{∞} g(t) dt` to absolute tolerance `tol`.
pub fn integrate_line(g: impl Fn(f64) -> f64, tol: f64) -> Result<IntegrationResult> {
    if !(tol >= 1e-12) {
        return Err(Error::invalid(format!("tolerance {tol} below 1e-12")));
    }
    let tail_target = 1e-3 * tol;
    let (a, tail_left) = tail_cutoff(&g, -1.0, tail_target)?;
    let (b, tail_right) = tail_cutoff(&g, 1.0, tail_target)?;
    let tail = tail_left + tail_right;

    let panels = (((b - a) / 0.5).ceil() as usize).max(1);
    let width = (b - a) / panels as f64;
    let mut heap = BinaryHeap::with_capacity(4 * panels);
    let mut evaluations = 0;
    let mut error = 0.0;
    for i in 0..panels {
        let lo = a + width * i as f64;
        let hi = if i + 1 == panels { b } else { lo + width };
        let p = kronrod(&g, lo, hi)?;
        evaluations += 15;
        error += p.error;
        heap.push(p);
    }
    while error + tail > tol {
        if evaluations + 30 > EVALUATION_BUDGET {
            return Err(Error::IntegrationBudget { tolerance: tol, evaluations });
        }
        let worst = heap.pop().expect("non-empty panel set");
        let mid = 0.5 * (worst.a + worst.b);
        let left = kronrod(&g, worst.a, mid)?;
        let right = kronrod(&g, mid, worst.b)?;
        evaluations += 30;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        // the running sum drifts; refresh now and then
        if evaluations % 30_000 == 0 {
            error = heap.iter().map(|p| p.error).sum();
        }
    }
    let value = heap.iter().map(|p| p.value).sum();
    let error = heap.iter().map(|p| p.error).sum::<f64>() + tail;
    Ok(IntegrationResult { value, abs_error_estimate: error, evaluations })
}

fn check_convergence(pair: JacobiPair, kernel: Kernel, degree_sum: usize) -> Result<()> {
    let left = pair.mu + 1.0 + kernel.endpoint_order();
    let right = pair.mu + pair.nu + 1.0 + degree_sum as f64 + kernel.growth_order();
    if left <= 0.0 || right >= 0.0 {
        return Err(Error::invalid(format!(
            "∫ (x−1)^μ (x+1)^ν w P_n P_m dx diverges for μ = {}, ν = {}, w = {}, n + m = {degree_sum}",
            pair.mu,
            pair.nu,
            kernel.label()
        )));
    }
    Ok(())
}

/// `∫₁^∞ (x−1)^μ (x+1)^ν w(x) P_n(x) P_m(x) dx`, unnormalized.
pub fn weighted_integral(pair: JacobiPair, kernel: Kernel, n: usize, m: usize, tol: f64) -> Result<IntegrationResult> {
    scaled_weighted_integral(pair, kernel, n, m, 0.0, tol)
}

/// `e^{log_scale}` times [`weighted_integral`], with the factor applied
/// inside the integrand so `tol` refers to the scaled value.
fn scaled_weighted_integral(
    pair: JacobiPair,
    kernel: Kernel,
    n: usize,
    m: usize,
    log_scale: f64,
    tol: f64,
) -> Result<IntegrationResult> {
    check_convergence(pair, kernel, n + m)?;
    let (mu, nu) = (pair.mu, pair.nu);
    let g = |t: f64| {
        let d = t.exp();
        let x = 1.0 + d;
        let log_weight = log_scale + (mu + 1.0) * t + nu * (2.0 + d).ln();
        let pn = jacobi_eval(pair, n, x).unwrap_or(f64::NAN);
        let pm = jacobi_eval(pair, m, x).unwrap_or(f64::NAN);
        log_weight.exp() * kernel.at_offset(d) * pn * pm
    };
    integrate_line(g, tol)
}

/// The shifted form `∫₀^∞ y^μ (y+1)^ν P_n(2y+1) P_m(2y+1) dy`, via `y = e^t`.
pub fn shifted_overlap_integral(pair: JacobiPair, n: usize, m: usize, tol: f64) -> Result<IntegrationResult> {
    check_convergence(pair, Kernel::One, n + m)?;
    let (mu, nu) = (pair.mu, pair.nu);
    let g = |t: f64| {
        let y = t.exp();
        let x = 2.0 * y + 1.0;
        let pn = jacobi_eval(pair, n, x).unwrap_or(f64::NAN);
        let pm = jacobi_eval(pair, m, x).unwrap_or(f64::NAN);
        ((mu + 1.0) * t + nu * t.exp().ln_1p()).exp() * pn * pm
    };
    integrate_line(g, tol)
}

/// `c_n c_m ∫₁^∞ (x−1)^μ (x+1)^ν w(x) P_n P_m dx`. With `w ≡ 1` this is the
/// identity; `w = x` gives the recursion matrix and `w = 1/(x²−1)` the overlap.
pub fn direct_matrix_element(
    basis: &BasisParams,
    kernel: Kernel,
    n: usize,
    m: usize,
    tol: f64,
) -> Result<IntegrationResult> {
    if n > basis.max_degree || m > basis.max_degree {
        return Err(Error::invalid(format!("index ({n}, {m}) outside basis of degree {}", basis.max_degree)));
    }
    let pair = basis.pair();
    let log_scale = normalization_c(pair, n)?.ln() + normalization_c(pair, m)?.ln();
    scaled_weighted_integral(pair, kernel, n, m, log_scale, tol)
}

/// Full matrix of [`direct_matrix_element`].
pub fn direct_matrix(basis: &BasisParams, kernel: Kernel, tol: f64) -> Result<Matrix<f64>> {
    if basis.max_degree > MAX_ORACLE_DEGREE {
        return Err(Error::invalid(format!("oracle is capped at degree {MAX_ORACLE_DEGREE}")));
    }
    let n = basis.size();
    let mut out = Matrix::zeros(n);
    for i in 0..n {
        for j in 0..=i {
            let v = direct_matrix_element(basis, kernel, i, j, tol)?.value;
            out[(i, j)] = v;
            out[(j, i)] = v;
        }
    }
    Ok(out)
}

/// Largest entrywise gap between the Gauss-rule matrix and the direct integrals.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelDiscrepancy {
    pub kernel: Kernel,
    pub label: &'static str,
    pub max_abs_discrepancy: f64,
    pub max_abs_entry: f64,
}

pub fn quadrature_discrepancy(basis: &BasisParams, kernel: Kernel, tol: f64) -> Result<KernelDiscrepancy> {
    let rule = QuadratureRule::<f64>::for_basis(basis)?;
    let approx = quadrature_matrix(&rule, |t| kernel.at(t))?;
    let exact = direct_matrix(basis, kernel, tol)?;
    Ok(KernelDiscrepancy {
        kernel,
        label: kernel.label(),
        max_abs_discrepancy: approx.sub(&exact).max_abs(),
        max_abs_entry: exact.max_abs(),
    })
}
