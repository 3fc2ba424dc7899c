//! Hamiltonian matrix diagonalization in the energy-independent basis.
//!
//! The coordinate operator `x` is tridiagonal in the Jacobi basis, with
//! diagonal `F_n` and off-diagonal `D_n`. Its eigen-decomposition
//! `X = Λ diag(τ) Λᵀ` is a Gauss rule for the basis weight, and any
//! `⟨φ_m| W(x) |φ_n⟩` is approximated by `Λ diag(W(τ)) Λᵀ`. The Hamiltonian
//! (stored in units of `λ²/2`) and the overlap are
//!
//! ```text
//! H = diag(¼ − B − (n + (μ+ν+1)/2)²) + C X + (μ²/2) Λ Ω₋ Λᵀ + ((ν²+A)/2) Λ Ω₊ Λᵀ
//! ω = −Λ Ω̃ Λᵀ,    (Ω±)_nn = 1/(1 ± τ_n),  Ω̃_nn = 1/(1 − τ_n²)
//! ```
//!
//! and the generalized eigenvalues of `(H, ω)` are `ε = 2E/λ²`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{symmetric_eigen, Cholesky, Matrix, SymTridiagonal};
use crate::potential::PotentialParams;
use crate::real::Real;
use crate::tra::{BasisParams, RecursionCoeffs};

/// Eigenvalues above this are not treated as bound states.
pub const BOUND_STATE_THRESHOLD: f64 = -1e-10;

/// Successive relative change below which neighbouring μ points agree.
pub const PLATEAU_TOLERANCE: f64 = 1e-6;

/// Smallest admissible `|1 ± τ_n|`.
pub const NODE_GUARD: f64 = 1e-12;

/// Truncated coordinate matrix `X`.
pub fn build_x_matrix<T: Real>(basis: &BasisParams) -> Result<SymTridiagonal<T>> {
    let rc = RecursionCoeffs::<T>::compute(basis.mu, basis.nu, basis.max_degree)?;
    Ok(SymTridiagonal::new(rc.f, rc.d))
}

/// Gauss nodes `τ` and the orthogonal transform `Λ` (column `k` ↔ `τ_k`).
#[derive(Debug, Clone)]
pub struct QuadratureRule<T = f64> {
    pub tau: Vec<T>,
    pub lambda: Matrix<T>,
}

impl<T: Real> QuadratureRule<T> {
    pub fn for_basis(basis: &BasisParams) -> Result<Self> {
        symtridiag_eig(&build_x_matrix(basis)?)
    }

    pub fn size(&self) -> usize {
        self.tau.len()
    }

    pub fn min_node(&self) -> T {
        self.tau.iter().copied().fold(T::infinity(), T::min)
    }
}

/// Eigen-decomposition of `X` as a quadrature rule.
pub fn symtridiag_eig<T: Real>(x: &SymTridiagonal<T>) -> Result<QuadratureRule<T>> {
    let eig = x.eigen()?;
    Ok(QuadratureRule { tau: eig.values, lambda: eig.vectors })
}

/// `Λ diag(w(τ)) Λᵀ`.
pub fn quadrature_matrix<T: Real>(rule: &QuadratureRule<T>, w: impl Fn(T) -> T) -> Result<Matrix<T>> {
    let weights = rule
        .tau
        .iter()
        .enumerate()
        .map(|(k, &t)| {
            let v = w(t);
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::NonFinite(format!("kernel at node τ_{k} = {:e}", t.to_f64_lossy())))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Matrix::congruence_diag(&rule.lambda, &weights))
}

/// Hamiltonian (units of `λ²/2`) and overlap in the Jacobi basis.
#[derive(Debug, Clone)]
pub struct AssembledSystem<T = f64> {
    pub h: Matrix<T>,
    pub omega: Matrix<T>,
}

fn check_nodes<T: Real>(rule: &QuadratureRule<T>) -> Result<()> {
    for (n, &t) in rule.tau.iter().enumerate() {
        let t = t.to_f64_lossy();
        if (1.0 - t).abs() < NODE_GUARD || (1.0 + t).abs() < NODE_GUARD {
            return Err(Error::DegenerateDenominator { context: "1 ± τ_n", n });
        }
    }
    Ok(())
}

/// Diagonal `¼ − B − (n + (μ+ν+1)/2)²` of the kinetic plus `B` part.
fn kinetic_diagonal<T: Real>(basis: &BasisParams, b: f64) -> Vec<T> {
    let shift = T::lit(0.5) * (T::lit(basis.mu) + T::lit(basis.nu) + T::one());
    (0..basis.size())
        .map(|n| {
            let t = T::from_usize(n) + shift;
            T::lit(0.25) - T::lit(b) - t * t
        })
        .collect()
}

/// Potential and centrifugal weights at each node: `Cτ + μ²/(2(1−τ)) + (ν²+A)/(2(1+τ))`.
fn node_potential<T: Real>(basis: &BasisParams, p: &PotentialParams, tau: T) -> T {
    let half = T::lit(0.5);
    let mu = T::lit(basis.mu);
    let nu = T::lit(basis.nu);
    T::lit(p.c) * tau + half * mu * mu / (T::one() - tau) + half * (nu * nu + T::lit(p.a)) / (T::one() + tau)
}

pub fn assemble_system<T: Real>(basis: &BasisParams, p: &PotentialParams) -> Result<AssembledSystem<T>> {
    let rule = QuadratureRule::<T>::for_basis(basis)?;
    assemble_with_rule(basis, p, &rule)
}

pub fn assemble_with_rule<T: Real>(
    basis: &BasisParams,
    p: &PotentialParams,
    rule: &QuadratureRule<T>,
) -> Result<AssembledSystem<T>> {
    check_nodes(rule)?;
    let v = quadrature_matrix(rule, |t| node_potential(basis, p, t))?;
    let h = v.add(&Matrix::from_diagonal(&kinetic_diagonal::<T>(basis, p.b))).symmetrized();
    let omega = quadrature_matrix(rule, |t| T::one() / (t * t - T::one()))?.symmetrized();
    Ok(AssembledSystem { h, omega })
}

/// All generalized eigenvalues, ascending, with per-pair relative residuals
/// `‖Hf − εωf‖ / (‖H‖ ‖f‖)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeneralizedSpectrum {
    pub values: Vec<f64>,
    pub residuals: Vec<f64>,
}

impl GeneralizedSpectrum {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

fn pair_residuals<T: Real>(sys: &AssembledSystem<T>, values: &[T], vectors: &[Vec<T>]) -> Vec<f64> {
    let scale = sys.h.max_abs().max(T::min_positive_value());
    values
        .iter()
        .zip(vectors)
        .map(|(&e, f)| {
            let hf = sys.h.matvec(f);
            let wf = sys.omega.matvec(f);
            let num = hf.iter().zip(&wf).fold(T::zero(), |m, (&a, &b)| m.max((a - e * b).abs()));
            let fnorm = f.iter().fold(T::zero(), |m, &x| m.max(x.abs()));
            (num / (scale * fnorm)).to_f64_lossy()
        })
        .collect()
}

/// Symmetric-definite reduction: `ω = LLᵀ`, eigen-solve `L⁻¹HL⁻ᵀ`, back-transform.
pub fn generalized_spectrum<T: Real>(sys: &AssembledSystem<T>) -> Result<GeneralizedSpectrum> {
    let chol = Cholesky::factor(&sys.omega)?;
    let eig = symmetric_eigen(&chol.reduce(&sys.h))?;
    let vectors: Vec<Vec<T>> = (0..eig.values.len()).map(|k| chol.solve_upper(&eig.vectors.column(k))).collect();
    let residuals = pair_residuals(sys, &eig.values, &vectors);
    Ok(GeneralizedSpectrum { values: eig.values.iter().map(|v| v.to_f64_lossy()).collect(), residuals })
}

/// Same pencil solved in the node basis, where the overlap is diagonal:
/// `ΛᵀωΛ = diag(1/(τ²−1))`. With `S = diag(√(τ²−1))` the problem becomes the
/// ordinary symmetric `S ΛᵀHΛ S y = ε y`, `f = Λ S y`.
pub fn nodal_spectrum<T: Real>(basis: &BasisParams, p: &PotentialParams) -> Result<GeneralizedSpectrum> {
    let rule = QuadratureRule::<T>::for_basis(basis)?;
    check_nodes(&rule)?;
    if !(rule.min_node() > T::one()) {
        return Err(Error::invalid(format!("Gauss node τ = {:e} is not above 1", rule.min_node().to_f64_lossy())));
    }
    let n = rule.size();
    let lam = &rule.lambda;
    let s: Vec<T> = rule.tau.iter().map(|&t| (t * t - T::one()).sqrt()).collect();
    let g = kinetic_diagonal::<T>(basis, p.b);
    // Λᵀ diag(g) Λ
    let kin = Matrix::congruence_diag(&lam.transpose(), &g);
    let m = Matrix::from_fn(n, |i, j| {
        let mut v = s[i] * kin[(i, j)] * s[j];
        if i == j {
            v = v + s[i] * s[i] * node_potential(basis, p, rule.tau[i]);
        }
        v
    })
    .symmetrized();
    let eig = symmetric_eigen(&m)?;
    let vectors: Vec<Vec<T>> = (0..n)
        .map(|k| {
            let y: Vec<T> = eig.vectors.column(k).iter().zip(&s).map(|(&a, &b)| a * b).collect();
            lam.matvec(&y)
        })
        .collect();
    let sys = assemble_with_rule(basis, p, &rule)?;
    let residuals = pair_residuals(&sys, &eig.values, &vectors);
    Ok(GeneralizedSpectrum { values: eig.values.iter().map(|v| v.to_f64_lossy()).collect(), residuals })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumDiagnostics {
    /// Eigenvalues below zero before thresholding.
    pub raw_negative_count: usize,
    /// Eigenvalues at or above the bound-state threshold.
    pub discarded_count: usize,
    pub max_relative_residual: f64,
    pub solver: String,
    pub precision: String,
}

/// Bound part of a spectrum: `ε_k < 0` ascending and `−ε_k` descending.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundSpectrum {
    pub epsilons: Vec<f64>,
    pub report_units: Vec<f64>,
    pub basis_size: usize,
    pub mu_used: f64,
    pub nu_used: f64,
    pub diagnostics: SpectrumDiagnostics,
}

impl BoundSpectrum {
    pub fn len(&self) -> usize {
        self.epsilons.len()
    }

    pub fn is_empty(&self) -> bool {
        self.epsilons.is_empty()
    }
}

/// Keeps eigenvalues below [`BOUND_STATE_THRESHOLD`].
pub fn bound_states(eigs: &GeneralizedSpectrum, basis: &BasisParams, solver: &str, precision: &str) -> BoundSpectrum {
    let mut epsilons: Vec<f64> = eigs.values.iter().copied().filter(|&e| e < BOUND_STATE_THRESHOLD).collect();
    epsilons.sort_by(f64::total_cmp);
    let report_units = epsilons.iter().map(|e| -e).collect();
    BoundSpectrum {
        report_units,
        basis_size: basis.size(),
        mu_used: basis.mu,
        nu_used: basis.nu,
        diagnostics: SpectrumDiagnostics {
            raw_negative_count: eigs.values.iter().filter(|&&e| e < 0.0).count(),
            discarded_count: eigs.values.len() - epsilons.len(),
            max_relative_residual: eigs.max_residual(),
            solver: solver.to_string(),
            precision: precision.to_string(),
        },
        epsilons,
    }
}

/// One μ grid point of a plateau scan.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlateauRow {
    pub mu: f64,
    pub nu: f64,
    /// `−ε_k`, deepest state first.
    pub minus_epsilon: Vec<f64>,
}

/// Longest stable μ-window of one state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatePlateau {
    pub state: usize,
    /// `[μ_start, μ_end]`, absent when no two neighbours agree.
    pub mu_range: Option<(f64, f64)>,
    /// max − min of `−ε_k` over the window.
    pub delta: Option<f64>,
}

impl StatePlateau {
    pub fn contains(&self, mu: f64) -> bool {
        self.mu_range.is_some_and(|(a, b)| a <= mu && mu <= b)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlateauScan {
    pub basis_size: usize,
    pub rows: Vec<PlateauRow>,
    pub states: Vec<StatePlateau>,
}

/// Longest run of neighbouring points agreeing to `PLATEAU_TOLERANCE`;
/// the first one wins ties. Returns the inclusive index range.
fn longest_stable_run(values: &[Option<f64>]) -> Option<(usize, usize)> {
    let stable = |i: usize| match (values[i], values[i + 1]) {
        (Some(a), Some(b)) => ((b - a) / a).abs() < PLATEAU_TOLERANCE,
        _ => false,
    };
    let mut best: Option<(usize, usize)> = None;
    let mut start = None;
    for i in 0..values.len().saturating_sub(1) {
        if stable(i) {
            let s = *start.get_or_insert(i);
            if best.is_none_or(|(a, b)| i + 1 - s > b - a) {
                best = Some((s, i + 1));
            }
        } else {
            start = None;
        }
    }
    best
}

fn summarize(rows: &[PlateauRow]) -> Vec<StatePlateau> {
    let states = rows.iter().map(|r| r.minus_epsilon.len()).max().unwrap_or(0);
    (0..states)
        .map(|k| {
            let column: Vec<Option<f64>> = rows.iter().map(|r| r.minus_epsilon.get(k).copied()).collect();
            match longest_stable_run(&column) {
                Some((a, b)) => {
                    let window = column[a..=b].iter().flatten();
                    let hi = window.clone().copied().fold(f64::NEG_INFINITY, f64::max);
                    let lo = window.copied().fold(f64::INFINITY, f64::min);
                    StatePlateau { state: k, mu_range: Some((rows[a].mu, rows[b].mu)), delta: Some(hi - lo) }
                }
                None => StatePlateau { state: k, mu_range: None, delta: None },
            }
        })
        .collect()
}

/// Bound spectra over an ascending μ grid with `ν = nu_rule(μ)`, solved in
/// parallel. Every grid point is validated before any work starts.
pub fn plateau_scan<S, R>(
    p: &PotentialParams,
    size: usize,
    mu_grid: &[f64],
    nu_rule: R,
    solve: S,
) -> Result<PlateauScan>
where
    R: Fn(f64) -> f64,
    S: Fn(&BasisParams, &PotentialParams) -> Result<BoundSpectrum> + Sync,
{
    if mu_grid.is_empty() {
        return Err(Error::invalid("μ grid is empty"));
    }
    if mu_grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::invalid("μ grid must be strictly ascending"));
    }
    let bases = mu_grid
        .iter()
        .map(|&mu| {
            BasisParams::with_size(mu, nu_rule(mu), size)
                .map_err(|e| Error::invalid(format!("grid point μ = {mu}: {e}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let rows = bases
        .par_iter()
        .map(|b| solve(b, p).map(|s| PlateauRow { mu: b.mu, nu: b.nu, minus_epsilon: s.report_units }))
        .collect::<Result<Vec<_>>>()?;
    Ok(PlateauScan { basis_size: size, states: summarize(&rows), rows })
}

/// `count` evenly spaced points from `lo` to `hi` inclusive.
pub fn linear_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..count).map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64).collect(),
    }
}
