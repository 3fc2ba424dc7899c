//! Bound-state wavefunctions from the finite series
//!
//! ```text
//! ψ_k(r) ∝ (x − 1)^{μ_k/2} (x + 1)^{ν_k/2} Σ_{n=0}^{k} c_n^k f_n P_n^{(μ_k,ν_k)}(x),   x = coth(λr)
//! ```
//!
//! with `μ_k = √(−ε_k)`, `ν_k = −√(−ε_k − 2A)` and the `f_n` from the
//! three-term recursion. The result is not normalized.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::potential::PotentialParams;
use crate::special::{jacobi_sequence, signed_log_gamma, SignedLogMagnitude};
use crate::tra::{expansion_coefficients, EnergyParams};

/// `ln|ψ|` below this is reported as exactly zero.
pub const UNDERFLOW_LOG: f64 = -700.0;

/// Default grid spans `λr ∈ [1e-3, 15]`.
pub const DEFAULT_SAMPLES: usize = 2000;
pub const DEFAULT_LAMBDA_R_MIN: f64 = 1e-3;
pub const DEFAULT_LAMBDA_R_MAX: f64 = 15.0;

/// Series data for one state. `log_terms[n]` is `ln|c_n^k f_n|` with its sign.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StateCoefficients {
    pub energy: EnergyParams,
    pub f: Vec<f64>,
    pub c: Vec<f64>,
    pub log_terms: Vec<SignedLogMagnitude>,
}

impl StateCoefficients {
    pub fn terms(&self) -> usize {
        self.log_terms.len()
    }
}

/// `c_n^k` squared as written: `(2n+μ+ν+1) Γ(n+1) Γ(n+μ+ν+1) / (Γ(n+μ+1) Γ(n+ν+1))`.
fn c_squared_literal(mu: f64, nu: f64, n: usize) -> Result<SignedLogMagnitude> {
    let nf = n as f64;
    let lead = SignedLogMagnitude::from_value(2.0 * nf + mu + nu + 1.0);
    let num = signed_log_gamma(nf + 1.0)?.mul(signed_log_gamma(nf + mu + nu + 1.0)?);
    let den = signed_log_gamma(nf + mu + 1.0)?.mul(signed_log_gamma(nf + nu + 1.0)?);
    lead.mul(num).div(den)
}

/// Energy parameters, expansion coefficients and normalization factors of
/// state `k`. The series has `k + 1` terms unless `terms` overrides it.
///
/// The squared factors all share one sign for admissible parameters; the
/// overall sign is an irrelevant constant, so their magnitudes are used.
pub fn state_coefficients(
    k: usize,
    epsilon_k: f64,
    a: f64,
    b: f64,
    c: f64,
    terms: Option<usize>,
) -> Result<StateCoefficients> {
    let energy = EnergyParams::new(epsilon_k, a)?;
    let count = terms.unwrap_or(k + 1);
    if count == 0 {
        return Err(Error::invalid("series needs at least one term"));
    }
    let top = count - 1;
    if energy.mu + energy.nu >= -2.0 * top as f64 - 1.0 {
        return Err(Error::invalid(format!(
            "μ_k + ν_k = {} is not below −2n − 1 = {} for the highest term n = {top}; \
             the series is not square integrable",
            energy.mu + energy.nu,
            -2.0 * top as f64 - 1.0
        )));
    }
    let f = expansion_coefficients(&energy, b, c, top)?;
    let mut sign = 0i8;
    let mut cs = Vec::with_capacity(count);
    let mut log_terms = Vec::with_capacity(count);
    for n in 0..count {
        let sq = c_squared_literal(energy.mu, energy.nu, n)?;
        if sign == 0 {
            sign = sq.sign;
        } else if sq.sign != sign {
            return Err(Error::NonFinite(format!("normalization factor changes sign at n = {n}")));
        }
        let cn = SignedLogMagnitude { log_abs: 0.5 * sq.log_abs, sign: 1 };
        cs.push(cn.value());
        let fsign = f.mantissa[n].signum() as i8;
        log_terms.push(SignedLogMagnitude { log_abs: cn.log_abs + f.log_abs(n), sign: fsign });
    }
    Ok(StateCoefficients { energy, f: f.values(), c: cs, log_terms })
}

/// Sampled `ψ_k(r)` on a grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WavefunctionTable {
    pub state_index: usize,
    pub r_grid: Vec<f64>,
    pub psi: Vec<f64>,
    pub epsilon: f64,
    pub mu_k: f64,
    pub nu_k: f64,
    pub terms_used: usize,
    /// Points clamped to zero because `|ψ| < e^{−700}`.
    pub underflow_count: usize,
}

/// `count` logarithmically spaced points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0) || !(hi > lo) || !hi.is_finite() {
        return Err(Error::invalid(format!("need 0 < r_min < r_max, got [{lo}, {hi}]")));
    }
    if count < 2 {
        return Err(Error::invalid("grid needs at least two samples"));
    }
    let (a, b) = (lo.ln(), hi.ln());
    let mut g: Vec<f64> = (0..count).map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp()).collect();
    g[0] = lo;
    g[count - 1] = hi;
    Ok(g)
}

pub fn default_grid(lambda: f64) -> Result<Vec<f64>> {
    log_grid(DEFAULT_LAMBDA_R_MIN / lambda, DEFAULT_LAMBDA_R_MAX / lambda, DEFAULT_SAMPLES)
}

/// `(ln(x − 1), ln(x + 1))` at `x = coth(λr)` without forming `x`.
fn log_offsets(lambda_r: f64) -> (f64, f64) {
    let ln2 = std::f64::consts::LN_2;
    let ln_one_minus_q = (-(-2.0 * lambda_r).exp_m1()).ln();
    (ln2 - 2.0 * lambda_r - ln_one_minus_q, ln2 - ln_one_minus_q)
}

fn evaluate(coeffs: &StateCoefficients, lambda_r: f64) -> Result<(f64, bool)> {
    let (mu, nu) = (coeffs.energy.mu, coeffs.energy.nu);
    let (lm, lp) = log_offsets(lambda_r);
    let x = 1.0 + lm.exp();
    let p = jacobi_sequence(coeffs.energy.pair(), coeffs.terms() - 1, x)?;
    let peak = coeffs.log_terms.iter().map(|t| t.log_abs).fold(f64::NEG_INFINITY, f64::max);
    let series: f64 =
        coeffs.log_terms.iter().zip(&p).map(|(t, &pn)| f64::from(t.sign) * (t.log_abs - peak).exp() * pn).sum();
    if series == 0.0 {
        return Ok((0.0, false));
    }
    let log_psi = 0.5 * mu * lm + 0.5 * nu * lp + peak + series.abs().ln();
    if log_psi < UNDERFLOW_LOG {
        return Ok((0.0, true));
    }
    let v = series.signum() * log_psi.exp();
    if !v.is_finite() {
        return Err(Error::NonFinite(format!("ψ overflowed at λr = {lambda_r}")));
    }
    Ok((v, false))
}

pub fn sample_wavefunction(
    k: usize,
    epsilon_k: f64,
    p: &PotentialParams,
    r_grid: &[f64],
    terms: Option<usize>,
) -> Result<WavefunctionTable> {
    if r_grid.is_empty() {
        return Err(Error::invalid("r grid is empty"));
    }
    if r_grid[0] <= 0.0 || r_grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::invalid("r grid must be positive and strictly ascending"));
    }
    let coeffs = state_coefficients(k, epsilon_k, p.a, p.b, p.c, terms)?;
    let mut psi = Vec::with_capacity(r_grid.len());
    let mut underflow_count = 0;
    for &r in r_grid {
        let (v, under) = evaluate(&coeffs, p.lambda * r)?;
        underflow_count += usize::from(under);
        psi.push(v);
    }
    Ok(WavefunctionTable {
        state_index: k,
        r_grid: r_grid.to_vec(),
        psi,
        epsilon: epsilon_k,
        mu_k: coeffs.energy.mu,
        nu_k: coeffs.energy.nu,
        terms_used: coeffs.terms(),
        underflow_count,
    })
}

/// Sign changes between successive non-zero samples.
pub fn count_sign_changes(psi: &[f64]) -> usize {
    let signs: Vec<bool> = psi.iter().filter(|v| **v != 0.0).map(|v| *v > 0.0).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}
