//! Parameter algebra of the tridiagonal representation.
//!
//! With the basis `φ_n = c_n (x−1)^{μ/2} (x+1)^{ν/2} P_n^{(μ,ν)}(x)` the wave
//! operator is tridiagonal, and the expansion coefficients `f_n` of a bound
//! state obey the symmetric three-term recursion
//!
//! ```text
//! (B/C) f_n = {−G_n/C + F_n} f_n + D_{n−1} f_{n−1} + D_n f_{n+1}
//! F_n = (ν² − μ²) / [(2n+μ+ν)(2n+μ+ν+2)]
//! D_n = 2/(2n+μ+ν+2) · √[(n+1)(n+μ+1)(n+ν+1)(n+μ+ν+1) / ((2n+μ+ν+1)(2n+μ+ν+3))]
//! G_n = ¼ (2n+μ+ν)(2n+μ+ν+2) = (n + (μ+ν+1)/2)² − ¼
//! ```
//!
//! whose solution with `f_0 = 1` is the polynomial sequence `H_n`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::real::Real;
use crate::special::{JacobiPair, DEGENERATE_TOL};

/// Computational basis: Jacobi pair plus the highest polynomial degree.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BasisParams {
    pub mu: f64,
    pub nu: f64,
    /// Highest polynomial degree; the basis has `max_degree + 1` elements.
    pub max_degree: usize,
}

impl BasisParams {
    /// Requires `μ > −1` and `μ + ν < −2·max_degree − 1`.
    pub fn new(mu: f64, nu: f64, max_degree: usize) -> Result<Self> {
        JacobiPair::new(mu, nu).check_basis(max_degree)?;
        Ok(Self { mu, nu, max_degree })
    }

    /// Basis with `size` elements (degrees `0..size`).
    pub fn with_size(mu: f64, nu: f64, size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::invalid("basis size must be at least 1"));
        }
        Self::new(mu, nu, size - 1)
    }

    pub fn size(&self) -> usize {
        self.max_degree + 1
    }

    pub fn pair(&self) -> JacobiPair {
        JacobiPair::new(self.mu, self.nu)
    }

    /// `α = μ/2`.
    pub fn alpha(&self) -> f64 {
        0.5 * self.mu
    }

    /// `β = −ν/2`.
    pub fn beta(&self) -> f64 {
        -0.5 * self.nu
    }
}

/// Energy-dependent Jacobi parameters `μ = √(−ε)`, `ν = −√(−ε − 2A)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyParams {
    /// `ε = 2E/λ²`.
    pub epsilon: f64,
    pub a: f64,
    pub mu: f64,
    pub nu: f64,
}

impl EnergyParams {
    pub fn new(epsilon: f64, a: f64) -> Result<Self> {
        if !epsilon.is_finite() || !a.is_finite() {
            return Err(Error::invalid("ε and A must be finite"));
        }
        if epsilon >= 0.0 {
            return Err(Error::invalid(format!("ε = {epsilon} must be negative")));
        }
        let radicand = -epsilon - 2.0 * a;
        if radicand <= 0.0 {
            return Err(Error::invalid(format!("ε + 2A = {} must be negative", -radicand)));
        }
        Ok(Self { epsilon, a, mu: (-epsilon).sqrt(), nu: -radicand.sqrt() })
    }

    pub fn pair(&self) -> JacobiPair {
        JacobiPair::new(self.mu, self.nu)
    }
}

/// [`EnergyParams::new`].
pub fn energy_params(epsilon: f64, a: f64) -> Result<EnergyParams> {
    EnergyParams::new(epsilon, a)
}

/// The sequences `F_0..F_N`, `D_0..D_{N−1}` and `G_0..G_N`.
#[derive(Debug, Clone, PartialEq)]
pub struct RecursionCoeffs<T = f64> {
    pub f: Vec<T>,
    pub d: Vec<T>,
    pub g: Vec<T>,
}

fn checked<T: Real>(v: T, context: &'static str, n: usize) -> Result<T> {
    if v.abs().to_f64_lossy() < DEGENERATE_TOL {
        Err(Error::DegenerateDenominator { context, n })
    } else {
        Ok(v)
    }
}

/// `F_n`. Zero whenever `ν² = μ²`, including the `0/0` case at `μ + ν = 0`.
pub fn f_coefficient<T: Real>(mu: f64, nu: f64, n: usize) -> Result<T> {
    let (mu_t, nu_t, two) = (T::lit(mu), T::lit(nu), T::lit(2.0));
    let diff = nu_t * nu_t - mu_t * mu_t;
    if diff == T::zero() {
        return Ok(T::zero());
    }
    let s = two * T::from_usize(n) + mu_t + nu_t;
    Ok(diff / (checked(s, "F_n", n)? * checked(s + two, "F_n", n)?))
}

/// `G_n = ¼ (2n+μ+ν)(2n+μ+ν+2)`.
pub fn g_coefficient<T: Real>(mu: f64, nu: f64, n: usize) -> T {
    let s = T::lit(2.0) * T::from_usize(n) + T::lit(mu) + T::lit(nu);
    T::lit(0.25) * s * (s + T::lit(2.0))
}

/// `D_n`, negative for admissible basis parameters.
pub fn d_coefficient<T: Real>(mu: f64, nu: f64, n: usize) -> Result<T> {
    let (mu_t, nu_t, one, two) = (T::lit(mu), T::lit(nu), T::one(), T::lit(2.0));
    let nt = T::from_usize(n);
    let s = two * nt + mu_t + nu_t;
    let den = checked(s + one, "D_n", n)? * checked(s + T::lit(3.0), "D_n", n)?;
    let radicand = (nt + one) * (nt + mu_t + one) * (nt + nu_t + one) * (nt + mu_t + nu_t + one) / den;
    if !(radicand > T::zero()) {
        return Err(Error::invalid(format!(
            "D_{n} radicand {:e} is not positive for μ = {mu}, ν = {nu}",
            radicand.to_f64_lossy()
        )));
    }
    Ok(two / checked(s + two, "D_n", n)? * radicand.sqrt())
}

impl<T: Real> RecursionCoeffs<T> {
    /// Coefficients for degrees `0..=max_degree`. Only requires the
    /// denominators to be non-zero and the `D_n` radicands positive, so it
    /// also serves energy-dependent pairs outside a declared basis.
    pub fn compute(mu: f64, nu: f64, max_degree: usize) -> Result<Self> {
        let f = (0..=max_degree).map(|n| f_coefficient(mu, nu, n)).collect::<Result<Vec<_>>>()?;
        let g = (0..=max_degree).map(|n| g_coefficient(mu, nu, n)).collect();
        let d = (0..max_degree).map(|n| d_coefficient(mu, nu, n)).collect::<Result<Vec<_>>>()?;
        Ok(Self { f, d, g })
    }

    pub fn max_degree(&self) -> usize {
        self.f.len() - 1
    }
}

/// Coefficients for a validated basis.
pub fn recursion_coeffs(basis: &BasisParams) -> Result<RecursionCoeffs<f64>> {
    RecursionCoeffs::compute(basis.mu, basis.nu, basis.max_degree)
}

/// `G_n` in the squared form `(n + (μ+ν+1)/2)² − ¼`.
pub fn g_squared_form(mu: f64, nu: f64, n: usize) -> f64 {
    let t = n as f64 + 0.5 * (mu + nu + 1.0);
    t * t - 0.25
}

/// Parameters of `H_n^{(μ,ν)}(z⁻¹; θ, σ)` matched to the recursion:
/// `cosh θ = B/C`, `z = −√(B² − C²)`, `σ = −¼`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AssociatedParams {
    pub theta: f64,
    pub z: f64,
    pub sigma: f64,
}

impl AssociatedParams {
    /// Requires `B ≥ C > 0`. At `B = C`, `θ = z = 0` and `z⁻¹` is formal only;
    /// the recursion never forms it.
    pub fn new(b: f64, c: f64) -> Result<Self> {
        if !(c > 0.0) || b < c {
            return Err(Error::invalid(format!("need B ≥ C > 0, got B = {b}, C = {c}")));
        }
        Ok(Self { theta: (b / c).acosh(), z: -(b * b - c * c).sqrt(), sigma: -0.25 })
    }
}

/// Polynomial values stored as `mantissa · e^{log_scale}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScaledSequence {
    pub mantissa: Vec<f64>,
    pub log_scale: Vec<f64>,
}

/// Rolling values are rescaled once they exceed this magnitude.
pub const RESCALE_THRESHOLD: f64 = 1e150;

impl ScaledSequence {
    pub fn len(&self) -> usize {
        self.mantissa.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mantissa.is_empty()
    }

    /// Plain values; may overflow to ±∞ for very long sequences.
    pub fn values(&self) -> Vec<f64> {
        self.mantissa.iter().zip(&self.log_scale).map(|(&m, &s)| if s == 0.0 { m } else { m * s.exp() }).collect()
    }

    /// `ln|value_n|`.
    pub fn log_abs(&self, n: usize) -> f64 {
        self.mantissa[n].abs().ln() + self.log_scale[n]
    }
}

/// `H_0 … H_{n_max}` from `H_0 = 1`, `H_{−1} = 0` and
/// `H_{n+1} = [(B + G_n − C F_n) H_n − C D_{n−1} H_{n−1}] / (C D_n)`.
pub fn h_polynomial_sequence(pair: JacobiPair, b: f64, c: f64, n_max: usize) -> Result<ScaledSequence> {
    if c == 0.0 || !c.is_finite() || !b.is_finite() {
        return Err(Error::invalid("C must be finite and non-zero"));
    }
    let mut mantissa = vec![1.0];
    let mut log_scale = vec![0.0];
    let mut scale = 0.0;
    let mut prev = 0.0;
    let mut cur = 1.0;
    let (mu, nu) = (pair.mu, pair.nu);
    let mut d_prev = 0.0;
    for n in 0..n_max {
        let d = d_coefficient::<f64>(mu, nu, n)?;
        let cd = c * d;
        if cd.abs() < 1e-14 {
            return Err(Error::DegenerateDenominator { context: "H_n recursion", n });
        }
        let diag = b + g_coefficient::<f64>(mu, nu, n) - c * f_coefficient::<f64>(mu, nu, n)?;
        let mut next = (diag * cur - c * d_prev * prev) / cd;
        d_prev = d;
        if !next.is_finite() {
            return Err(Error::NonFinite(format!("H_{} overflowed", n + 1)));
        }
        if next.abs() > RESCALE_THRESHOLD {
            let factor = next.abs();
            scale += factor.ln();
            cur /= factor;
            next /= factor;
        }
        prev = cur;
        cur = next;
        mantissa.push(cur);
        log_scale.push(scale);
    }
    Ok(ScaledSequence { mantissa, log_scale })
}

/// `f_n(ε, A, B, C) = H_n^{(μ_k,ν_k)}(z⁻¹; θ, −¼)` for `n = 0..=n_max`, up to
/// an overall constant.
pub fn expansion_coefficients(energy: &EnergyParams, b: f64, c: f64, n_max: usize) -> Result<ScaledSequence> {
    AssociatedParams::new(b, c)?;
    h_polynomial_sequence(energy.pair(), b, c, n_max)
}
