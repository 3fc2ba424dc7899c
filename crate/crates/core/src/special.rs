//! Jacobi polynomials on `x ≥ 1`, the signed log-gamma function and the
//! normalization constants of the `x ≥ 1` Jacobi basis.
//!
//! For `μ > −1` and `μ + ν < −2N − 1` the polynomials `P_n^{(μ,ν)}`, `n ≤ N`,
//! are orthogonal on `[1, ∞)` under the weight `(x−1)^μ (x+1)^ν`. With `ν`
//! large and negative the gamma functions in the norms have negative
//! non-integer arguments, so everything is assembled from signed logarithms.

use std::f64::consts::{LN_2, PI};

use serde::Serialize;

use crate::error::{Error, Result};

/// `|2n + μ + ν|` below this is treated as a vanishing recursion denominator.
pub const DEGENERATE_TOL: f64 = 1e-10;

/// Distance to a non-positive integer below which `Γ` is treated as a pole.
pub const POLE_TOL: f64 = 1e-12;

/// Jacobi parameters `(μ, ν)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JacobiPair {
    pub mu: f64,
    pub nu: f64,
}

impl JacobiPair {
    pub fn new(mu: f64, nu: f64) -> Self {
        Self { mu, nu }
    }

    /// Pair usable in the `x ≥ 1` orthogonality relation up to degree `max_degree`.
    pub fn for_basis(mu: f64, nu: f64, max_degree: usize) -> Result<Self> {
        let pair = Self::new(mu, nu);
        pair.check_basis(max_degree)?;
        Ok(pair)
    }

    pub fn check_basis(&self, max_degree: usize) -> Result<()> {
        if !self.mu.is_finite() || !self.nu.is_finite() {
            return Err(Error::invalid("μ and ν must be finite"));
        }
        if self.mu <= -1.0 {
            return Err(Error::invalid(format!("μ = {} must exceed −1", self.mu)));
        }
        let bound = -2.0 * max_degree as f64 - 1.0;
        if self.mu + self.nu >= bound {
            return Err(Error::invalid(format!(
                "μ + ν = {} must be below −2N − 1 = {bound} for N = {max_degree}",
                self.mu + self.nu
            )));
        }
        Ok(())
    }

    pub fn swapped(&self) -> Self {
        Self { mu: self.nu, nu: self.mu }
    }
}

/// A real number stored as `sign · exp(log_abs)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SignedLogMagnitude {
    pub log_abs: f64,
    /// −1, 0 or +1; zero iff the value is exactly zero.
    pub sign: i8,
}

// `div` is fallible, so neither method fits the operator traits
#[allow(clippy::should_implement_trait)]
impl SignedLogMagnitude {
    pub const ZERO: Self = Self { log_abs: f64::NEG_INFINITY, sign: 0 };
    pub const ONE: Self = Self { log_abs: 0.0, sign: 1 };

    pub fn from_value(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            Self { log_abs: x.abs().ln(), sign: if x > 0.0 { 1 } else { -1 } }
        }
    }

    pub fn value(&self) -> f64 {
        if self.sign == 0 {
            0.0
        } else {
            f64::from(self.sign) * self.log_abs.exp()
        }
    }

    pub fn mul(self, other: Self) -> Self {
        if self.sign == 0 || other.sign == 0 {
            return Self::ZERO;
        }
        Self { log_abs: self.log_abs + other.log_abs, sign: self.sign * other.sign }
    }

    pub fn div(self, other: Self) -> Result<Self> {
        if other.sign == 0 {
            return Err(Error::NonFinite("division by zero in signed-log arithmetic".into()));
        }
        if self.sign == 0 {
            return Ok(Self::ZERO);
        }
        Ok(Self { log_abs: self.log_abs - other.log_abs, sign: self.sign * other.sign })
    }

    /// `sqrt` of a positive value.
    pub fn sqrt(self) -> Result<Self> {
        match self.sign {
            1 => Ok(Self { log_abs: 0.5 * self.log_abs, sign: 1 }),
            0 => Ok(Self::ZERO),
            _ => Err(Error::NonFinite("square root of a negative signed-log value".into())),
        }
    }
}

/// `sin(πx)` with exact argument reduction, so large `|x|` keep full accuracy.
pub fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (0.5 * x).round();
    let (sign, r) = if r < 0.0 { (-1.0, -r) } else { (1.0, r) };
    let r = if r > 0.5 { 1.0 - r } else { r };
    sign * (PI * r).sin()
}

/// `ln|Γ(z)|` and the sign of `Γ(z)`.
///
/// Negative arguments use `Γ(z) Γ(1−z) = π / sin(πz)`, so the sign alternates
/// between consecutive negative integers.
pub fn signed_log_gamma(z: f64) -> Result<SignedLogMagnitude> {
    if !z.is_finite() {
        return Err(Error::NonFinite(format!("Γ argument {z}")));
    }
    if z <= 0.0 && (z - z.round()).abs() < POLE_TOL {
        return Err(Error::GammaPole(z));
    }
    if z > 0.0 {
        return Ok(SignedLogMagnitude { log_abs: libm::lgamma(z), sign: 1 });
    }
    let s = sin_pi(z);
    let log_abs = PI.ln() - s.abs().ln() - libm::lgamma(1.0 - z);
    Ok(SignedLogMagnitude { log_abs, sign: if s > 0.0 { 1 } else { -1 } })
}

/// Rising factorial `(a)_n = a (a+1) ⋯ (a+n−1)` in signed-log form.
pub fn pochhammer(a: f64, n: usize) -> SignedLogMagnitude {
    (0..n).fold(SignedLogMagnitude::ONE, |acc, i| acc.mul(SignedLogMagnitude::from_value(a + i as f64)))
}

fn check_x(x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite(format!("Jacobi argument {x}")))
    }
}

/// `P_0 … P_{n_max}` at `x` by upward three-term recursion.
pub fn jacobi_sequence(pair: JacobiPair, n_max: usize, x: f64) -> Result<Vec<f64>> {
    check_x(x)?;
    let JacobiPair { mu, nu } = pair;
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(1.0);
    if n_max == 0 {
        return Ok(out);
    }
    out.push(0.5 * (mu + nu + 2.0) * x + 0.5 * (mu - nu));
    for n in 1..n_max {
        let nf = n as f64;
        let s = 2.0 * nf + mu + nu;
        if s.abs() < DEGENERATE_TOL || (nf + mu + nu + 1.0).abs() < DEGENERATE_TOL {
            return Err(Error::DegenerateDenominator { context: "Jacobi recursion", n });
        }
        let a1 = 2.0 * (nf + 1.0) * (nf + mu + nu + 1.0) * s;
        let a2 = (s + 1.0) * (mu * mu - nu * nu);
        let a3 = s * (s + 1.0) * (s + 2.0);
        let a4 = 2.0 * (nf + mu) * (nf + nu) * (s + 2.0);
        let next = ((a2 + a3 * x) * out[n] - a4 * out[n - 1]) / a1;
        out.push(next);
    }
    Ok(out)
}

/// `P_n^{(μ,ν)}(x)`.
pub fn jacobi_eval(pair: JacobiPair, n: usize, x: f64) -> Result<f64> {
    Ok(jacobi_sequence(pair, n, x)?[n])
}

/// `dP_n/dx` from the differential relation
/// `(1−x²) P_n′ = −n(x + (ν−μ)/(2n+μ+ν)) P_n + 2(n+μ)(n+ν)/(2n+μ+ν) P_{n−1}`.
pub fn jacobi_derivative(pair: JacobiPair, n: usize, x: f64) -> Result<f64> {
    check_x(x)?;
    let JacobiPair { mu, nu } = pair;
    match n {
        0 => return Ok(0.0),
        1 => return Ok(0.5 * (mu + nu + 2.0)),
        _ => {}
    }
    let one_minus_x2 = 1.0 - x * x;
    if one_minus_x2 == 0.0 {
        return Err(Error::invalid("derivative relation is singular at x = ±1"));
    }
    let nf = n as f64;
    let s = 2.0 * nf + mu + nu;
    if s.abs() < DEGENERATE_TOL {
        return Err(Error::DegenerateDenominator { context: "Jacobi derivative", n });
    }
    let p = jacobi_sequence(pair, n, x)?;
    let rhs = -nf * (x + (nu - mu) / s) * p[n] + 2.0 * (nf + mu) * (nf + nu) / s * p[n - 1];
    Ok(rhs / one_minus_x2)
}

/// `c_n²` in signed-log form, from the gamma-product form of the norm
/// (all gamma arguments positive for a valid basis):
///
/// `c_n² = (2n+μ+ν+1) Γ(n+1) Γ(−ν) / [(−1)^{n+1} 2^{μ+ν+1} Γ(n+μ+1) (ν+1)_n Γ(−n−μ−ν)]`
pub fn normalization_c_squared(pair: JacobiPair, n: usize) -> Result<SignedLogMagnitude> {
    pair.check_basis(n)?;
    let JacobiPair { mu, nu } = pair;
    let nf = n as f64;
    let parity = if n.is_multiple_of(2) { -1.0 } else { 1.0 };
    let numerator = SignedLogMagnitude::from_value((2.0 * nf + mu + nu + 1.0) * parity)
        .mul(signed_log_gamma(nf + 1.0)?)
        .mul(signed_log_gamma(-nu)?);
    let poch = pochhammer(nu + 1.0, n);
    if poch.sign == 0 {
        return Err(Error::NonFinite(format!("(ν+1)_n vanishes for ν = {nu}, n = {n}")));
    }
    let denominator = SignedLogMagnitude { log_abs: (mu + nu + 1.0) * LN_2, sign: 1 }
        .mul(signed_log_gamma(nf + mu + 1.0)?)
        .mul(poch)
        .mul(signed_log_gamma(-nf - mu - nu)?);
    let c2 = numerator.div(denominator)?;
    if c2.sign <= 0 || !c2.log_abs.is_finite() {
        return Err(Error::NonFinite(format!("c_n² not positive for μ = {mu}, ν = {nu}, n = {n}")));
    }
    Ok(c2)
}

/// Normalization `c_n > 0` of the basis element `c_n (x−1)^{μ/2} (x+1)^{ν/2} P_n^{(μ,ν)}(x)`,
/// making `c_n² ∫₁^∞ (x−1)^μ (x+1)^ν P_n² dx = 1`.
pub fn normalization_c(pair: JacobiPair, n: usize) -> Result<f64> {
    let c = normalization_c_squared(pair, n)?.sqrt()?.value();
    if c.is_finite() && c > 0.0 {
        Ok(c)
    } else {
        Err(Error::NonFinite(format!("c_{n} overflows")))
    }
}

/// Same constant from the sine-ratio form
/// `(2n+μ+ν+1) Γ(n+1)Γ(n+μ+ν+1) / [Γ(n+μ+1)Γ(n+ν+1)] · sin π(μ+ν+1) / [2^{μ+ν+1} sin πν]`.
///
/// Undefined when `ν` or `μ + ν` is an integer; used to cross-check
/// [`normalization_c`].
pub fn normalization_c_sine_form(pair: JacobiPair, n: usize) -> Result<f64> {
    pair.check_basis(n)?;
    let JacobiPair { mu, nu } = pair;
    let nf = n as f64;
    let sin_num = sin_pi(mu + nu + 1.0);
    let sin_den = sin_pi(nu);
    if sin_num.abs() < POLE_TOL || sin_den.abs() < POLE_TOL {
        return Err(Error::DegenerateDenominator { context: "sine-ratio normalization", n });
    }
    let numerator = SignedLogMagnitude::from_value((2.0 * nf + mu + nu + 1.0) * sin_num)
        .mul(signed_log_gamma(nf + 1.0)?)
        .mul(signed_log_gamma(nf + mu + nu + 1.0)?);
    let denominator = SignedLogMagnitude::from_value(sin_den)
        .mul(SignedLogMagnitude { log_abs: (mu + nu + 1.0) * LN_2, sign: 1 })
        .mul(signed_log_gamma(nf + mu + 1.0)?)
        .mul(signed_log_gamma(nf + nu + 1.0)?);
    let c2 = numerator.div(denominator)?;
    if c2.sign <= 0 {
        return Err(Error::NonFinite(format!("sine-form c_{n}² not positive")));
    }
    Ok(c2.sqrt()?.value())
}
