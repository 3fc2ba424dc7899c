//! The potential `2V(r)/λ² = A[coth(λr) − 1] − B/sinh²(λr) + C cosh(λr)/sinh³(λr)`,
//! the coordinate map `x = coth(λr)` and the shape analysis in `x`, where the
//! potential is the cubic `U(x) = A(x−1) + (1−x²)(B − Cx)`.
//!
//! Note on the `γ = 7, ξ = 17` configuration: it has the two extrema
//! `x̃ = 2, 8/3` but `(γ+1)² − 4ξ = −4 < 0`, so the crossing formula gives no
//! real roots, and `ξ > 0` with `C > 0` means `A > 0`, which admits no bound
//! states. The formulas are implemented as stated and the report says so.

use serde::Serialize;

use crate::error::{Error, Result};

/// Roots closer to `x = 1` than this correspond to `r = ∞` and are dropped.
pub const ROOT_ADMISSIBILITY: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PotentialParams {
    /// Strength of the `1/r` term.
    pub a: f64,
    /// Strength of the `1/r²` term (enters with a minus sign).
    pub b: f64,
    /// Strength of the `1/r³` term.
    pub c: f64,
    /// Range scale (inverse length).
    pub lambda: f64,
}

impl PotentialParams {
    pub fn new(a: f64, b: f64, c: f64, lambda: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && c.is_finite()) {
            return Err(Error::invalid("A, B and C must be finite"));
        }
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::invalid(format!("λ = {lambda} must be positive")));
        }
        Ok(Self { a, b, c, lambda })
    }

    /// `γ = B/C`.
    pub fn gamma(&self) -> Result<f64> {
        self.require_c()?;
        Ok(self.b / self.c)
    }

    /// `ξ = A/C`.
    pub fn xi(&self) -> Result<f64> {
        self.require_c()?;
        Ok(self.a / self.c)
    }

    fn require_c(&self) -> Result<()> {
        if self.c == 0.0 {
            Err(Error::invalid("C must be non-zero"))
        } else {
            Ok(())
        }
    }

    /// `U(x) = 2V/λ²` as a function of `x = coth(λr)`.
    pub fn u_of_x(&self, x: f64) -> f64 {
        self.a * (x - 1.0) + (1.0 - x * x) * (self.b - self.c * x)
    }

    /// `dU/dx = 3Cx² − 2Bx + A − C`.
    pub fn du_dx(&self, x: f64) -> f64 {
        3.0 * self.c * x * x - 2.0 * self.b * x + self.a - self.c
    }

    /// `V(r)` in absolute energy units.
    pub fn value(&self, r: f64) -> Result<f64> {
        Ok(0.5 * self.lambda * self.lambda * self.u_of_r(r)?)
    }

    /// `2V(r)/λ²`.
    pub fn u_of_r(&self, r: f64) -> Result<f64> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::invalid(format!("r = {r} must be positive and finite")));
        }
        let lr = self.lambda * r;
        // everything in q = e^{−2λr}; coth − 1 cancels badly otherwise
        let q = (-2.0 * lr).exp();
        let one_mq = -(-2.0 * lr).exp_m1();
        let coth_m1 = 2.0 * q / one_mq;
        let csch2 = 2.0 * coth_m1 / one_mq;
        let coth_csch2 = (1.0 + q) / one_mq * csch2;
        Ok(self.a * coth_m1 - self.b * csch2 + self.c * coth_csch2)
    }
}

/// `V(r)`; see [`PotentialParams::value`].
pub fn potential_value(p: &PotentialParams, r: f64) -> Result<f64> {
    p.value(r)
}

/// `x = coth(λr)`.
pub fn x_of_r(lambda: f64, r: f64) -> Result<f64> {
    check_lr(lambda, r)?;
    Ok(1.0 / (lambda * r).tanh())
}

/// `x − 1 = 2e^{−2λr} / (1 − e^{−2λr})`, accurate where `x` itself rounds to 1.
pub fn x_minus_one_of_r(lambda: f64, r: f64) -> Result<f64> {
    check_lr(lambda, r)?;
    let t = -2.0 * lambda * r;
    Ok(2.0 * t.exp() / -t.exp_m1())
}

/// `r = arccoth(x) / λ`.
pub fn r_of_x(lambda: f64, x: f64) -> Result<f64> {
    if !(x > 1.0) {
        return Err(Error::invalid(format!("x = {x} must exceed 1 (x = 1 is r = ∞)")));
    }
    r_of_x_minus_one(lambda, x - 1.0)
}

/// `r` from `δ = x − 1`: `arccoth(1 + δ) = ½ ln(1 + 2/δ)`.
pub fn r_of_x_minus_one(lambda: f64, delta: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::invalid("λ must be positive"));
    }
    if !(delta > 0.0) {
        return Err(Error::invalid(format!("x − 1 = {delta} must be positive")));
    }
    Ok(0.5 * (2.0 / delta).ln_1p() / lambda)
}

fn check_lr(lambda: f64, r: f64) -> Result<()> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::invalid("λ must be positive"));
    }
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::invalid(format!("r = {r} must be positive")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Crossing {
    pub x: f64,
    pub r: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Extremum {
    pub x: f64,
    pub r: f64,
    /// `V(r̃)` in units of `λ²/2`.
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShapeReport {
    pub gamma: f64,
    pub xi: f64,
    pub crossings: Vec<Crossing>,
    pub extrema: Vec<Extremum>,
    /// `A ≤ −1/2`.
    pub admits_bound_states: bool,
    /// `B ≥ C`.
    pub satisfies_b_ge_c: bool,
}

/// Crossings `x± = ½[γ − 1 ± √((γ+1)² − 4ξ)]` and extrema
/// `x̃± = ⅓[γ ± √(γ² + 3(1 − ξ))]`, keeping real roots with `x > 1`.
pub fn classify_shape(p: &PotentialParams) -> Result<ShapeReport> {
    let gamma = p.gamma()?;
    let xi = p.xi()?;

    let admissible = |x: f64| x >= 1.0 + ROOT_ADMISSIBILITY;
    let mut crossings = Vec::new();
    let disc = (gamma + 1.0) * (gamma + 1.0) - 4.0 * xi;
    if disc >= 0.0 {
        let sq = disc.sqrt();
        for x in dedup_roots([0.5 * (gamma - 1.0 - sq), 0.5 * (gamma - 1.0 + sq)]) {
            if admissible(x) {
                crossings.push(Crossing { x, r: r_of_x(p.lambda, x)? });
            }
        }
    }

    let mut extrema = Vec::new();
    let disc = gamma * gamma + 3.0 * (1.0 - xi);
    if disc >= 0.0 {
        let sq = disc.sqrt();
        for x in dedup_roots([(gamma - sq) / 3.0, (gamma + sq) / 3.0]) {
            if admissible(x) {
                extrema.push(Extremum { x, r: r_of_x(p.lambda, x)?, value: p.u_of_x(x) });
            }
        }
    }

    Ok(ShapeReport { gamma, xi, crossings, extrema, admits_bound_states: p.a <= -0.5, satisfies_b_ge_c: p.b >= p.c })
}

fn dedup_roots(roots: [f64; 2]) -> Vec<f64> {
    if roots[0] == roots[1] {
        vec![roots[0]]
    } else {
        roots.to_vec()
    }
}

/// Largest `N` with `N ≤ √(−A/2) − ½`, or `None` when `A > −1/2`.
pub fn max_basis_index(a: f64) -> Option<usize> {
    if a > -0.5 || !a.is_finite() {
        return None;
    }
    Some(((-a / 2.0).sqrt() - 0.5).floor() as usize)
}
