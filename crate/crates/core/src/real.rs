//! Floating-point abstraction used by the solver pipeline.
//!
//! The Hamiltonian pencil for large bases is badly conditioned (the overlap
//! matrix spans ten or more orders of magnitude), so the solver core is
//! generic and can run in double-double arithmetic.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Unevaluated sum of two `f64`, about 32 significant digits.
pub type DoubleDouble = qd::Quad;

/// The arithmetic the linear algebra needs, nothing more.
pub trait Real:
    Copy
    + PartialOrd
    + Debug
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Short label used in diagnostics.
    const LABEL: &'static str;

    fn lit(x: f64) -> Self;

    fn to_f64_lossy(self) -> f64;

    fn abs(self) -> Self;

    fn sqrt(self) -> Self;

    fn is_finite(self) -> bool;

    /// Unit roundoff.
    fn epsilon() -> Self;

    fn zero() -> Self {
        Self::lit(0.0)
    }

    fn one() -> Self {
        Self::lit(1.0)
    }

    fn infinity() -> Self {
        Self::lit(f64::INFINITY)
    }

    fn min_positive_value() -> Self {
        Self::lit(f64::MIN_POSITIVE)
    }

    fn from_usize(n: usize) -> Self {
        Self::lit(n as f64)
    }

    fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    /// `sqrt(a² + b²)` without intermediate overflow.
    fn hypot_scaled(self, other: Self) -> Self {
        let a = self.abs();
        let b = other.abs();
        let (big, small) = if a > b { (a, b) } else { (b, a) };
        if big == Self::zero() {
            return big;
        }
        let ratio = small / big;
        big * (Self::one() + ratio * ratio).sqrt()
    }
}

impl Real for f64 {
    const LABEL: &'static str = "f64";

    #[inline]
    fn lit(x: f64) -> Self {
        x
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self
    }

    #[inline]
    fn abs(self) -> Self {
        f64::abs(self)
    }

    #[inline]
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }

    #[inline]
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }

    fn epsilon() -> Self {
        f64::EPSILON
    }
}

impl Real for DoubleDouble {
    const LABEL: &'static str = "double-double";

    #[inline]
    fn lit(x: f64) -> Self {
        qd::Quad::from_f64(x)
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.0 + self.1
    }

    #[inline]
    fn abs(self) -> Self {
        qd::Quad::abs(self)
    }

    #[inline]
    fn sqrt(self) -> Self {
        if self.0 < 0.0 {
            return qd::Quad::NAN;
        }
        qd::Quad::sqrt(self)
    }

    #[inline]
    fn is_finite(self) -> bool {
        qd::Quad::is_finite(self)
    }

    fn epsilon() -> Self {
        qd::Quad::EPSILON
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn double_double_keeps_extra_digits() {
        let third = DoubleDouble::lit(1.0) / DoubleDouble::lit(3.0);
        let back = third * DoubleDouble::lit(3.0) - DoubleDouble::lit(1.0);
        assert!(back.abs().to_f64_lossy() < 1e-30);
        let root = DoubleDouble::lit(2.0).sqrt();
        assert!((root * root - DoubleDouble::lit(2.0)).abs().to_f64_lossy() < 1e-30);
        assert!(DoubleDouble::epsilon().to_f64_lossy() < 1e-30);
        assert!(DoubleDouble::epsilon().to_f64_lossy() > 1e-33);
    }

    #[test]
    fn double_double_ordering_uses_low_word() {
        let a = DoubleDouble::lit(0.1);
        let b = a + DoubleDouble::lit(1e-20);
        assert!(b > a);
        assert_eq!(a.max(b), b);
        assert!(!DoubleDouble::lit(-1.0).sqrt().is_finite());
    }

    #[test]
    fn hypot_handles_zero_and_scale() {
        assert_eq!(0.0f64.hypot_scaled(0.0), 0.0);
        assert!((3e200f64.hypot_scaled(4e200) - 5e200).abs() < 1e186);
    }
}
