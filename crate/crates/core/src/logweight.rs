//! Log-space nonnegative weights.
//!
//! Tower-vector weights span hundreds of orders of magnitude once graphs have
//! thousands of vertices, so all weight arithmetic happens on logarithms:
//! multiplication is addition, addition is a stable log-sum-exp, and zero is
//! negative infinity.

use core::fmt;
use core::ops::{Add, AddAssign, Mul, MulAssign};

/// A nonnegative weight stored as its natural logarithm. `-inf` encodes zero.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LogWeight(f64);

impl LogWeight {
    /// The weight 0.
    pub const ZERO: LogWeight = LogWeight(f64::NEG_INFINITY);
    /// The weight 1.
    pub const ONE: LogWeight = LogWeight(0.0);

    /// Wraps a log-value. Must not be NaN or `+inf`.
    pub fn from_ln(ln: f64) -> Self {
        debug_assert!(!ln.is_nan() && ln != f64::INFINITY);
        LogWeight(ln)
    }

    /// The weight of a plain nonnegative value.
    pub fn from_value(v: f64) -> Self {
        debug_assert!(v >= 0.0);
        if v == 0.0 {
            Self::ZERO
        } else {
            LogWeight(libm::log(v))
        }
    }

    /// The stored logarithm (`-inf` for zero weights).
    pub fn ln(self) -> f64 {
        self.0
    }

    /// The weight as a plain value. May under- or overflow for extreme logs.
    pub fn value(self) -> f64 {
        libm::exp(self.0)
    }

    pub fn is_zero(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }

    /// `self / other` as a plain value; `other` must be nonzero.
    pub fn ratio(self, other: LogWeight) -> f64 {
        debug_assert!(!other.is_zero());
        libm::exp(self.0 - other.0)
    }
}

// Multiplication of weights is addition of their logs.
#[allow(clippy::suspicious_arithmetic_impl)]
impl Mul for LogWeight {
    type Output = LogWeight;
    fn mul(self, rhs: LogWeight) -> LogWeight {
        // -inf + finite stays -inf; two -inf stay -inf.
        LogWeight(self.0 + rhs.0)
    }
}

#[allow(clippy::suspicious_op_assign_impl)]
impl MulAssign for LogWeight {
    fn mul_assign(&mut self, rhs: LogWeight) {
        self.0 += rhs.0;
    }
}

impl Add for LogWeight {
    type Output = LogWeight;
    fn add(self, rhs: LogWeight) -> LogWeight {
        LogWeight(log_add_exp(self.0, rhs.0))
    }
}

impl AddAssign for LogWeight {
    fn add_assign(&mut self, rhs: LogWeight) {
        self.0 = log_add_exp(self.0, rhs.0);
    }
}

impl fmt::Display for LogWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "exp({})", self.0)
    }
}

/// `ln(exp(a) + exp(b))` without overflow.
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    hi + libm::log1p(libm::exp(lo - hi))
}

/// `ln(sum(exp(t)))` over a slice, two-pass for stability.
pub fn log_sum_exp(terms: &[f64]) -> f64 {
    let mx = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if mx == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let sum: f64 = terms.iter().map(|&t| libm::exp(t - mx)).sum();
    mx + libm::log(sum)
}

/// Cumulative table of `ln k!` for `k = 0..=n`.
pub(crate) fn ln_factorials(n: usize) -> alloc::vec::Vec<f64> {
    let mut lnf = alloc::vec::Vec::with_capacity(n + 1);
    lnf.push(0.0);
    let mut acc = 0.0;
    for k in 1..=n {
        acc += libm::log(k as f64);
        lnf.push(acc);
    }
    lnf
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_and_one_behave() {
        assert!((LogWeight::ZERO + LogWeight::ONE).ln().abs() < 1e-15);
        assert!((LogWeight::ZERO * LogWeight::ONE).is_zero());
        assert!((LogWeight::ZERO + LogWeight::ZERO).is_zero());
    }

    #[test]
    fn add_matches_plain_arithmetic() {
        let a = LogWeight::from_value(3.5);
        let b = LogWeight::from_value(0.25);
        assert!(((a + b).value() - 3.75).abs() < 1e-12);
        assert!(((a * b).value() - 0.875).abs() < 1e-12);
        assert!((a.ratio(b) - 14.0).abs() < 1e-12);
    }

    #[test]
    fn log_sum_exp_is_stable() {
        let big = [-1e6, -1e6 + libm::log(2.0)];
        assert!((log_sum_exp(&big) - (-1e6 + libm::log(3.0))).abs() < 1e-9);
        assert_eq!(log_sum_exp(&[]), f64::NEG_INFINITY);
    }

    #[test]
    fn factorial_table() {
        let lnf = ln_factorials(6);
        assert!((lnf[6] - libm::log(720.0)).abs() < 1e-12);
        assert_eq!(lnf[0], 0.0);
        assert_eq!(lnf[1], 0.0);
    }
}
