//! Magnitudes carried as base-2 logarithms.

use std::fmt;
use std::ops::{Div, Mul};

use serde::{Deserialize, Serialize};

/// A positive (or zero) quantity stored as `log2`.
///
/// Zero is `log2 = -inf`. Products and quotients are exact in the log domain;
/// only `value()` can under/overflow.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Log2(pub f64);

impl Log2 {
    pub const ONE: Log2 = Log2(0.0);
    pub const ZERO: Log2 = Log2(f64::NEG_INFINITY);

    pub fn from_value(v: f64) -> Log2 {
        assert!(v >= 0.0, "Log2 holds nonnegative magnitudes, got {v}");
        Log2(v.log2())
    }

    pub fn from_ln(ln: f64) -> Log2 {
        Log2(ln * std::f64::consts::LOG2_E)
    }

    pub fn log2(self) -> f64 {
        self.0
    }

    pub fn ln(self) -> f64 {
        self.0 * std::f64::consts::LN_2
    }

    pub fn log10(self) -> f64 {
        self.0 * std::f64::consts::LOG10_2
    }

    /// Plain value; `inf` or `0` outside the `f64` range.
    pub fn value(self) -> f64 {
        self.0.exp2()
    }

    pub fn powf(self, p: f64) -> Log2 {
        if p == 0.0 {
            Log2::ONE
        } else {
            Log2(self.0 * p)
        }
    }

    pub fn recip(self) -> Log2 {
        Log2(-self.0)
    }

    /// `self + other` without leaving the log domain.
    pub fn add(self, other: Log2) -> Log2 {
        let (hi, lo) = if self.0 >= other.0 { (self.0, other.0) } else { (other.0, self.0) };
        if hi == f64::NEG_INFINITY {
            return Log2::ZERO;
        }
        Log2(hi + (lo - hi).exp2().ln_1p() * std::f64::consts::LOG2_E)
    }
}

impl Mul for Log2 {
    type Output = Log2;
    fn mul(self, rhs: Log2) -> Log2 {
        Log2(self.0 + rhs.0)
    }
}

impl Div for Log2 {
    type Output = Log2;
    fn div(self, rhs: Log2) -> Log2 {
        Log2(self.0 - rhs.0)
    }
}

impl fmt::Display for Log2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "2^{}", self.0)
    }
}

/// Neumaier compensated summation.
#[derive(Clone, Copy, Debug, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = NeumaierSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_matches_plain_sum() {
        let a = Log2::from_value(3.0);
        let b = Log2::from_value(5.0);
        assert!((a.add(b).value() - 8.0).abs() < 1e-14);
        assert_eq!(Log2::ZERO.add(a), a);
    }

    #[test]
    fn products_survive_underflow() {
        let tiny = Log2(-5000.0);
        let back = tiny * Log2(4999.0);
        assert!((back.value() - 0.5).abs() < 1e-15);
        assert_eq!(tiny.value(), 0.0);
    }

    #[test]
    fn neumaier_recovers_cancelled_bits() {
        let s: NeumaierSum = [1.0, 1e100, 1.0, -1e100].into_iter().collect();
        assert_eq!(s.total(), 2.0);
    }
}
