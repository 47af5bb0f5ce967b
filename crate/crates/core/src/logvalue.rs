//! Nonnegative extended reals stored by the logarithm of their magnitude.
//!
//! Quantities like `e^{k^k}` overflow `f64` long before they become
//! interesting, so scales, norms and sums are carried as `LogValue`s. Zero is
//! represented by an explicit flag; every nonzero value keeps a finite natural
//! logarithm.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Relative tolerance used for all log-domain comparisons.
pub const LOG_TOL: f64 = 1e-9;

/// A value in `[0, ∞)` stored as `ln |x|`.
#[derive(Clone, Copy, Debug)]
pub struct LogValue {
    zero: bool,
    ln: f64,
}

impl LogValue {
    pub const ZERO: LogValue = LogValue { zero: true, ln: 0.0 };
    pub const ONE: LogValue = LogValue { zero: false, ln: 0.0 };

    /// Builds a value from its natural logarithm. `ln` must be finite or `-∞`
    /// (the latter meaning zero).
    pub fn from_ln(ln: f64) -> Option<LogValue> {
        if ln == f64::NEG_INFINITY {
            Some(Self::ZERO)
        } else if ln.is_finite() {
            Some(LogValue { zero: false, ln })
        } else {
            None
        }
    }

    /// Like [`LogValue::from_ln`] but panics on `NaN` / `+∞`.
    pub fn exp(ln: f64) -> LogValue {
        Self::from_ln(ln).unwrap_or_else(|| panic!("log magnitude {ln} is not finite"))
    }

    pub fn from_f64(x: f64) -> Option<LogValue> {
        if x == 0.0 {
            Some(Self::ZERO)
        } else if x > 0.0 && x.is_finite() {
            Some(LogValue { zero: false, ln: x.ln() })
        } else {
            None
        }
    }

    pub fn from_u64(x: u64) -> LogValue {
        if x == 0 {
            Self::ZERO
        } else {
            LogValue { zero: false, ln: (x as f64).ln() }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.zero
    }

    /// Natural logarithm; `-∞` for zero.
    pub fn ln(&self) -> f64 {
        if self.zero {
            f64::NEG_INFINITY
        } else {
            self.ln
        }
    }

    /// Plain `f64` value, `+∞` when it does not fit.
    pub fn to_f64(&self) -> f64 {
        if self.zero {
            0.0
        } else {
            self.ln.exp()
        }
    }

    /// The nearest `u64` when the value is within relative round-off of an
    /// integer below 2^53.
    pub fn to_exact_u64(&self) -> Option<u64> {
        let x = self.to_f64();
        let r = x.round();
        ((x - r).abs() <= 1e-12 * r.max(1.0) && r < 9.007_199_254_740_992e15).then_some(r as u64)
    }

    pub fn checked_div(self, rhs: LogValue) -> Option<LogValue> {
        if rhs.zero {
            None
        } else if self.zero {
            Some(Self::ZERO)
        } else {
            Self::from_ln(self.ln - rhs.ln)
        }
    }

    /// `self - rhs`, or `None` when the result would be negative (beyond the
    /// comparison tolerance). Results within tolerance of zero clamp to zero.
    pub fn checked_sub(self, rhs: LogValue) -> Option<LogValue> {
        if rhs.zero {
            return Some(self);
        }
        if self.zero {
            return None;
        }
        let d = rhs.ln - self.ln;
        if d > 0.0 {
            return if d <= tol_for(self.ln, rhs.ln) { Some(Self::ZERO) } else { None };
        }
        if d == 0.0 {
            return Some(Self::ZERO);
        }
        // ln(1 - e^d) with d < 0
        Self::from_ln(self.ln + (-d.exp_m1()).ln())
    }

    pub fn powf(self, e: f64) -> Option<LogValue> {
        if !e.is_finite() {
            return None;
        }
        if self.zero {
            return match e.partial_cmp(&0.0)? {
                Ordering::Greater => Some(Self::ZERO),
                Ordering::Equal => Some(Self::ONE),
                Ordering::Less => None,
            };
        }
        Self::from_ln(self.ln * e)
    }

    pub fn sqrt(self) -> LogValue {
        if self.zero {
            self
        } else {
            LogValue { zero: false, ln: 0.5 * self.ln }
        }
    }

    /// `self <= rhs` up to the relative tolerance [`LOG_TOL`].
    pub fn approx_le(&self, rhs: &LogValue) -> bool {
        match (self.zero, rhs.zero) {
            (true, _) => true,
            (false, true) => false,
            (false, false) => self.ln - rhs.ln <= tol_for(self.ln, rhs.ln),
        }
    }

    pub fn approx_eq(&self, rhs: &LogValue) -> bool {
        self.approx_le(rhs) && rhs.approx_le(self)
    }

    /// `self <= rhs * (1 + rel_tol)`, compared on the log scale.
    pub fn le_within(&self, rhs: &LogValue, rel_tol: f64) -> bool {
        match (self.zero, rhs.zero) {
            (true, _) => true,
            (false, true) => false,
            (false, false) => self.ln - rhs.ln <= rel_tol.ln_1p(),
        }
    }

    pub fn max(self, rhs: LogValue) -> LogValue {
        if self >= rhs {
            self
        } else {
            rhs
        }
    }

    pub fn min(self, rhs: LogValue) -> LogValue {
        if self <= rhs {
            self
        } else {
            rhs
        }
    }
}

/// Absolute tolerance on the log scale for two log magnitudes. Grows with the
/// magnitude so that round-off in `ln` of huge values does not flip verdicts.
fn tol_for(a: f64, b: f64) -> f64 {
    LOG_TOL * 1f64.max(a.abs().max(b.abs()) * 1e-6)
}

impl PartialEq for LogValue {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for LogValue {}

impl PartialOrd for LogValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LogValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.zero, other.zero) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            (false, false) => self.ln.total_cmp(&other.ln),
        }
    }
}

impl Add for LogValue {
    type Output = LogValue;

    fn add(self, rhs: LogValue) -> LogValue {
        if self.zero {
            return rhs;
        }
        if rhs.zero {
            return self;
        }
        let (hi, lo) = if self.ln >= rhs.ln { (self.ln, rhs.ln) } else { (rhs.ln, self.ln) };
        LogValue { zero: false, ln: hi + (lo - hi).exp().ln_1p() }
    }
}

impl Mul for LogValue {
    type Output = LogValue;

    fn mul(self, rhs: LogValue) -> LogValue {
        if self.zero || rhs.zero {
            Self::ZERO
        } else {
            LogValue { zero: false, ln: self.ln + rhs.ln }
        }
    }
}

impl std::iter::Sum for LogValue {
    fn sum<I: Iterator<Item = LogValue>>(iter: I) -> LogValue {
        let mut acc = LogSum::new();
        for v in iter {
            acc.push(v);
        }
        acc.total()
    }
}

impl fmt::Display for LogValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.zero {
            write!(f, "0")
        } else if self.ln.abs() < 690.0 {
            write!(f, "{}", self.ln.exp())
        } else {
            write!(f, "e^{}", self.ln)
        }
    }
}

/// Serialized as the natural logarithm, with `null` for zero.
impl Serialize for LogValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.zero {
            s.serialize_none()
        } else {
            s.serialize_f64(self.ln)
        }
    }
}

impl<'de> Deserialize<'de> for LogValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let ln: Option<f64> = Option::deserialize(d)?;
        match ln {
            None => Ok(Self::ZERO),
            Some(x) => Self::from_ln(x).ok_or_else(|| serde::de::Error::custom("non-finite log")),
        }
    }
}

/// Running sum of nonnegative terms in the log domain.
///
/// Terms are accumulated in `f64` relative to a shift that tracks the largest
/// log seen so far, with Neumaier compensation; the shift is raised when a new
/// term would overflow the scaled sum.
#[derive(Clone, Debug, Default)]
pub struct LogSum {
    shift: f64,
    sum: f64,
    comp: f64,
    any: bool,
}

impl LogSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, v: LogValue) {
        if v.zero {
            return;
        }
        if !self.any {
            self.any = true;
            self.shift = v.ln;
            self.sum = 1.0;
            self.comp = 0.0;
            return;
        }
        if v.ln > self.shift + 300.0 {
            let scale = (self.shift - v.ln).exp();
            self.sum *= scale;
            self.comp *= scale;
            self.shift = v.ln;
        }
        let term = (v.ln - self.shift).exp();
        let t = self.sum + term;
        if self.sum.abs() >= term.abs() {
            self.comp += (self.sum - t) + term;
        } else {
            self.comp += (term - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> LogValue {
        if !self.any {
            return LogValue::ZERO;
        }
        let s = self.sum + self.comp;
        LogValue::exp(self.shift + s.ln())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn huge_exponent_tower() {
        let v = LogValue::exp(4f64.powi(4));
        assert_eq!(v.ln(), 256.0);
        let w = LogValue::exp(1e6) * LogValue::exp(1e6);
        assert_eq!(w.ln(), 2e6);
        assert!((w.powf(0.5).unwrap().ln() - 1e6).abs() < 1e-9);
    }

    #[test]
    fn add_and_sub() {
        let a = LogValue::from_f64(3.0).unwrap();
        let b = LogValue::from_f64(5.0).unwrap();
        assert!(((a + b).to_f64() - 8.0).abs() < 1e-14);
        assert!((b.checked_sub(a).unwrap().to_f64() - 2.0).abs() < 1e-14);
        assert!(a.checked_sub(b).is_none());
        assert!(a.checked_sub(a).unwrap().is_zero());
        assert_relative_eq!((LogValue::ZERO + a).to_f64(), 3.0, max_relative = 1e-12);
    }

    #[test]
    fn zero_semantics() {
        assert!(LogValue::ZERO < LogValue::from_f64(1e-300).unwrap());
        assert!(LogValue::ONE.checked_div(LogValue::ZERO).is_none());
        assert!(LogValue::ZERO.powf(-1.0).is_none());
        assert_eq!(LogValue::ZERO.powf(0.0).unwrap(), LogValue::ONE);
        assert!(LogValue::from_f64(-1.0).is_none());
    }

    #[test]
    fn log_sum_matches_plain_sum() {
        let mut acc = LogSum::new();
        let mut plain = 0.0;
        for k in 1..=1000u64 {
            let t = 1.0 / (k * k) as f64;
            plain += t;
            acc.push(LogValue::from_f64(t).unwrap());
        }
        assert!((acc.total().to_f64() - plain).abs() < 1e-14);
    }

    #[test]
    fn log_sum_survives_growing_terms() {
        let mut acc = LogSum::new();
        for k in 1..=8u32 {
            acc.push(LogValue::exp((k as f64).powi(k as i32)));
        }
        assert!((acc.total().ln() - 8f64.powi(8)).abs() < 1e-6);
    }

    #[test]
    fn tolerant_comparison() {
        let a = LogValue::exp(10.0);
        let b = LogValue::exp(10.0 + 1e-11);
        assert!(b.approx_le(&a));
        assert!(!LogValue::exp(10.1).approx_le(&a));
    }
}
