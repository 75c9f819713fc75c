//! Exact numbers of the form `a + b·√d` with rational `a`, `b`, `d`.
//!
//! Comparisons against rationals never touch floating point: the sign of
//! `r + b·√d` is decided from the signs of `r` and `b` and, when they
//! disagree, from `b²·d − r²`.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, serde_exact, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadraticSurd {
    #[serde(with = "serde_exact")]
    pub a: Rational,
    #[serde(with = "serde_exact")]
    pub b: Rational,
    #[serde(with = "serde_exact")]
    pub d: Rational,
}

/// Sign of `r + b·√d`, `d ≥ 0`.
fn sign_of(r: &Rational, b: &Rational, d: &Rational) -> Ordering {
    if b.is_zero() || d.is_zero() {
        return r.cmp(&Rational::zero());
    }
    let sb = b.cmp(&Rational::zero());
    let sr = r.cmp(&Rational::zero());
    if sr == Ordering::Equal || sr == sb {
        return sb;
    }
    // signs disagree: |b√d| vs |r|
    let lhs = b * b * d;
    let rhs = r * r;
    match lhs.cmp(&rhs) {
        Ordering::Equal => Ordering::Equal,
        Ordering::Greater => sb,
        Ordering::Less => sr,
    }
}

impl QuadraticSurd {
    /// `b` may carry either sign so that both roots of a real quadratic are
    /// representable; `d` must be non-negative.
    pub fn new(a: Rational, b: Rational, d: Rational) -> Result<Self> {
        if d.is_negative() {
            return Err(Error::InvalidArgument(format!(
                "surd radicand must be >= 0, got {}",
                rational::format_rational(&d)
            )));
        }
        Ok(Self { a, b, d })
    }

    pub fn rational(a: Rational) -> Self {
        Self { a, b: Rational::zero(), d: Rational::zero() }
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero() || self.d.is_zero() || {
            // perfect rational square
            let n = *self.d.numer();
            let q = *self.d.denom();
            is_square(n) && is_square(q)
        }
    }

    /// Ordering of `self` relative to the rational `q`.
    pub fn cmp_rational(&self, q: &Rational) -> Ordering {
        sign_of(&(self.a - q), &self.b, &self.d)
    }

    pub fn lt_rational(&self, q: &Rational) -> bool {
        self.cmp_rational(q) == Ordering::Less
    }

    pub fn le_rational(&self, q: &Rational) -> bool {
        self.cmp_rational(q) != Ordering::Greater
    }

    pub fn to_f64(&self) -> f64 {
        rational::to_f64(&self.a) + rational::to_f64(&self.b) * rational::to_f64(&self.d).sqrt()
    }

    /// Ordering between two surds sharing the same radicand.
    pub fn cmp_same_radicand(&self, other: &Self) -> Option<Ordering> {
        if self.d != other.d && !(self.b.is_zero() || other.b.is_zero()) {
            return None;
        }
        let d = if self.b.is_zero() { other.d } else { self.d };
        Some(sign_of(&(self.a - other.a), &(self.b - other.b), &d))
    }
}

fn is_square(n: i128) -> bool {
    if n < 0 {
        return false;
    }
    let r = num_integer::Roots::sqrt(&n);
    r * r == n
}

impl fmt::Display for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = rational::format_rational(&self.a);
        if self.b.is_zero() || self.d.is_zero() {
            return write!(f, "{a}");
        }
        let op = if self.b.is_negative() { "-" } else { "+" };
        let b = rational::format_rational(&self.b.abs());
        let d = rational::format_rational(&self.d);
        write!(f, "{a} {op} {b}·√({d})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};
    use proptest::prelude::*;

    #[test]
    fn sqrt_five_brackets() {
        let s = QuadraticSurd::new(int(0), int(1), int(5)).unwrap();
        assert!(s.cmp_rational(&frac(223, 100)) == Ordering::Greater);
        assert!(s.cmp_rational(&frac(224, 100)) == Ordering::Less);
    }

    #[test]
    fn degenerate_compares_as_rational() {
        let s = QuadraticSurd::new(frac(3, 2), int(0), int(7)).unwrap();
        assert_eq!(s.cmp_rational(&frac(3, 2)), Ordering::Equal);
        let s = QuadraticSurd::new(frac(3, 2), int(4), int(0)).unwrap();
        assert_eq!(s.cmp_rational(&int(1)), Ordering::Greater);
    }

    #[test]
    fn exact_equality_on_perfect_squares() {
        // 1 + 2·√(9/4) = 4
        let s = QuadraticSurd::new(int(1), int(2), frac(9, 4)).unwrap();
        assert_eq!(s.cmp_rational(&int(4)), Ordering::Equal);
        assert!(s.is_rational());
        let s = QuadraticSurd::new(int(1), int(-2), frac(9, 4)).unwrap();
        assert_eq!(s.cmp_rational(&int(-2)), Ordering::Equal);
    }

    #[test]
    fn negative_radicand_rejected() {
        assert!(QuadraticSurd::new(int(0), int(1), int(-1)).is_err());
    }

    proptest! {
        #[test]
        fn agrees_with_float_away_from_ties(
            a in -50i128..50, b in -20i128..20, d in 0i128..200,
            qn in -400i128..400, qd in 1i128..13,
        ) {
            let s = QuadraticSurd::new(int(a), int(b), int(d)).unwrap();
            let q = frac(qn, qd);
            let gap = s.to_f64() - rational::to_f64(&q);
            prop_assume!(gap.abs() > 1e-9);
            let expect = if gap > 0.0 { Ordering::Greater } else { Ordering::Less };
            prop_assert_eq!(s.cmp_rational(&q), expect);
        }
    }
}
