//! Dense univariate polynomials over exact rationals, used to certify that a
//! quadratic form stays positive along the tail of a spectrum.

use num_traits::{One, Signed, Zero};

use crate::rational::{int, Rational};

/// Coefficients in increasing degree: `coeffs[i]` multiplies `x^i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Rational::zero());
        }
        Self { coeffs }
    }

    pub fn x() -> Self {
        Self::new(vec![Rational::zero(), Rational::one()])
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> Rational {
        *self.coeffs.last().unwrap()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = Rational::zero();
        Self::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) + other.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&int(-1)))
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// `p(x + s)`.
    pub fn shift(&self, s: &Rational) -> Self {
        // Horner in polynomial arithmetic
        let lin = Self::new(vec![*s, Rational::one()]);
        self.coeffs
            .iter()
            .rev()
            .fold(Self::constant(Rational::zero()), |acc, c| acc.mul(&lin).add(&Self::constant(*c)))
    }

    fn shifted_is_positive(&self, s: &Rational) -> bool {
        let q = self.shift(s);
        q.coeffs[0].is_positive() && q.coeffs.iter().all(|c| !c.is_negative())
    }

    /// Smallest non-negative integer `B` (found by doubling then bisection)
    /// such that every coefficient of `p(x + B)` is non-negative and its
    /// constant term is positive, which certifies `p(λ) > 0` for all
    /// `λ ≥ B`. `None` when the leading coefficient is not positive.
    pub fn positive_beyond(&self) -> Option<Rational> {
        if !self.leading().is_positive() {
            return None;
        }
        if self.shifted_is_positive(&Rational::zero()) {
            return Some(Rational::zero());
        }
        let mut hi: i128 = 1;
        while !self.shifted_is_positive(&int(hi)) {
            hi = hi.checked_mul(2)?;
        }
        let mut lo = hi / 2;
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.shifted_is_positive(&int(mid)) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Some(int(hi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    #[test]
    fn shift_matches_eval() {
        let p = Poly::new(vec![int(3), int(-7), frac(1, 2), int(2)]);
        let s = frac(5, 3);
        let q = p.shift(&s);
        for x in [int(0), int(1), frac(-2, 7), int(11)] {
            assert_eq!(q.eval(&x), p.eval(&(x + s)));
        }
    }

    #[test]
    fn tail_certificate_is_sound() {
        // (x - 3)(x - 10)(x + 4)
        let p = Poly::new(vec![int(-3), int(1)])
            .mul(&Poly::new(vec![int(-10), int(1)]))
            .mul(&Poly::new(vec![int(4), int(1)]));
        let b = p.positive_beyond().unwrap();
        assert!(b > int(10));
        let mut x = b;
        for _ in 0..50 {
            assert!(p.eval(&x) > int(0));
            x += frac(7, 3);
        }
    }

    #[test]
    fn negative_leading_has_no_certificate() {
        assert!(Poly::new(vec![int(1), int(-1)]).positive_beyond().is_none());
    }
}
