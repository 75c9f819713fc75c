//! Exact rationals shared by the spectral and quadratic-form layers.
//!
//! Everything sign-relevant is computed in `Ratio<i128>`. Values crossing a
//! text boundary are written as `"p/q"` strings or as explicit
//! numerator/denominator pairs, never as floats.

use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;

pub type Rational = Ratio<i128>;

pub fn int(n: i128) -> Rational {
    Rational::from_integer(n)
}

pub fn frac(num: i128, den: i128) -> Rational {
    Rational::new(num, den)
}

/// Parses `"p/q"`, `"p"`, or `"-p/q"`; rejects a zero denominator.
pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let bad = || Error::ParseRational(s.to_string());
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num = i128::from_str(num).map_err(|_| bad())?;
    let den = i128::from_str(den).map_err(|_| bad())?;
    if den == 0 {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// `"p/q"`, or `"p"` for integers.
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn to_f64(q: &Rational) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}

pub fn sign(q: &Rational) -> i8 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}

/// Wire form of a rational: `{"num": p, "den": q}` with `q > 0` and the
/// fraction reduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalRepr {
    pub num: i128,
    pub den: i128,
}

impl From<&Rational> for RationalRepr {
    fn from(q: &Rational) -> Self {
        Self { num: *q.numer(), den: *q.denom() }
    }
}

/// `#[serde(with = "crate::rational::serde_exact")]` for `Rational` fields.
pub mod serde_exact {
    use super::*;
    use serde::{de, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        RationalRepr::from(q).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let r = RationalRepr::deserialize(d)?;
        if r.den == 0 {
            return Err(de::Error::custom("zero denominator"));
        }
        Ok(Rational::new(r.num, r.den))
    }
}

pub mod serde_exact_opt {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        q.as_ref().map(RationalRepr::from).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        let r = Option::<RationalRepr>::deserialize(d)?;
        Ok(r.map(|r| Rational::new(r.num, r.den)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("3/2").unwrap(), frac(3, 2));
        assert_eq!(parse_rational(" -4/6 ").unwrap(), frac(-2, 3));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("1.5").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn format_round_trips() {
        for q in [frac(-5, 3), int(0), int(12), frac(1, 7)] {
            assert_eq!(parse_rational(&format_rational(&q)).unwrap(), q);
        }
    }
}
