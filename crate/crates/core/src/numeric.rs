//! Exact rational arithmetic used by every other module.
//!
//! All probabilities, grid values and bounds in this crate are [`Rational`]s
//! backed by arbitrary-precision integers. Simplex pivoting grows numerators
//! quickly, so fixed-width arithmetic is not an option: a silent overflow
//! would corrupt feasibility certificates. Floating point appears only as a
//! display snapshot via [`Rational::to_f64`].

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

/// Error produced when parsing rational text.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RationalError {
    #[error("malformed rational `{0}`")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// Exact signed rational number, always in lowest terms with a positive
/// denominator. Values are immutable after construction and safe to share
/// across threads.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    /// Builds `num/den`. Panics if `den == 0`; use [`parse_rational`] for
    /// fallible construction from text.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_int(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_big(num: BigInt, den: BigInt) -> Result<Self, RationalError> {
        if den.is_zero() {
            return Err(RationalError::ZeroDenominator(format!("{num}/{den}")));
        }
        Ok(Rational(BigRational::new(num, den)))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// Sign as -1, 0 or +1.
    pub fn signum(&self) -> i8 {
        match self.0.cmp(&BigRational::zero()) {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    /// Exact integer power (negative exponents allowed for nonzero values).
    pub fn pow(&self, exp: i32) -> Self {
        Rational(self.0.pow(exp))
    }

    pub fn min_of(a: &Self, b: &Self) -> Self {
        if a <= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    pub fn max_of(a: &Self, b: &Self) -> Self {
        if a >= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    /// `true` when the value lies in the closed unit interval.
    pub fn in_unit_interval(&self) -> bool {
        !self.is_negative() && self <= &Rational::one()
    }

    /// Float snapshot for reporting. Never used for decisions.
    pub fn to_f64(&self) -> f64 {
        self.0
            .to_f64()
            .unwrap_or_else(|| self.0.numer().to_f64().unwrap_or(f64::NAN) / self.0.denom().to_f64().unwrap_or(f64::NAN))
    }

    pub fn checked_div(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            None
        } else {
            Some(self / rhs)
        }
    }
}

/// Parses `"int"`, `"int/int"` or a finite decimal such as `"0.3"` into an
/// exact rational (`0.3` becomes `3/10`).
pub fn parse_rational(text: &str) -> Result<Rational, RationalError> {
    let s = text.trim();
    if s.is_empty() {
        return Err(RationalError::Malformed(text.to_owned()));
    }
    if let Some((num, den)) = s.split_once('/') {
        let n = BigInt::from_str(num.trim()).map_err(|_| RationalError::Malformed(text.to_owned()))?;
        let d = BigInt::from_str(den.trim()).map_err(|_| RationalError::Malformed(text.to_owned()))?;
        if d.is_zero() {
            return Err(RationalError::ZeroDenominator(text.to_owned()));
        }
        return Ok(Rational(BigRational::new(n, d)));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        // Finite decimal: sign and integer digits, then fractional digits.
        let (sign, digits) = match int_part.strip_prefix('-') {
            Some(rest) => (-1, rest),
            None => (1, int_part.strip_prefix('+').unwrap_or(int_part)),
        };
        let digits = if digits.is_empty() { "0" } else { digits };
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(RationalError::Malformed(text.to_owned()));
        }
        let whole = BigInt::from_str(digits).map_err(|_| RationalError::Malformed(text.to_owned()))?;
        let frac = BigInt::from_str(frac_part).map_err(|_| RationalError::Malformed(text.to_owned()))?;
        let scale = BigInt::from(10u8).pow(frac_part.len() as u32);
        let numer = whole * &scale + frac;
        return Ok(Rational(BigRational::new(numer * BigInt::from(sign), scale)));
    }
    let n = BigInt::from_str(s).map_err(|_| RationalError::Malformed(text.to_owned()))?;
    Ok(Rational(BigRational::from_integer(n)))
}

impl FromStr for Rational {
    type Err = RationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_rational(s)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Default for Rational {
    fn default() -> Self {
        Rational::zero()
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_int(n)
    }
}

impl From<u32> for Rational {
    fn from(n: u32) -> Self {
        Rational::from_int(i64::from(n))
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((self.0).$method(rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        parse_rational(&s).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn parse_reduces_to_lowest_terms() {
        assert_eq!(parse_rational("2/4").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("2/4").unwrap().to_string(), "1/2");
    }

    #[test]
    fn parse_decimal_is_exact() {
        assert_eq!(parse_rational("0.3").unwrap(), rat(3, 10));
        assert_eq!(parse_rational("-1.25").unwrap(), rat(-5, 4));
        assert_eq!(parse_rational("2.").is_err(), true);
    }

    #[test]
    fn parse_negative_fraction() {
        assert_eq!(parse_rational("-7/3").unwrap(), rat(-7, 3));
        // Negative denominators normalize to a positive denominator.
        assert_eq!(parse_rational("7/-3").unwrap(), rat(-7, 3));
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(matches!(parse_rational("1/0"), Err(RationalError::ZeroDenominator(_))));
        assert!(parse_rational("").is_err());
        assert!(parse_rational("a/b").is_err());
        assert!(parse_rational("1.2.3").is_err());
        assert!(parse_rational("1e3").is_err());
    }

    #[test]
    fn display_integer_omits_denominator() {
        assert_eq!(rat(6, 2).to_string(), "3");
        assert_eq!(rat(-7, 3).to_string(), "-7/3");
    }

    #[test]
    fn float_snapshot() {
        assert_eq!(rat(1, 2).to_f64(), 0.5);
        assert_eq!(rat(-3, 4).to_f64(), -0.75);
    }

    #[test]
    fn serde_round_trip() {
        let r = rat(-22, 7);
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(json, "\"-22/7\"");
        let back: Rational = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }

    proptest! {
        #[test]
        fn add_sub_round_trip(an in -1000i64..1000, ad in 1i64..60, bn in -1000i64..1000, bd in 1i64..60) {
            let a = rat(an, ad);
            let b = rat(bn, bd);
            prop_assert_eq!(&(&(&a + &b) - &b), &a);
        }

        #[test]
        fn ordering_matches_cross_multiplication(an in -500i64..500, ad in 1i64..40, bn in -500i64..500, bd in 1i64..40) {
            let a = rat(an, ad);
            let b = rat(bn, bd);
            // an/ad < bn/bd  iff  an*bd < bn*ad (positive denominators).
            prop_assert_eq!(a < b, an * bd < bn * ad);
            prop_assert_eq!(a == b, an * bd == bn * ad);
        }

        #[test]
        fn parse_display_round_trip(n in -10000i64..10000, d in 1i64..500) {
            let r = rat(n, d);
            prop_assert_eq!(parse_rational(&r.to_string()).unwrap(), r);
        }
    }
}
