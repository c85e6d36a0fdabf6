//! Exact arbitrary-precision rationals.
//!
//! Every value produced by this crate is a [`Rational`]: an always-reduced
//! fraction with positive denominator backed by arbitrary-precision integers.
//! No rounding occurs anywhere; equality is exact equality.

use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// An exact rational number, always in lowest terms with positive denominator.
///
/// Zero is `0/1`. Text form is `num/den`, with integers printed bare
/// (`-7/12`, `3`, `0`). The JSON form is `{"num": "...", "den": "..."}` with
/// string-encoded integers so consumers never lose precision.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn from_integer(v: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(v)))
    }

    /// `1/d` for a nonzero integer `d` of either sign.
    ///
    /// Panics if `d == 0`; callers only form reciprocals of differences,
    /// products, and sums of distinct positive integers, which are nonzero.
    pub fn reciprocal(d: i128) -> Self {
        assert!(d != 0, "reciprocal of zero");
        Rational(BigRational::new(BigInt::one(), BigInt::from(d)))
    }

    /// Exact quotient of two big integers. Panics if `den` is zero.
    pub fn from_ratio(num: BigInt, den: BigInt) -> Self {
        Rational(BigRational::new(num, den))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// The integer value, if this rational is an integer that fits in `i64`.
    pub fn to_i64(&self) -> Option<i64> {
        if !self.0.is_integer() {
            return None;
        }
        num_traits::ToPrimitive::to_i64(&self.0.to_integer())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational(r)
    }
}

impl Add for &Rational {
    type Output = Rational;
    fn add(self, rhs: &Rational) -> Rational {
        Rational(&self.0 + &rhs.0)
    }
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Rational) -> Rational {
        Rational(self.0 + rhs.0)
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 = &self.0 + &rhs.0;
    }
}

impl Sub for &Rational {
    type Output = Rational;
    fn sub(self, rhs: &Rational) -> Rational {
        Rational(&self.0 - &rhs.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Failure to parse a `num/den` or bare-integer rational literal.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid integer part in rational literal: {0:?}")]
    BadInteger(String),
    #[error("zero denominator in rational literal")]
    ZeroDenominator,
}

impl FromStr for Rational {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(ParseRationalError::Empty);
        }
        let (num_text, den_text) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), Some(d.trim())),
            None => (s, None),
        };
        let num = BigInt::from_str(num_text)
            .map_err(|_| ParseRationalError::BadInteger(num_text.to_string()))?;
        let den = match den_text {
            Some(d) => {
                BigInt::from_str(d).map_err(|_| ParseRationalError::BadInteger(d.to_string()))?
            }
            None => BigInt::one(),
        };
        if den.is_zero() {
            return Err(ParseRationalError::ZeroDenominator);
        }
        Ok(Rational(BigRational::new(num, den)))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("Rational", 2)?;
        st.serialize_field("num", &self.0.numer().to_string())?;
        st.serialize_field("den", &self.0.denom().to_string())?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Parts {
            num: String,
            den: String,
        }
        let parts = Parts::deserialize(deserializer)?;
        let num = BigInt::from_str(&parts.num)
            .map_err(|_| serde::de::Error::custom("invalid numerator"))?;
        let den = BigInt::from_str(&parts.den)
            .map_err(|_| serde::de::Error::custom("invalid denominator"))?;
        if den.is_zero() {
            return Err(serde::de::Error::custom("zero denominator"));
        }
        Ok(Rational(BigRational::new(num, den)))
    }
}
