//! Exact positive rational constants such as the growth factor `c`.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A rational number kept in lowest terms with a positive denominator.
///
/// Textual form is `p/q` (or just `p` for integers).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RationalBound(BigRational);

impl RationalBound {
    pub fn new(numerator: impl Into<BigInt>, denominator: impl Into<BigInt>) -> Result<Self> {
        let numerator = numerator.into();
        let denominator = denominator.into();
        if denominator.is_zero() {
            return Err(Error::InvalidRational {
                input: format!("{numerator}/{denominator}"),
                reason: "zero denominator",
            });
        }
        Ok(Self(BigRational::new(numerator, denominator)))
    }

    pub fn from_integer(value: impl Into<BigInt>) -> Self {
        Self(BigRational::from_integer(value.into()))
    }

    pub fn numerator(&self) -> &BigInt {
        self.0.numer()
    }

    /// Always positive.
    pub fn denominator(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn as_ratio(&self) -> &BigRational {
        &self.0
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    /// `self > 1`.
    pub fn exceeds_one(&self) -> bool {
        self.0 > BigRational::one()
    }

    /// Exact test of `value <= self * base`.
    pub fn bounds_scaled(&self, base: &BigUint, value: &BigUint) -> bool {
        let lhs = BigInt::from_biguint(Sign::Plus, value.clone()) * self.denominator();
        let rhs = self.numerator() * BigInt::from_biguint(Sign::Plus, base.clone());
        lhs <= rhs
    }

    /// Exact test of `value - base <= self`.
    pub fn bounds_difference(&self, base: &BigUint, value: &BigUint) -> bool {
        let diff = BigInt::from_biguint(Sign::Plus, value.clone())
            - BigInt::from_biguint(Sign::Plus, base.clone());
        diff * self.denominator() <= *self.numerator()
    }
}

impl From<BigRational> for RationalBound {
    fn from(value: BigRational) -> Self {
        Self(value)
    }
}

impl fmt::Display for RationalBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator(), self.denominator())
    }
}

impl FromStr for RationalBound {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let invalid = |reason| Error::InvalidRational {
            input: s.to_string(),
            reason,
        };
        let (num, den) = match s.trim().split_once('/') {
            Some((num, den)) => (num.trim(), den.trim()),
            None => (s.trim(), "1"),
        };
        let num: BigInt = num
            .parse()
            .map_err(|_| invalid("numerator is not an integer"))?;
        let den: BigInt = den
            .parse()
            .map_err(|_| invalid("denominator is not an integer"))?;
        if den.is_zero() {
            return Err(invalid("zero denominator"));
        }
        Ok(Self(BigRational::new(num, den)))
    }
}

impl Serialize for RationalBound {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for RationalBound {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
