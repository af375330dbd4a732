//! Arbitrary-precision rational numbers, the coefficient field for all exact
//! computation in this crate.
//!
//! `Rational` is a thin wrapper over [`num_rational::BigRational`] that pins
//! the canonical form (lowest terms, positive denominator, zero as 0/1) and
//! the `num/den` text format used by every serialized artifact.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// Signed rational with arbitrary-precision numerator and positive
/// denominator, always in lowest terms.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    /// Builds `num/den`, reducing to canonical form. Fails on `den == 0`.
    pub fn new(num: i64, den: i64) -> Result<Self, Error> {
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(Self(BigRational::new(num.into(), den.into())))
    }

    pub fn from_int(n: i64) -> Self {
        Self(BigRational::from_integer(n.into()))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self(BigRational::from_integer(n))
    }

    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    pub fn one() -> Self {
        Self(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn numerator(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denominator(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn abs(&self) -> Self {
        Self(self.0.abs())
    }

    /// Integer value when the denominator is 1 and the numerator fits i64.
    pub fn to_i64(&self) -> Option<i64> {
        if self.0.is_integer() {
            self.0.numer().to_i64()
        } else {
            None
        }
    }

    /// Nearest binary float; may round for large numerators/denominators.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Multiplicative inverse; fails on zero.
    pub fn recip(&self) -> Result<Self, Error> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self(self.0.recip()))
    }

    /// Integer power with negative exponents allowed for nonzero bases.
    pub fn pow_i64(&self, exp: i64) -> Result<Self, Error> {
        if self.is_zero() && exp < 0 {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(if exp == 0 { Self::one() } else { Self::zero() });
        }
        let mag = exp.unsigned_abs() as u32;
        let mut out = BigRational::one();
        let mut base = self.0.clone();
        let mut e = mag;
        while e > 0 {
            if e & 1 == 1 {
                out *= &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        if exp < 0 {
            out = out.recip();
        }
        Ok(Self(out))
    }

    /// Always-explicit `num/den` form, e.g. `-1/1`; this is the wire format.
    pub fn fraction_string(&self) -> String {
        format!("{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Compact: integers print without the /1.
        self.0.fmt(f)
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Rational({})", self.fraction_string())
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Accepts `a` or `a/b` with optional signs; normalizes the result.
    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let parse_int = |t: &str| {
            t.parse::<BigInt>()
                .map_err(|_| Error::Parse(format!("bad integer literal `{t}`")))
        };
        match s.split_once('/') {
            None => Ok(Self(BigRational::from_integer(parse_int(s)?))),
            Some((num, den)) => {
                let den = parse_int(den)?;
                if den.is_zero() {
                    return Err(Error::Parse(format!("zero denominator in `{s}`")));
                }
                Ok(Self(BigRational::new(parse_int(num)?, den)))
            }
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                (&self).$method(rhs)
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Div for &Rational {
    type Output = Rational;

    /// Panics on a zero divisor; use [`Rational::recip`] when the divisor
    /// is not known to be nonzero.
    fn div(self, rhs: &Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero rational");
        Rational(&self.0 / &rhs.0)
    }
}

impl Div for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        &self / &rhs
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

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rational> for Rational {
    fn mul_assign(&mut self, rhs: &Rational) {
        self.0 *= &rhs.0;
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.fraction_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let r = Rational::new(2, -4).unwrap();
        assert_eq!(r.fraction_string(), "-1/2");
        assert_eq!(Rational::new(0, 7).unwrap().fraction_string(), "0/1");
        assert!(Rational::new(1, 0).is_err());
    }

    #[test]
    fn parse_round_trip() {
        for s in ["3/4", "-3/4", "0/1", "17/1", "-5/9"] {
            let r: Rational = s.parse().unwrap();
            assert_eq!(r.fraction_string(), s);
        }
        let r: Rational = "6/-4".parse().unwrap();
        assert_eq!(r.fraction_string(), "-3/2");
        assert!("1/0".parse::<Rational>().is_err());
        assert!("a/b".parse::<Rational>().is_err());
    }

    #[test]
    fn powers() {
        let half = Rational::new(1, 2).unwrap();
        assert_eq!(half.pow_i64(3).unwrap(), Rational::new(1, 8).unwrap());
        assert_eq!(half.pow_i64(-2).unwrap(), Rational::from_int(4));
        assert_eq!(half.pow_i64(0).unwrap(), Rational::one());
        assert!(Rational::zero().pow_i64(-1).is_err());
    }

    #[test]
    fn arithmetic() {
        let a = Rational::new(1, 3).unwrap();
        let b = Rational::new(1, 6).unwrap();
        assert_eq!(&a + &b, Rational::new(1, 2).unwrap());
        assert_eq!(&a - &b, b);
        assert_eq!(&a * &b, Rational::new(1, 18).unwrap());
        assert_eq!(&a / &b, Rational::from_int(2));
    }
}
