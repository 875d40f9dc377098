//! Non-negative rate values that are either exact rationals or `f64`.
//!
//! Anything parsed from a text literal is kept exact. Values only become
//! floating point when they come out of trajectory estimation, or when an
//! exact value is combined with one that already is.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A rate constant, transition rate or intensity value.
#[derive(Clone, Debug)]
pub enum Rate {
    Exact(BigRational),
    Float(f64),
}

impl Rate {
    pub fn zero() -> Self {
        Rate::Exact(BigRational::zero())
    }

    pub fn one() -> Self {
        Rate::Exact(BigRational::one())
    }

    pub fn from_integer(n: i64) -> Self {
        Rate::Exact(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Rate::Exact(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_biguint(n: &BigUint) -> Self {
        Rate::Exact(BigRational::from_integer(BigInt::from(n.clone())))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Rate::Exact(_))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Rate::Exact(r) => r.is_zero(),
            Rate::Float(f) => *f == 0.0,
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Rate::Exact(r) => r.is_positive(),
            Rate::Float(f) => *f > 0.0,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Rate::Exact(r) => r.is_negative(),
            Rate::Float(f) => *f < 0.0,
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            Rate::Exact(_) => true,
            Rate::Float(f) => f.is_finite(),
        }
    }

    pub fn abs(&self) -> Rate {
        match self {
            Rate::Exact(r) => Rate::Exact(r.abs()),
            Rate::Float(f) => Rate::Float(f.abs()),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Rate::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Rate::Float(f) => *f,
        }
    }

    /// Multiplies by a non-negative integer (a falling factorial).
    pub fn scale(&self, factor: &BigUint) -> Rate {
        match self {
            Rate::Exact(r) => Rate::Exact(r * BigRational::from_integer(BigInt::from(factor.clone()))),
            Rate::Float(f) => Rate::Float(f * factor.to_f64().unwrap_or(f64::INFINITY)),
        }
    }

    /// Drops exactness, keeping the nearest `f64`.
    pub fn to_float(&self) -> Rate {
        Rate::Float(self.to_f64())
    }

    fn binary(
        &self,
        other: &Rate,
        exact: impl FnOnce(&BigRational, &BigRational) -> BigRational,
        float: impl FnOnce(f64, f64) -> f64,
    ) -> Rate {
        match (self, other) {
            (Rate::Exact(a), Rate::Exact(b)) => Rate::Exact(exact(a, b)),
            _ => Rate::Float(float(self.to_f64(), other.to_f64())),
        }
    }
}

impl Default for Rate {
    fn default() -> Self {
        Rate::zero()
    }
}

impl From<f64> for Rate {
    fn from(value: f64) -> Self {
        Rate::Float(value)
    }
}

impl From<BigRational> for Rate {
    fn from(value: BigRational) -> Self {
        Rate::Exact(value)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl<'a> $trait<&'a Rate> for &'a Rate {
            type Output = Rate;
            fn $method(self, rhs: &'a Rate) -> Rate {
                self.binary(rhs, |a, b| a $op b, |a, b| a $op b)
            }
        }

        impl $trait<Rate> for Rate {
            type Output = Rate;
            fn $method(self, rhs: Rate) -> Rate {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, +);
forward_binop!(Sub, sub, -);
forward_binop!(Mul, mul, *);

impl<'a> Div<&'a Rate> for &'a Rate {
    type Output = Rate;
    /// Division by an exact zero panics like any rational division would.
    fn div(self, rhs: &'a Rate) -> Rate {
        self.binary(rhs, |a, b| a / b, |a, b| a / b)
    }
}

impl Div<Rate> for Rate {
    type Output = Rate;
    fn div(self, rhs: Rate) -> Rate {
        (&self).div(&rhs)
    }
}

impl Neg for Rate {
    type Output = Rate;
    fn neg(self) -> Rate {
        match self {
            Rate::Exact(r) => Rate::Exact(-r),
            Rate::Float(f) => Rate::Float(-f),
        }
    }
}

impl std::iter::Sum for Rate {
    fn sum<I: Iterator<Item = Rate>>(iter: I) -> Rate {
        iter.fold(Rate::zero(), |acc, r| acc + r)
    }
}

impl PartialEq for Rate {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for Rate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Rate::Exact(a), Rate::Exact(b)) => Some(a.cmp(b)),
            _ => self.to_f64().partial_cmp(&other.to_f64()),
        }
    }
}

impl fmt::Display for Rate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rate::Exact(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Rate::Exact(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            // Shortest representation that parses back to the same f64.
            Rate::Float(x) => write!(f, "{x:?}"),
        }
    }
}

/// Error from parsing a rate literal.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rate literal `{0}`")]
pub struct RateParseError(pub String);

impl FromStr for Rate {
    type Err = RateParseError;

    /// Accepts integers, `p/q` rationals and decimals with an optional
    /// exponent (`1.5`, `5.3e-4`). All of them are stored exactly.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let err = || RateParseError(s.to_string());
        if let Some((num, den)) = s.split_once('/') {
            let num = parse_decimal(num.trim()).ok_or_else(err)?;
            let den = parse_decimal(den.trim()).ok_or_else(err)?;
            if den.is_zero() {
                return Err(err());
            }
            return Ok(Rate::Exact(num / den));
        }
        parse_decimal(s).map(Rate::Exact).ok_or_else(err)
    }
}

fn parse_decimal(s: &str) -> Option<BigRational> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: String = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(digits.parse::<BigInt>().ok()?);
    let shift = exponent.checked_sub(i32::try_from(frac_part.len()).ok()?)?;
    let ten = BigRational::from_integer(BigInt::from(10));
    let power = num_traits::pow(ten, shift.unsigned_abs() as usize);
    if shift >= 0 {
        value *= power;
    } else {
        value /= power;
    }
    Some(if negative { -value } else { value })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_literals_exactly() {
        assert_eq!("2".parse::<Rate>().unwrap(), Rate::from_integer(2));
        assert_eq!("1/4".parse::<Rate>().unwrap(), Rate::ratio(1, 4));
        assert_eq!("0.25".parse::<Rate>().unwrap(), Rate::ratio(1, 4));
        assert_eq!("5.3e-4".parse::<Rate>().unwrap(), Rate::ratio(53, 100_000));
        assert_eq!("1.5E2".parse::<Rate>().unwrap(), Rate::from_integer(150));
        assert!("5.3e-4".parse::<Rate>().unwrap().is_exact());
        assert!("abc".parse::<Rate>().is_err());
        assert!("1/0".parse::<Rate>().is_err());
        assert!("".parse::<Rate>().is_err());
        assert!(".".parse::<Rate>().is_err());
    }

    #[test]
    fn display_round_trips() {
        for text in ["3", "7/2", "-1/3"] {
            let r: Rate = text.parse().unwrap();
            assert_eq!(r.to_string(), text);
        }
        let f = Rate::Float(0.000_53);
        assert_eq!(f.to_string().parse::<Rate>().unwrap().to_f64(), 0.000_53);
    }

    #[test]
    fn mixed_arithmetic_degrades_to_float() {
        let a = Rate::ratio(1, 2);
        let b = Rate::Float(0.25);
        let sum = &a + &b;
        assert!(!sum.is_exact());
        assert_eq!(sum.to_f64(), 0.75);
        assert!((&a + &a).is_exact());
    }
}
