//! Exact rationals and their text form.
//!
//! Exact values travel as strings `"num/den"` (denominator omitted when it is
//! 1); floating values are rounded to 12 significant digits before printing.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

pub fn frac(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Rational {
    Rational::new(num.into(), den.into())
}

pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Accepts `a/b`, integers and finite decimals (`0.01`, exactly).
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Precondition(format!("`{s}` is not a rational number"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, dec)) = s.split_once('.') {
        if dec.is_empty() || !dec.bytes().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = whole.starts_with('-');
        let whole: BigInt = if whole.is_empty() || whole == "-" {
            BigInt::zero()
        } else {
            whole.parse().map_err(|_| bad())?
        };
        let scale = BigInt::from(10u32).pow(dec.len() as u32);
        let frac_part: BigInt = dec.parse().map_err(|_| bad())?;
        let mag = whole.abs() * &scale + frac_part;
        return Ok(Rational::new(if neg { -mag } else { mag }, scale));
    }
    Ok(int(s.parse::<BigInt>().map_err(|_| bad())?))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Rounds to 12 significant digits and prints the shortest decimal that
/// reads back to the rounded value.
pub fn format_real(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    format!("{rounded}")
}

pub fn round_real(x: f64) -> f64 {
    if x.is_finite() {
        format!("{x:.11e}").parse().unwrap_or(x)
    } else {
        x
    }
}

/// serde adapter: a `Rational` as a `"num/den"` string.
pub mod as_string {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// serde adapter: an `f64` rounded to 12 significant digits.
pub mod as_real {
    use super::*;

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_f64(round_real(*x))
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
    }
}

/// A checked quantity: exact when it can be, floating otherwise.
#[derive(Debug, Clone, PartialEq)]
pub enum Quantity {
    Exact(Rational),
    Real(f64),
}

impl Quantity {
    pub fn to_f64(&self) -> f64 {
        match self {
            Quantity::Exact(r) => to_f64(r),
            Quantity::Real(x) => *x,
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Quantity::Exact(r) => r.is_positive(),
            Quantity::Real(x) => *x > 0.0,
        }
    }
}

impl From<Rational> for Quantity {
    fn from(r: Rational) -> Self {
        Quantity::Exact(r)
    }
}

impl From<u64> for Quantity {
    fn from(n: u64) -> Self {
        Quantity::Exact(int(n))
    }
}

impl From<usize> for Quantity {
    fn from(n: usize) -> Self {
        Quantity::Exact(int(n))
    }
}

impl Serialize for Quantity {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Quantity::Exact(r) => s.serialize_str(&format_rational(r)),
            Quantity::Real(x) => as_real::serialize(x, s),
        }
    }
}

impl<'de> Deserialize<'de> for Quantity {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            S(String),
            F(f64),
        }
        Ok(match Raw::deserialize(d)? {
            Raw::S(s) => Quantity::Exact(parse_rational(&s).map_err(serde::de::Error::custom)?),
            Raw::F(x) => Quantity::Real(x),
        })
    }
}
