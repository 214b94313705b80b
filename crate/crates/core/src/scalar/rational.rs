use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{ExactScalar, Expansion, Sign};
use crate::error::{Error, Result};

pub type Rational = BigRational;

impl ExactScalar for Rational {
    fn from_rational(r: Rational) -> Self {
        r
    }

    fn scale(&self, factor: &Rational) -> Self {
        self * factor
    }

    fn try_mul(&self, other: &Self) -> Result<Self> {
        Ok(self * other)
    }

    fn try_div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self / other)
    }

    fn sign(&self) -> Result<Sign> {
        Ok(Sign::of_rational(self))
    }

    fn floor(&self) -> Result<BigInt> {
        Ok(self.numer().div_floor(self.denom()))
    }

    fn to_interval(&self, _precision: &Rational) -> Result<(Rational, Rational)> {
        Ok((self.clone(), self.clone()))
    }

    fn as_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }

    fn expansion(&self) -> Expansion {
        Expansion {
            constant: self.clone(),
            terms: Vec::new(),
        }
    }

    fn approx_f64(&self) -> f64 {
        to_f64(self)
    }
}

/// Parses `"p"` or `"p/q"` (optional sign, surrounding whitespace allowed).
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(num, den))
}

/// Least common multiple of the denominators; 1 for an empty input.
pub fn denominator_lcm<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values.into_iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

pub(crate) fn pow2(bits: u32) -> BigInt {
    BigInt::one() << bits
}

/// `2^-bits`.
pub(crate) fn unit_fraction(bits: u32) -> Rational {
    Rational::new(BigInt::one(), pow2(bits))
}

pub(crate) fn to_f64(r: &Rational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // Very large numerators or denominators: shift both down to f64 range.
    let n_bits = r.numer().bits() as i64;
    let d_bits = r.denom().bits() as i64;
    let shift_n = (n_bits - 60).max(0) as u32;
    let shift_d = (d_bits - 60).max(0) as u32;
    let n = (r.numer().abs() >> shift_n).to_f64().unwrap_or(f64::MAX);
    let d = (r.denom() >> shift_d).to_f64().unwrap_or(f64::MAX);
    let sign = if r.is_negative() { -1.0 } else { 1.0 };
    sign * (n / d) * 2f64.powi(shift_n as i32 - shift_d as i32)
}
