//! Exact scalars.
//!
//! Three tiers share one interface, [`ExactScalar`]:
//! - [`Rational`]: arbitrary-precision fractions, closed under all field operations.
//! - [`Scalar`] with at most one quadratic surd: a real quadratic field, still
//!   closed under multiplication and division, with exact sign.
//! - [`Scalar`] over several generators: a Q-linear span, closed only under
//!   addition and rational scaling, with sign decided by interval refinement.
//!
//! Everything geometric in this crate is generic over [`ExactScalar`], so the
//! same code runs on plain rationals (fast) and on irrational coordinates.

mod generator;
mod precision;
mod rational;
mod value;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::Result;

pub use generator::{Generator, GeneratorKind};
pub use precision::{max_precision_bits, set_max_precision_bits, DEFAULT_MAX_PRECISION_BITS};
pub use rational::{denominator_lcm, parse_rational, Rational};
pub use value::Scalar;

/// Sign of an exact number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }

    pub fn to_ordering(self) -> Ordering {
        match self {
            Sign::Negative => Ordering::Less,
            Sign::Zero => Ordering::Equal,
            Sign::Positive => Ordering::Greater,
        }
    }

    pub fn of_rational(r: &Rational) -> Sign {
        match r.cmp(&Rational::zero()) {
            Ordering::Less => Sign::Negative,
            Ordering::Equal => Sign::Zero,
            Ordering::Greater => Sign::Positive,
        }
    }
}

/// Rational constant plus rational coefficients over generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expansion {
    pub constant: Rational,
    pub terms: Vec<(Generator, Rational)>,
}

impl Expansion {
    /// Every rational number that appears, constant first.
    pub fn coefficients(&self) -> impl Iterator<Item = &Rational> {
        std::iter::once(&self.constant).chain(self.terms.iter().map(|(_, c)| c))
    }
}

/// An exactly represented real number with certified sign.
///
/// Addition, subtraction and rational scaling are total. Multiplication and
/// division may fail when the result leaves the representable tier.
pub trait ExactScalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Send
    + Sync
    + 'static
    + Zero
    + Add<Output = Self>
    + Sub<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
{
    fn from_rational(r: Rational) -> Self;

    fn from_integer(n: BigInt) -> Self {
        Self::from_rational(Rational::from_integer(n))
    }

    fn from_i64(n: i64) -> Self {
        Self::from_integer(BigInt::from(n))
    }

    /// Multiplication by a rational; never fails.
    fn scale(&self, factor: &Rational) -> Self;

    fn try_mul(&self, other: &Self) -> Result<Self>;

    fn try_div(&self, other: &Self) -> Result<Self>;

    fn sign(&self) -> Result<Sign>;

    /// Greatest integer `n` with `n <= self`.
    fn floor(&self) -> Result<BigInt>;

    fn ceil(&self) -> Result<BigInt> {
        Ok(-(-self.clone()).floor()?)
    }

    /// Rational interval `[lo, hi]` containing `self` with `hi - lo <= precision`.
    fn to_interval(&self, precision: &Rational) -> Result<(Rational, Rational)>;

    fn as_rational(&self) -> Option<Rational>;

    fn expansion(&self) -> Expansion;

    fn try_cmp(&self, other: &Self) -> Result<Ordering> {
        Ok((self.clone() - other).sign()?.to_ordering())
    }

    /// Floating-point approximation, for diagnostics and rendering only.
    fn approx_f64(&self) -> f64 {
        let precision = Rational::new(BigInt::one(), BigInt::one() << 64u32);
        match self.to_interval(&precision) {
            Ok((lo, hi)) => rational::to_f64(&((lo + hi) / Rational::from_integer(2.into()))),
            Err(_) => f64::NAN,
        }
    }
}

/// Sorts with a fallible comparator, returning the first comparison error.
pub fn try_sort_by<T, F>(items: &mut [T], mut cmp: F) -> Result<()>
where
    F: FnMut(&T, &T) -> Result<Ordering>,
{
    let mut failure = None;
    items.sort_by(|a, b| match cmp(a, b) {
        Ok(ord) => ord,
        Err(e) => {
            failure.get_or_insert(e);
            Ordering::Equal
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

/// Sorts scalars ascending and removes exact duplicates.
pub fn sort_dedup<T: ExactScalar>(values: &mut Vec<T>) -> Result<()> {
    try_sort_by(values, |a, b| a.try_cmp(b))?;
    values.dedup();
    Ok(())
}

/// `a·b` summed over the pairs; fails only outside the field tier.
pub fn dot<T: ExactScalar>(a: &[T], b: &[T]) -> Result<T> {
    let mut acc = T::zero();
    for (x, y) in a.iter().zip(b) {
        if x.is_zero() || y.is_zero() {
            continue;
        }
        acc = acc + &x.try_mul(y)?;
    }
    Ok(acc)
}

/// Dot product with an integer vector.
pub fn dot_int<T: ExactScalar>(a: &[T], b: &[i64]) -> T {
    let mut acc = T::zero();
    for (x, &k) in a.iter().zip(b) {
        if k != 0 {
            acc = acc + &x.scale(&Rational::from_integer(k.into()));
        }
    }
    acc
}
