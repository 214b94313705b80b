use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::rational::{pow2, Rational};
use crate::error::{Error, Result};

/// Trial division stops here; larger cofactors are rejected as radicands.
const TRIAL_DIVISION_LIMIT: u64 = 10_000_000;

/// An irrational number that scalar coefficients refer to.
///
/// Generators are ordered canonically (quadratic surds by radicand, then
/// symbolic generators by name) so that coefficient lists have one normal form.
#[derive(Clone)]
pub struct Generator(Arc<GeneratorKind>);

#[derive(Debug, PartialEq, Eq)]
pub enum GeneratorKind {
    /// `√radicand` with a squarefree integer radicand `> 1`.
    QuadraticSurd { radicand: BigInt },
    /// A named real known through a chain of nested rational intervals, each
    /// strictly narrower than the previous one. Linear independence from the
    /// other generators is the caller's claim and is not checked.
    Symbolic {
        name: String,
        intervals: Vec<(Rational, Rational)>,
    },
}

impl Generator {
    /// `√radicand`. The radicand must be a squarefree integer greater than 1;
    /// use [`super::Scalar::sqrt`] for arbitrary positive rationals.
    pub fn quadratic_surd(radicand: BigInt) -> Result<Self> {
        if radicand <= BigInt::one() {
            return Err(Error::InvalidGenerator(format!("radicand {radicand} must exceed 1")));
        }
        let (square, free) = squarefree_decomposition(&radicand)?;
        if !square.is_one() {
            return Err(Error::InvalidGenerator(format!(
                "radicand {radicand} is not squarefree (= {square}^2 * {free})"
            )));
        }
        Ok(Generator(Arc::new(GeneratorKind::QuadraticSurd { radicand })))
    }

    pub fn symbolic(name: impl Into<String>, intervals: Vec<(Rational, Rational)>) -> Result<Self> {
        let name = name.into();
        if name.is_empty() || name.contains(|c: char| c.is_whitespace() || "+-*/".contains(c)) {
            return Err(Error::InvalidGenerator(format!("bad symbolic name {name:?}")));
        }
        if intervals.is_empty() {
            return Err(Error::InvalidGenerator(format!("{name}: no enclosing interval")));
        }
        let mut prev: Option<&(Rational, Rational)> = None;
        for iv in &intervals {
            if iv.0 >= iv.1 {
                return Err(Error::InvalidGenerator(format!(
                    "{name}: interval [{}, {}] is empty or degenerate",
                    iv.0, iv.1
                )));
            }
            if let Some(p) = prev {
                let nested = iv.0 >= p.0 && iv.1 <= p.1;
                if !nested || (&iv.1 - &iv.0) >= (&p.1 - &p.0) {
                    return Err(Error::InvalidGenerator(format!(
                        "{name}: refinement [{}, {}] does not strictly shrink [{}, {}]",
                        iv.0, iv.1, p.0, p.1
                    )));
                }
            }
            prev = Some(iv);
        }
        Ok(Generator(Arc::new(GeneratorKind::Symbolic { name, intervals })))
    }

    pub fn kind(&self) -> &GeneratorKind {
        &self.0
    }

    pub fn is_quadratic_surd(&self) -> bool {
        matches!(*self.0, GeneratorKind::QuadraticSurd { .. })
    }

    pub fn radicand(&self) -> Option<&BigInt> {
        match &*self.0 {
            GeneratorKind::QuadraticSurd { radicand } => Some(radicand),
            GeneratorKind::Symbolic { .. } => None,
        }
    }

    /// `sqrt:<radicand>` or `sym:<name>`.
    pub fn key(&self) -> String {
        match &*self.0 {
            GeneratorKind::QuadraticSurd { radicand } => format!("sqrt:{radicand}"),
            GeneratorKind::Symbolic { name, .. } => format!("sym:{name}"),
        }
    }

    /// Enclosing interval of width at most `2^-bits` when available; symbolic
    /// generators fall back to their narrowest interval.
    pub(crate) fn interval(&self, bits: u32) -> (Rational, Rational) {
        match &*self.0 {
            GeneratorKind::QuadraticSurd { radicand } => {
                let scaled = (radicand << (2 * bits as usize)).sqrt();
                let den = pow2(bits);
                let lo = Rational::new(scaled.clone(), den.clone());
                let hi = Rational::new(scaled + 1, den);
                (lo, hi)
            }
            GeneratorKind::Symbolic { intervals, .. } => {
                let target = super::rational::unit_fraction(bits);
                intervals
                    .iter()
                    .find(|(lo, hi)| hi - lo <= target)
                    .unwrap_or_else(|| intervals.last().expect("validated non-empty"))
                    .clone()
            }
        }
    }

    /// Width of the narrowest interval this generator can ever supply; zero
    /// means arbitrarily narrow.
    pub(crate) fn best_width(&self) -> Rational {
        match &*self.0 {
            GeneratorKind::QuadraticSurd { .. } => Rational::zero(),
            GeneratorKind::Symbolic { intervals, .. } => {
                let (lo, hi) = intervals.last().expect("validated non-empty");
                hi - lo
            }
        }
    }

    fn order_key(&self) -> (u8, Option<&BigInt>, Option<&str>) {
        match &*self.0 {
            GeneratorKind::QuadraticSurd { radicand } => (0, Some(radicand), None),
            GeneratorKind::Symbolic { name, .. } => (1, None, Some(name.as_str())),
        }
    }
}

impl PartialEq for Generator {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.order_key() == other.order_key()
    }
}

impl Eq for Generator {}

impl PartialOrd for Generator {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Generator {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order_key().cmp(&other.order_key())
    }
}

impl Hash for Generator {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.order_key().hash(state);
    }
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key())
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key())
    }
}

/// Writes `n = square^2 * free` with `free` squarefree, for `n >= 1`.
pub(crate) fn squarefree_decomposition(n: &BigInt) -> Result<(BigInt, BigInt)> {
    debug_assert!(n.is_positive());
    let mut rest = n.clone();
    let mut square = BigInt::one();
    let mut free = BigInt::one();
    let mut p: u64 = 2;
    while BigInt::from(p) * BigInt::from(p) <= rest {
        if p > TRIAL_DIVISION_LIMIT {
            return Err(Error::InvalidGenerator(format!(
                "cannot factor radicand {n}: cofactor {rest} too large"
            )));
        }
        let bp = BigInt::from(p);
        let mut exp = 0u32;
        while (&rest % &bp).is_zero() {
            rest /= &bp;
            exp += 1;
        }
        for _ in 0..exp / 2 {
            square *= &bp;
        }
        if exp % 2 == 1 {
            free *= &bp;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    free *= rest;
    Ok((square, free))
}
