use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::generator::squarefree_decomposition;
use super::precision::{max_precision_bits, schedule};
use super::rational::{parse_rational, unit_fraction, Rational};
use super::{ExactScalar, Expansion, Generator, Sign};
use crate::error::{Error, Result};

/// A rational number plus rational multiples of declared generators.
///
/// Equality is coefficient-wise. Terms are kept sorted by generator with no
/// zero coefficients, so the derived `PartialEq` is exactly that.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    rational: Rational,
    terms: Vec<(Generator, Rational)>,
}

impl Scalar {
    pub fn rational(r: Rational) -> Self {
        Scalar {
            rational: r,
            terms: Vec::new(),
        }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Scalar::rational(Rational::new(num.into(), den.into()))
    }

    /// `coefficient · generator`.
    pub fn generator(g: Generator, coefficient: Rational) -> Self {
        let mut s = Scalar::zero();
        if !coefficient.is_zero() {
            s.terms.push((g, coefficient));
        }
        s
    }

    /// Builds `constant + Σ cᵢ·gᵢ`, merging repeated generators.
    pub fn from_parts(constant: Rational, terms: impl IntoIterator<Item = (Generator, Rational)>) -> Self {
        let mut s = Scalar::rational(constant);
        for (g, c) in terms {
            s = s + Scalar::generator(g, c);
        }
        s
    }

    /// `√r` for a positive rational `r`, canonicalised to `c·√s` with `s`
    /// squarefree; a rational when `r` is a perfect square.
    pub fn sqrt(r: &Rational) -> Result<Self> {
        if !r.is_positive() {
            return Err(Error::InvalidGenerator(format!("sqrt of non-positive {r}")));
        }
        // √(p/q) = √(p·q) / q
        let product = r.numer() * r.denom();
        let (square, free) = squarefree_decomposition(&product)?;
        let coefficient = Rational::new(square, r.denom().clone());
        if free.is_one() {
            Ok(Scalar::rational(coefficient))
        } else {
            Ok(Scalar::generator(Generator::quadratic_surd(free)?, coefficient))
        }
    }

    pub fn rational_part(&self) -> &Rational {
        &self.rational
    }

    pub fn terms(&self) -> &[(Generator, Rational)] {
        &self.terms
    }

    pub fn coefficient(&self, g: &Generator) -> Rational {
        self.terms
            .iter()
            .find(|(h, _)| h == g)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn is_rational(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when the value lies in a single real quadratic field (or in Q),
    /// where products, quotients and signs are computed algebraically.
    pub fn field_mode(&self) -> bool {
        match self.terms.as_slice() {
            [] => true,
            [(g, _)] => g.is_quadratic_surd(),
            _ => false,
        }
    }

    /// The quadratic surd of a single-term field-mode value.
    fn surd(&self) -> Option<&Generator> {
        match self.terms.as_slice() {
            [(g, _)] if g.is_quadratic_surd() => Some(g),
            _ => None,
        }
    }

    /// Interval for this value when every generator is evaluated at `bits`.
    fn interval_at(&self, bits: u32) -> (Rational, Rational) {
        let mut lo = self.rational.clone();
        let mut hi = self.rational.clone();
        for (g, c) in &self.terms {
            let (glo, ghi) = g.interval(bits);
            if c.is_positive() {
                lo += c * glo;
                hi += c * ghi;
            } else {
                lo += c * ghi;
                hi += c * glo;
            }
        }
        (lo, hi)
    }

    fn combine(mut self, other: &Scalar, negate: bool) -> Scalar {
        if negate {
            self.rational -= &other.rational;
        } else {
            self.rational += &other.rational;
        }
        if other.terms.is_empty() {
            return self;
        }
        let mut merged = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut left = std::mem::take(&mut self.terms).into_iter().peekable();
        let mut right = other.terms.iter().peekable();
        loop {
            let take_left = match (left.peek(), right.peek()) {
                (None, None) => break,
                (Some(_), None) => true,
                (None, Some(_)) => false,
                (Some((a, _)), Some((b, _))) => {
                    if a == b {
                        let (g, c) = left.next().unwrap();
                        let (_, d) = right.next().unwrap();
                        let sum = if negate { c - d } else { c + d };
                        if !sum.is_zero() {
                            merged.push((g, sum));
                        }
                        continue;
                    }
                    a < b
                }
            };
            if take_left {
                merged.push(left.next().unwrap());
            } else {
                let (g, d) = right.next().unwrap();
                merged.push((g.clone(), if negate { -d } else { d.clone() }));
            }
        }
        self.terms = merged;
        self
    }

    /// Parses an expression such as `1/2`, `sqrt:2/2`, `3 - 1/2*sqrt:2` or
    /// `2*sym:alpha + 1`. Generator keys are resolved by `resolve`, which maps
    /// a key to its value (so `sqrt:8` may resolve to `2·√2`).
    pub fn parse_with<F>(input: &str, mut resolve: F) -> Result<Scalar>
    where
        F: FnMut(&str) -> Result<Scalar>,
    {
        let text: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if text.is_empty() {
            return Err(Error::Parse("empty scalar".into()));
        }
        let mut total = Scalar::zero();
        for (negative, term) in split_terms(&text)? {
            let mut value = parse_term(term, &mut resolve)?;
            if negative {
                value = -value;
            }
            total = total + value;
        }
        Ok(total)
    }

    /// Parses with quadratic surds resolved on the fly; symbolic keys fail.
    pub fn parse(input: &str) -> Result<Scalar> {
        Scalar::parse_with(input, resolve_surd)
    }
}

/// Resolves `sqrt:<rational>` keys; everything else is an error.
pub fn resolve_surd(key: &str) -> Result<Scalar> {
    match key.strip_prefix("sqrt:") {
        Some(r) => Scalar::sqrt(&parse_rational(r)?),
        None => Err(Error::Parse(format!("undeclared generator {key:?}"))),
    }
}

fn split_terms(text: &str) -> Result<Vec<(bool, &str)>> {
    let bytes = text.as_bytes();
    let mut terms = Vec::new();
    let mut start = 0;
    let mut negative = false;
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let prev = if i == 0 { None } else { Some(bytes[i - 1]) };
        let is_operator = (c == b'+' || c == b'-') && !matches!(prev, Some(b'*') | Some(b'/') | Some(b':'));
        if is_operator {
            if i > start {
                terms.push((negative, &text[start..i]));
            } else if i != 0 || start != 0 {
                return Err(Error::Parse(format!("dangling operator in {text:?}")));
            }
            negative = c == b'-';
            start = i + 1;
        }
        i += 1;
    }
    if start >= text.len() {
        return Err(Error::Parse(format!("dangling operator in {text:?}")));
    }
    terms.push((negative, &text[start..]));
    Ok(terms)
}

fn parse_term<F>(term: &str, resolve: &mut F) -> Result<Scalar>
where
    F: FnMut(&str) -> Result<Scalar>,
{
    let key_start = term.find("sqrt:").or_else(|| term.find("sym:"));
    let Some(pos) = key_start else {
        return Ok(Scalar::rational(parse_rational(term)?));
    };
    let coefficient = if pos == 0 {
        Rational::one()
    } else {
        let prefix = term[..pos]
            .strip_suffix('*')
            .ok_or_else(|| Error::Parse(format!("expected '*' before generator in {term:?}")))?;
        parse_rational(prefix)?
    };
    let rest = &term[pos..];
    let (key, divisor) = match rest.find('/') {
        // `sqrt:p/q` is ambiguous; a trailing `/n` always divides the term.
        Some(slash) => (&rest[..slash], parse_rational(&rest[slash + 1..])?),
        None => (rest, Rational::one()),
    };
    if divisor.is_zero() {
        return Err(Error::Parse(format!("division by zero in {term:?}")));
    }
    let value = resolve(key)?;
    Ok(value.scale(&(coefficient / divisor)))
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        if !self.rational.is_zero() || self.terms.is_empty() {
            write!(f, "{}", self.rational)?;
            wrote = true;
        }
        for (g, c) in &self.terms {
            if wrote {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
                write!(f, "{}*{}", c.abs(), g)?;
            } else {
                write!(f, "{c}*{g}")?;
            }
            wrote = true;
        }
        Ok(())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({self})")
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::rational(r)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::rational(Rational::from_integer(n.into()))
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        self.combine(&rhs, false)
    }
}

impl<'a> Add<&'a Scalar> for Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        self.combine(rhs, false)
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        self.combine(&rhs, true)
    }
}

impl<'a> Sub<&'a Scalar> for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        self.combine(rhs, true)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(mut self) -> Scalar {
        self.rational = -self.rational;
        for (_, c) in &mut self.terms {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar::rational(Rational::zero())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.rational.is_zero()
    }
}

impl ExactScalar for Scalar {
    fn from_rational(r: Rational) -> Self {
        Scalar::rational(r)
    }

    fn scale(&self, factor: &Rational) -> Self {
        if factor.is_zero() {
            return Scalar::zero();
        }
        Scalar {
            rational: &self.rational * factor,
            terms: self.terms.iter().map(|(g, c)| (g.clone(), c * factor)).collect(),
        }
    }

    fn try_mul(&self, other: &Self) -> Result<Self> {
        if other.is_rational() {
            return Ok(self.scale(&other.rational));
        }
        if self.is_rational() {
            return Ok(other.scale(&self.rational));
        }
        match (self.surd(), other.surd()) {
            (Some(g), Some(h)) if g == h => {
                let r = Rational::from_integer(g.radicand().expect("surd").clone());
                let (a, b) = (&self.rational, &self.terms[0].1);
                let (c, d) = (&other.rational, &other.terms[0].1);
                let constant = a * c + b * d * r;
                let coefficient = a * d + b * c;
                Ok(Scalar::from_parts(constant, [(g.clone(), coefficient)]))
            }
            _ => Err(Error::FieldClosureViolation(format!(
                "product of ({self}) and ({other}) leaves a single quadratic field"
            ))),
        }
    }

    fn try_div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if other.is_rational() {
            return Ok(self.scale(&other.rational.recip()));
        }
        let Some(g) = other.surd() else {
            return Err(Error::FieldClosureViolation(format!(
                "division by ({other}) outside a single quadratic field"
            )));
        };
        // x / (c + d√r) = x (c − d√r) / (c² − d² r)
        let r = Rational::from_integer(g.radicand().expect("surd").clone());
        let (c, d) = (&other.rational, &other.terms[0].1);
        let norm = c * c - d * d * r;
        let conjugate = Scalar::from_parts(c.clone(), [(g.clone(), -d.clone())]);
        Ok(self.try_mul(&conjugate)?.scale(&norm.recip()))
    }

    fn sign(&self) -> Result<Sign> {
        if self.terms.is_empty() {
            return Ok(Sign::of_rational(&self.rational));
        }
        if let Some(g) = self.surd() {
            // a + b√r with b ≠ 0
            let a = &self.rational;
            let b = &self.terms[0].1;
            let sa = Sign::of_rational(a);
            let sb = Sign::of_rational(b);
            if sa == Sign::Zero || sa == sb {
                return Ok(sb);
            }
            let r = Rational::from_integer(g.radicand().expect("surd").clone());
            return Ok(if a * a > b * b * r { sa } else { sb });
        }
        let mut last = 0;
        for bits in schedule() {
            let (lo, hi) = self.interval_at(bits);
            if lo.is_positive() {
                return Ok(Sign::Positive);
            }
            if hi.is_negative() {
                return Ok(Sign::Negative);
            }
            last = bits;
        }
        Err(Error::SignIndeterminate { bits: last })
    }

    fn floor(&self) -> Result<BigInt> {
        if self.terms.is_empty() {
            return ExactScalar::floor(&self.rational);
        }
        // Candidates run from floor(hi) down to floor(lo); usually two.
        let (lo, hi) = match self.to_interval(&Rational::new(1.into(), 2.into())) {
            Ok(iv) => iv,
            Err(_) => self.interval_at(max_precision_bits()),
        };
        let bottom = ExactScalar::floor(&lo)?;
        let mut candidate = ExactScalar::floor(&hi)?;
        while candidate > bottom {
            let diff = self.clone() - Scalar::from_integer(candidate.clone());
            if diff.sign()? != Sign::Negative {
                break;
            }
            candidate -= 1;
        }
        Ok(candidate)
    }

    fn to_interval(&self, precision: &Rational) -> Result<(Rational, Rational)> {
        if !precision.is_positive() {
            return Err(Error::InvalidInput("interval precision must be positive".into()));
        }
        if self.terms.is_empty() {
            return Ok((self.rational.clone(), self.rational.clone()));
        }
        let weight: Rational = self.terms.iter().map(|(_, c)| c.abs()).sum();
        let reachable: Rational = self.terms.iter().map(|(g, c)| c.abs() * g.best_width()).sum();
        if reachable > *precision {
            return Err(Error::PrecisionUnreachable(format!(
                "({self}) cannot be enclosed in width {precision}; best is {reachable}"
            )));
        }
        let cap = max_precision_bits().max(64);
        let mut bits = 1u32;
        loop {
            let (lo, hi) = self.interval_at(bits);
            if &hi - &lo <= *precision {
                return Ok((lo, hi));
            }
            if bits >= 8 * cap && &weight * unit_fraction(bits) > *precision {
                return Err(Error::PrecisionUnreachable(format!(
                    "({self}) needs more than {bits} bits"
                )));
            }
            bits += 8;
        }
    }

    fn as_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| self.rational.clone())
    }

    fn expansion(&self) -> Expansion {
        Expansion {
            constant: self.rational.clone(),
            terms: self.terms.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(text: &str) -> Scalar {
        Scalar::parse(text).unwrap()
    }

    #[test]
    fn sign_examples() {
        assert_eq!(s("sqrt:2 - 1").sign().unwrap(), Sign::Positive);
        let cancel = s("1/2*sqrt:2") + s("1/2*sqrt:2") - s("sqrt:2");
        assert_eq!(cancel.sign().unwrap(), Sign::Zero);
        assert!(cancel.is_zero());
        assert_eq!(s("17*sqrt:2/2 - 12").sign().unwrap(), Sign::Positive);
        assert_eq!(s("12 - 17*sqrt:2/2").sign().unwrap(), Sign::Negative);
    }

    #[test]
    fn floor_examples() {
        assert_eq!(s("7/2").floor().unwrap(), BigInt::from(3));
        assert_eq!(s("-sqrt:2").floor().unwrap(), BigInt::from(-2));
        assert_eq!(s("17*sqrt:2/2").floor().unwrap(), BigInt::from(12));
    }

    #[test]
    fn interval_examples() {
        let one = Rational::one();
        let (lo, hi) = s("1/3").to_interval(&one).unwrap();
        assert!(lo <= s("1/3").rational && hi >= s("1/3").rational && &hi - &lo <= one);

        let hundredth = Rational::new(1.into(), 100.into());
        let (lo, hi) = s("sqrt:2").to_interval(&hundredth).unwrap();
        let two = Rational::from_integer(2.into());
        assert!(&lo * &lo <= two && &hi * &hi >= two);
        assert!(&hi - &lo <= hundredth);

        let tiny = Rational::new(1.into(), BigInt::from(10).pow(9));
        assert_eq!(s("0").to_interval(&tiny).unwrap(), (Rational::zero(), Rational::zero()));
    }

    #[test]
    fn sqrt_canonicalises() {
        assert_eq!(s("sqrt:8"), s("2*sqrt:2"));
        assert_eq!(Scalar::sqrt(&parse_rational("1/2").unwrap()).unwrap(), s("sqrt:2/2"));
        assert_eq!(s("sqrt:1/2"), s("1/2"));
        assert_eq!(s("sqrt:9/4"), s("3/4"));
        assert_eq!(Scalar::sqrt(&parse_rational("9/4").unwrap()).unwrap(), s("3/2"));
        assert!(Scalar::sqrt(&Rational::zero()).is_err());
    }

    #[test]
    fn field_products_and_quotients() {
        let x = s("1 + sqrt:2");
        let y = s("3 - 2*sqrt:2");
        assert_eq!(x.try_mul(&y).unwrap(), s("-1 + sqrt:2"));
        assert_eq!(x.try_mul(&y).unwrap().try_div(&y).unwrap(), x);
        assert!(matches!(
            s("sqrt:2").try_mul(&s("sqrt:3")),
            Err(Error::FieldClosureViolation(_))
        ));
        assert!(matches!(x.try_div(&Scalar::zero()), Err(Error::DivisionByZero)));
        assert!(!s("sqrt:2 + sqrt:3").field_mode());
        assert!(s("1/2 + sqrt:3").field_mode());
    }

    #[test]
    fn multi_generator_sign_by_refinement() {
        // √2 + √3 ≈ 3.1462 > π-ish bound 3.14
        assert_eq!(s("sqrt:2 + sqrt:3 - 157/50").sign().unwrap(), Sign::Positive);
        assert_eq!(s("sqrt:2 + sqrt:3 - 315/100").sign().unwrap(), Sign::Negative);
    }

    #[test]
    fn symbolic_sign_and_indeterminacy() {
        let q = |t: &str| parse_rational(t).unwrap();
        let pi = Generator::symbolic(
            "pi",
            vec![
                (q("3"), q("4")),
                (q("314/100"), q("315/100")),
                (q("3141/1000"), q("3142/1000")),
            ],
        )
        .unwrap();
        let resolve = |key: &str| -> Result<Scalar> {
            if key == "sym:pi" {
                Ok(Scalar::generator(pi.clone(), Rational::one()))
            } else {
                resolve_surd(key)
            }
        };
        let x = Scalar::parse_with("sym:pi - 3", resolve).unwrap();
        assert_eq!(x.sign().unwrap(), Sign::Positive);
        assert_eq!(x.floor().unwrap(), BigInt::from(0));
        let y = Scalar::parse_with("sym:pi - 31415/10000", resolve).unwrap();
        assert!(matches!(y.sign(), Err(Error::SignIndeterminate { .. })));
        assert!(matches!(
            y.to_interval(&q("1/1000000")),
            Err(Error::PrecisionUnreachable(_))
        ));
        assert!(Scalar::parse_with("sym:e", resolve).is_err());
    }

    #[test]
    fn parse_and_display_round_trip() {
        for text in ["0", "-7/3", "1/2*sqrt:2", "3 - 1/2*sqrt:2", "-2*sqrt:2 + 5*sqrt:3"] {
            let value = s(text);
            assert_eq!(s(&value.to_string()), value, "{text}");
        }
        assert_eq!(s("sqrt:2/2"), s("1/2*sqrt:2"));
        assert_eq!(s("-sqrt:2/2"), s("-1/2*sqrt:2"));
        assert!(Scalar::parse("1 +").is_err());
        assert!(Scalar::parse("").is_err());
        assert!(Scalar::parse("2sqrt:2").is_err());
    }
}
