//! Two cosets of one lattice: refine to a single lattice and certify it, and
//! search odd multiples of an irrational vector that come close to `Zᵏ`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{Coset, Lattice, QuasiPeriodicSet};
use crate::polytope::{Polytope, ProbeDirection};
use crate::scalar::{denominator_lcm, ExactScalar, Expansion, Generator, Rational};
use crate::verify::{verify_constant_multiplicity, Verification, VerificationMode};

/// Samples used when exact verification is unavailable (d ≥ 3).
pub const FALLBACK_SAMPLES: usize = 10_000;

/// `t₂ − t₁` in lattice coordinates, each written over the generators.
#[derive(Debug, Clone, PartialEq)]
pub struct OffsetDecomposition {
    pub coordinates: Vec<Expansion>,
    pub irrational_rank: usize,
}

impl OffsetDecomposition {
    pub fn generators(&self) -> BTreeSet<Generator> {
        self.coordinates
            .iter()
            .flat_map(|e| {
                e.terms
                    .iter()
                    .filter(|(_, c)| *c != Rational::from_integer(0.into()))
                    .map(|(g, _)| g.clone())
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RefinementResult<T> {
    pub decomposition: OffsetDecomposition,
    pub n: BigInt,
    pub candidate: Coset<T>,
    pub verification: Verification<T>,
    /// Verification of the weighted input union itself.
    pub input: Verification<T>,
}

pub fn decompose_offset<T: ExactScalar>(l0: &Lattice<T>, t1: &[T], t2: &[T]) -> Result<OffsetDecomposition> {
    if l0.rational_basis().is_none() {
        return Err(Error::FieldClosureViolation(
            "offset decomposition needs a rational lattice basis".into(),
        ));
    }
    let diff: Vec<T> = t2.iter().zip(t1).map(|(a, b)| a.clone() - b).collect();
    let coordinates: Vec<Expansion> = l0.coords(&diff)?.iter().map(ExactScalar::expansion).collect();
    let mut dec = OffsetDecomposition {
        coordinates,
        irrational_rank: 0,
    };
    dec.irrational_rank = dec.generators().len();
    Ok(dec)
}

/// Lcm of the denominators of every coefficient in the decomposition.
pub fn refinement_index(dec: &OffsetDecomposition) -> BigInt {
    denominator_lcm(dec.coordinates.iter().flat_map(Expansion::coefficients))
}

/// Builds `t₁ + (1/N)·L₀` and verifies it. Exact mode drops to
/// [`FALLBACK_SAMPLES`] seeded samples in dimension three and up.
#[allow(clippy::too_many_arguments)]
pub fn refinement_pipeline<T: ExactScalar>(
    p: &Polytope<T>,
    probe: &ProbeDirection,
    l0: &Lattice<T>,
    t1: &[T],
    t2: &[T],
    weights: (u64, u64),
    mode: &VerificationMode<T>,
) -> Result<RefinementResult<T>> {
    let decomposition = decompose_offset(l0, t1, t2)?;
    let n = refinement_index(&decomposition);
    let mode = match mode {
        VerificationMode::ExactTorus if p.dim() > 2 => VerificationMode::sampled(FALLBACK_SAMPLES, 0),
        m => m.clone(),
    };
    let candidate = Coset::new(l0.refine(&n)?, t1.to_vec(), 1)?;
    let verification = verify_constant_multiplicity(p, probe, &QuasiPeriodicSet::single(candidate.clone()), &mode)?;
    let union = QuasiPeriodicSet::new(vec![
        Coset::new(l0.clone(), t1.to_vec(), weights.0)?,
        Coset::new(l0.clone(), t2.to_vec(), weights.1)?,
    ])?;
    let input = verify_constant_multiplicity(p, probe, &union, &mode)?;
    Ok(RefinementResult {
        decomposition,
        n,
        candidate,
        verification,
        input,
    })
}

/// Max-norm distance from `x` to `Zᵏ` is below `eps`.
fn near_integers<T: ExactScalar>(x: &[T], eps: &T) -> Result<bool> {
    let one = T::from_i64(1);
    for c in x {
        let frac = c.clone() - &T::from_integer(c.floor()?);
        let dist = if frac.try_cmp(&(one.clone() - &frac))?.is_le() {
            frac
        } else {
            one.clone() - &frac
        };
        if dist.try_cmp(eps)?.is_ge() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Smallest `j` in `0..=j_max` with `(2j+1)·a` within `eps` of `Zᵏ` in the
/// max-norm.
pub fn weyl_search<T: ExactScalar>(a: &[T], eps: &Rational, j_max: u64) -> Result<Option<u64>> {
    let half = Rational::new(1.into(), 2.into());
    if *eps <= Rational::from_integer(0.into()) || *eps >= half {
        return Err(Error::InvalidInput("eps must lie in (0, 1/2)".into()));
    }
    let eps_t = T::from_rational(eps.clone());
    let test = |j: u64| -> Result<bool> {
        let k = Rational::from_integer(BigInt::from(2 * j + 1));
        let x: Vec<T> = a.iter().map(|c| c.scale(&k)).collect();
        near_integers(&x, &eps_t)
    };
    let hit = (0..=j_max)
        .into_par_iter()
        .map(|j| (j, test(j)))
        .find_first(|(_, r)| !matches!(r, Ok(false)));
    match hit {
        None => Ok(None),
        Some((j, r)) => r.map(|_| Some(j)),
    }
}

/// `|(1/M) Σ_{n=1..M} exp(2πi·⟨h, 2n·a⟩)|`, in floating point.
pub fn equidistribution_statistic<T: ExactScalar>(a: &[T], frequency: &[i64], m: u64) -> Result<f64> {
    if frequency.iter().all(|&h| h == 0) {
        return Err(Error::InvalidInput("frequency must be nonzero".into()));
    }
    if a.len() != frequency.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            found: frequency.len(),
        });
    }
    if m == 0 {
        return Err(Error::InvalidInput("M must be positive".into()));
    }
    let mut theta = T::zero();
    for (c, &h) in a.iter().zip(frequency) {
        theta = theta + &c.scale(&Rational::from_integer(h.into()));
    }
    // Reduce 2θ mod 1 exactly before going to floating point.
    let two_theta = theta.scale(&Rational::from_integer(2.into()));
    let frac = (two_theta.clone() - &T::from_integer(two_theta.floor()?)).approx_f64();
    let (mut re, mut im) = (0.0f64, 0.0f64);
    for n in 1..=m {
        let phase = (n as f64 * frac).fract() * std::f64::consts::TAU;
        re += phase.cos();
        im += phase.sin();
    }
    Ok((re * re + im * im).sqrt() / m as f64)
}
