//! Nonnegative integer weights over cosets of one lattice.
//!
//! For offsets `a_1..a_n`, the value vector at `v` is
//! `(L^h(v − a_1), …, L^h(v − a_n))`. Weights `g` make `Σ gᵢ L^h(v − aᵢ)`
//! constant exactly when `g` is orthogonal to every difference of value
//! vectors. The weights are read off a vertex of
//! `{x ∈ V⊥ : x ≥ 0, Σ x = 1}` and scaled to coprime integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::enumerator::{EnumeratorContext, Translations};
use crate::error::{Error, Result};
use crate::lattice::{Coset, Lattice, QuasiPeriodicSet};
use crate::linalg::{orthogonal_complement, rank};
use crate::polytope::{Boundary, Polytope, ProbeDirection};
use crate::sampling::{SampleRegion, Sampler};
use crate::scalar::{denominator_lcm, ExactScalar, Rational};
use crate::simplex::feasible_point;
use crate::torus::{SweepStats, Torus};
use crate::verify::VerificationMode;

/// Offsets `a_1..a_n`, pairwise distinct modulo one lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct CosetFamily<T> {
    lattice: Lattice<T>,
    offsets: Vec<Vec<T>>,
}

impl<T: ExactScalar> CosetFamily<T> {
    pub fn new(lattice: Lattice<T>, offsets: Vec<Vec<T>>) -> Result<Self> {
        if offsets.is_empty() {
            return Err(Error::InvalidInput("a coset family needs at least one offset".into()));
        }
        for (i, a) in offsets.iter().enumerate() {
            if a.len() != lattice.dim() {
                return Err(Error::DimensionMismatch {
                    expected: lattice.dim(),
                    found: a.len(),
                });
            }
            for b in &offsets[..i] {
                let diff: Vec<T> = a.iter().zip(b).map(|(x, y)| x.clone() - y).collect();
                if lattice.contains(&diff)? {
                    return Err(Error::InvalidInput(format!(
                        "offset {} repeats an earlier offset modulo the lattice",
                        i + 1
                    )));
                }
            }
        }
        Ok(CosetFamily { lattice, offsets })
    }

    pub fn lattice(&self) -> &Lattice<T> {
        &self.lattice
    }

    pub fn offsets(&self) -> &[Vec<T>] {
        &self.offsets
    }

    pub fn len(&self) -> usize {
        self.offsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.offsets.is_empty()
    }

    pub fn cosets(&self) -> Vec<Coset<T>> {
        self.offsets
            .iter()
            .map(|a| Coset::new(self.lattice.clone(), a.clone(), 1).expect("weight is positive"))
            .collect()
    }

    /// The union with weights `g` (zero weights dropped).
    pub fn weighted(&self, g: &[u64]) -> Result<QuasiPeriodicSet<T>> {
        let cosets = self
            .offsets
            .iter()
            .zip(g)
            .filter(|(_, &w)| w > 0)
            .map(|(a, &w)| Coset::new(self.lattice.clone(), a.clone(), w))
            .collect::<Result<Vec<_>>>()?;
        QuasiPeriodicSet::new(cosets)
    }
}

/// Knobs of sampled collection and verification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthesisConfig {
    pub batch: usize,
    pub stable_batches: usize,
    pub max_batches: usize,
    pub verification_samples: usize,
}

impl Default for SynthesisConfig {
    fn default() -> Self {
        SynthesisConfig {
            batch: 64,
            stable_batches: 5,
            max_batches: 10_000,
            verification_samples: 256,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DifferenceSet {
    pub vectors: Vec<Vec<i64>>,
    /// Distinct value vectors seen, in order of discovery.
    pub values: Vec<Vec<u64>>,
    pub rank: usize,
    pub exact: bool,
    pub sweep: Option<SweepStats>,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightSolution<T> {
    pub weights: Vec<u64>,
    pub multiplicity: u64,
    pub reference: Vec<T>,
    pub differences: DifferenceSet,
    /// Points (or value vectors, in exact mode) where the identity was checked.
    pub checked: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SynthesisFailure<T> {
    /// `V⊥` meets the nonnegative orthant only at zero.
    NoNonnegativeVector { differences: DifferenceSet },
    /// The weighted sum is not constant at a verification point.
    Violated {
        weights: Vec<u64>,
        multiplicity: u64,
        point: Vec<T>,
        value: u64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Synthesis<T> {
    Solved(WeightSolution<T>),
    Failed(SynthesisFailure<T>),
}

struct Evaluator<T> {
    contexts: Vec<EnumeratorContext<T>>,
}

impl<T: ExactScalar> Evaluator<T> {
    fn new(p: &Polytope<T>, probe: &ProbeDirection, family: &CosetFamily<T>) -> Result<Self> {
        let contexts = family
            .cosets()
            .into_iter()
            .map(|c| {
                EnumeratorContext::new(
                    p.clone(),
                    probe.clone(),
                    Translations::Periodic(QuasiPeriodicSet::single(c)),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Evaluator { contexts })
    }

    fn values(&self, v: &[T]) -> Result<Vec<u64>> {
        self.contexts.iter().map(|c| c.l_half_open(v)).collect()
    }

    fn values_many(&self, points: &[Vec<T>]) -> Result<Vec<Vec<u64>>> {
        use rayon::prelude::*;
        points.par_iter().map(|v| self.values(v)).collect()
    }
}

fn difference(a: &[u64], b: &[u64]) -> Vec<i64> {
    a.iter().zip(b).map(|(&x, &y)| x as i64 - y as i64).collect()
}

fn to_rational_rows(vectors: &[Vec<i64>]) -> Vec<Vec<Rational>> {
    vectors
        .iter()
        .map(|v| v.iter().map(|&x| Rational::from_integer(x.into())).collect())
        .collect()
}

fn sample_region<T: ExactScalar>(mode: &VerificationMode<T>) -> Option<(&SampleRegion<T>, usize, u64)> {
    match mode {
        VerificationMode::ExactTorus => None,
        VerificationMode::Sampled { samples, seed, region } => Some((region, *samples, *seed)),
    }
}

/// Differences of value vectors spanning `V`.
///
/// Exact mode sweeps one cell of the family's lattice and returns all
/// pairwise differences of the distinct value vectors. Sampled mode draws
/// batches of point pairs until the rank has not grown for
/// `config.stable_batches` consecutive batches.
pub fn collect_difference_vectors<T: ExactScalar>(
    p: &Polytope<T>,
    probe: &ProbeDirection,
    family: &CosetFamily<T>,
    mode: &VerificationMode<T>,
    config: &SynthesisConfig,
) -> Result<DifferenceSet> {
    let n = family.len();
    match sample_region(mode) {
        None => {
            let strict = Boundary::HalfOpen(probe.clone()).strictness(p)?;
            let groups: Vec<Vec<Coset<T>>> = family.cosets().into_iter().map(|c| vec![c]).collect();
            let torus = Torus::new(p, strict, &groups, family.lattice())?;
            let sweep = torus.value_vectors(false)?;
            let values: Vec<Vec<u64>> = sweep.values.into_iter().map(|(v, _)| v).collect();
            let mut vectors = Vec::new();
            for i in 0..values.len() {
                for j in i + 1..values.len() {
                    vectors.push(difference(&values[j], &values[i]));
                }
            }
            let rank = rank(&to_rational_rows(&vectors), n);
            Ok(DifferenceSet {
                vectors,
                values,
                rank,
                exact: true,
                sweep: Some(sweep.stats),
                samples: 0,
            })
        }
        Some((region, _, seed)) => {
            let eval = Evaluator::new(p, probe, family)?;
            let mut sampler = Sampler::new(seed);
            let mut vectors: Vec<Vec<i64>> = Vec::new();
            let mut values: Vec<Vec<u64>> = Vec::new();
            let mut current = 0;
            let mut stable = 0;
            let mut samples = 0;
            for _ in 0..config.max_batches {
                let points = sampler.points(2 * config.batch, region, Some(family.lattice()))?;
                samples += points.len();
                let vals = eval.values_many(&points)?;
                for pair in vals.chunks(2) {
                    for v in pair {
                        if !values.contains(v) {
                            values.push(v.clone());
                        }
                    }
                    let diff = difference(&pair[0], &pair[1]);
                    if diff.iter().any(|&x| x != 0) && !vectors.contains(&diff) {
                        vectors.push(diff);
                    }
                }
                let r = rank(&to_rational_rows(&vectors), n);
                if r > current {
                    current = r;
                    stable = 0;
                } else {
                    stable += 1;
                    if stable >= config.stable_batches {
                        break;
                    }
                }
            }
            Ok(DifferenceSet {
                vectors,
                values,
                rank: current,
                exact: false,
                sweep: None,
                samples,
            })
        }
    }
}

/// A nonnegative, nonzero, coprime integer vector in the span of `basis`,
/// chosen as the Bland's-rule vertex of `{x ∈ span, x ≥ 0, Σ x = 1}`.
pub fn find_nonnegative_integer_vector(basis: &[Vec<Rational>], n: usize) -> Result<Option<Vec<BigInt>>> {
    if basis.is_empty() {
        return Ok(None);
    }
    let mut a = orthogonal_complement(basis, n);
    let mut b = vec![Rational::zero(); a.len()];
    a.push(vec![Rational::from_integer(1.into()); n]);
    b.push(Rational::from_integer(1.into()));
    let Some(x) = feasible_point(&a, &b)? else {
        return Ok(None);
    };
    let lcm = denominator_lcm(&x);
    let ints: Vec<BigInt> = x
        .iter()
        .map(|q| (q * Rational::from_integer(lcm.clone())).to_integer())
        .collect();
    let gcd = ints.iter().fold(BigInt::zero(), |g, v| g.gcd(v));
    Ok(Some(ints.into_iter().map(|v| v / &gcd).collect()))
}

/// Collects `V`, picks weights in `V⊥`, fixes `m` at the origin and checks
/// the weighted identity everywhere the mode allows.
pub fn synthesize<T: ExactScalar>(
    p: &Polytope<T>,
    probe: &ProbeDirection,
    family: &CosetFamily<T>,
    mode: &VerificationMode<T>,
    config: &SynthesisConfig,
) -> Result<Synthesis<T>> {
    let n = family.len();
    let differences = collect_difference_vectors(p, probe, family, mode, config)?;
    let complement = orthogonal_complement(&to_rational_rows(&differences.vectors), n);
    let Some(g) = find_nonnegative_integer_vector(&complement, n)? else {
        return Ok(Synthesis::Failed(SynthesisFailure::NoNonnegativeVector { differences }));
    };
    let weights = g
        .iter()
        .map(|x| {
            x.to_u64()
                .ok_or_else(|| Error::InvalidInput("weight exceeds 64 bits".into()))
        })
        .collect::<Result<Vec<u64>>>()?;
    let weighted = |vals: &[u64]| -> u64 { vals.iter().zip(&weights).map(|(a, b)| a * b).sum() };

    let eval = Evaluator::new(p, probe, family)?;
    let reference = vec![T::zero(); p.dim()];
    let multiplicity = weighted(&eval.values(&reference)?);

    let (checks, checked): (Vec<(Vec<T>, Vec<u64>)>, _) = match sample_region(mode) {
        None => {
            // Every value vector was realized on some face of the sweep.
            let mut out = Vec::new();
            for v in &differences.values {
                if weighted(v) != multiplicity {
                    // Recover a point for the report.
                    let strict = Boundary::HalfOpen(probe.clone()).strictness(p)?;
                    let groups: Vec<Vec<Coset<T>>> = family.cosets().into_iter().map(|c| vec![c]).collect();
                    let sweep = Torus::new(p, strict, &groups, family.lattice())?.value_vectors(false)?;
                    let at = sweep
                        .values
                        .into_iter()
                        .find(|(w, _)| w == v)
                        .map(|(_, x)| x)
                        .unwrap_or_default();
                    out.push((at, v.clone()));
                    break;
                }
            }
            (out, differences.values.len())
        }
        Some((region, _, seed)) => {
            let mut sampler = Sampler::new(seed.wrapping_add(1));
            let points = sampler.points(config.verification_samples, region, Some(family.lattice()))?;
            let vals = eval.values_many(&points)?;
            let bad = points.into_iter().zip(vals).find(|(_, v)| weighted(v) != multiplicity);
            (bad.into_iter().collect(), config.verification_samples)
        }
    };
    if let Some((point, v)) = checks.into_iter().next() {
        return Ok(Synthesis::Failed(SynthesisFailure::Violated {
            value: weighted(&v),
            weights,
            multiplicity,
            point,
        }));
    }
    Ok(Synthesis::Solved(WeightSolution {
        weights,
        multiplicity,
        reference,
        differences,
        checked,
    }))
}
