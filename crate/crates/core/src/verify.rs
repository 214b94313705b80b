//! Tiling verification: constancy of the enumerator, connectivity of the
//! complement of shared boundaries, and the pipelines built from them.

use crate::enumerator::{EnumeratorContext, Translations};
use crate::error::{Error, Result};
use crate::lattice::{Coset, Lattice, QuasiPeriodicSet};
use crate::polytope::{Boundary, Polytope, ProbeDirection};
use crate::sampling::{SampleRegion, Sampler};
use crate::scalar::ExactScalar;
use crate::torus::{Separation, SweepStats, Torus};

#[derive(Debug, Clone, PartialEq)]
pub enum VerificationMode<T> {
    /// Exhaustive evaluation over one cell of a common period (d ≤ 2).
    ExactTorus,
    Sampled {
        samples: usize,
        seed: u64,
        region: SampleRegion<T>,
    },
}

impl<T> VerificationMode<T> {
    pub fn sampled(samples: usize, seed: u64) -> Self {
        VerificationMode::Sampled {
            samples,
            seed,
            region: SampleRegion::FundamentalDomain,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, VerificationMode::ExactTorus)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Evidence {
    Torus(SweepStats),
    Samples(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TilingCertificate<T> {
    pub multiplicity: u64,
    /// False for sampled runs: no counterexample was found, nothing more.
    pub exact: bool,
    pub evidence: Evidence,
    pub period: Option<Lattice<T>>,
}

/// Distinct enumerator values, each with a point where it occurs.
#[derive(Debug, Clone, PartialEq)]
pub struct Discrepancy<T> {
    pub witnesses: Vec<(u64, Vec<T>)>,
    pub evidence: Evidence,
}

impl<T> Discrepancy<T> {
    pub fn observed(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.witnesses.iter().map(|w| w.0).collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verification<T> {
    Certified(TilingCertificate<T>),
    Discrepancy(Discrepancy<T>),
}

impl<T> Verification<T> {
    pub fn multiplicity(&self) -> Option<u64> {
        match self {
            Verification::Certified(c) => Some(c.multiplicity),
            Verification::Discrepancy(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConnectivityVerdict<T> {
    Connected,
    Disconnected(Separation<T>),
    Inconclusive(String),
}

/// Outcome of the connectivity-then-constancy pipelines.
#[derive(Debug, Clone, PartialEq)]
pub enum PipelineOutcome<T> {
    Tiles(TilingCertificate<T>),
    NotConnected(ConnectivityVerdict<T>),
    NotConstant(Discrepancy<T>),
}

/// Checks whether `L^h` (half-open, every point) is constant.
pub fn verify_constant_multiplicity<T: ExactScalar>(
    p: &Polytope<T>,
    probe: &ProbeDirection,
    q: &QuasiPeriodicSet<T>,
    mode: &VerificationMode<T>,
) -> Result<Verification<T>> {
    verify(p, probe, q, mode, true)
}

/// Checks whether the closed enumerator `L` is constant at points off every
/// translated boundary.
pub fn verify_generic_multiplicity<T: ExactScalar>(
    p: &Polytope<T>,
    probe: &ProbeDirection,
    q: &QuasiPeriodicSet<T>,
    mode: &VerificationMode<T>,
) -> Result<Verification<T>> {
    verify(p, probe, q, mode, false)
}

fn verify<T: ExactScalar>(
    p: &Polytope<T>,
    probe: &ProbeDirection,
    q: &QuasiPeriodicSet<T>,
    mode: &VerificationMode<T>,
    half_open: bool,
) -> Result<Verification<T>> {
    let period = q.common_period()?;
    match mode {
        VerificationMode::ExactTorus => {
            let period =
                period.ok_or_else(|| Error::ModeUnavailable("the cosets have no common period lattice".into()))?;
            let strict = if half_open {
                Boundary::HalfOpen(probe.clone()).strictness(p)?
            } else {
                vec![false; p.facets().len()]
            };
            let torus = Torus::new(p, strict, &[q.cosets().to_vec()], &period)?;
            let sweep = torus.value_vectors(!half_open)?;
            let witnesses: Vec<(u64, Vec<T>)> = sweep.values.into_iter().map(|(v, x)| (v[0], x)).collect();
            let evidence = Evidence::Torus(sweep.stats);
            Ok(conclude(witnesses, evidence, true, Some(period)))
        }
        VerificationMode::Sampled { samples, seed, region } => {
            let ctx = EnumeratorContext::new(p.clone(), probe.clone(), Translations::Periodic(q.clone()))?;
            if matches!(region, SampleRegion::FundamentalDomain) && period.is_none() {
                return Err(Error::ModeUnavailable(
                    "no common period to sample a fundamental domain of; give a sample box".into(),
                ));
            }
            let points = Sampler::new(*seed).points(*samples, region, period.as_ref())?;
            let values = ctx.evaluate_many(&points, half_open)?;
            let mut witnesses: Vec<(u64, Vec<T>)> = Vec::new();
            for (v, x) in values.into_iter().zip(points) {
                if !witnesses.iter().any(|w| w.0 == v) {
                    witnesses.push((v, x));
                }
            }
            Ok(conclude(witnesses, Evidence::Samples(*samples), false, period))
        }
    }
}

fn conclude<T>(
    witnesses: Vec<(u64, Vec<T>)>,
    evidence: Evidence,
    exact: bool,
    period: Option<Lattice<T>>,
) -> Verification<T> {
    if witnesses.len() == 1 {
        Verification::Certified(TilingCertificate {
            multiplicity: witnesses[0].0,
            exact,
            evidence,
            period,
        })
    } else {
        Verification::Discrepancy(Discrepancy { witnesses, evidence })
    }
}

/// Connectivity of the complement of `(∂P + Q[a]) ∩ (∂P + Q[b])`.
pub fn separation_check<T: ExactScalar>(
    p: &Polytope<T>,
    q: &QuasiPeriodicSet<T>,
    a: &[usize],
    b: &[usize],
) -> Result<ConnectivityVerdict<T>> {
    for &i in a.iter().chain(b) {
        if i >= q.cosets().len() {
            return Err(Error::InvalidInput(format!("coset index {} out of range", i + 1)));
        }
    }
    if a.is_empty() || b.is_empty() {
        return Ok(ConnectivityVerdict::Connected);
    }
    if p.dim() > 2 {
        return Ok(ConnectivityVerdict::Inconclusive(format!(
            "connectivity is only decided in dimensions 1 and 2, got {}",
            p.dim()
        )));
    }
    let Some(period) = q.common_period()? else {
        return Ok(ConnectivityVerdict::Inconclusive(
            "the cosets have no common period lattice".into(),
        ));
    };
    let pick = |ids: &[usize]| -> Vec<Coset<T>> { ids.iter().map(|&i| q.cosets()[i].clone()).collect() };
    let torus = Torus::new(p, vec![false; p.facets().len()], &[pick(a), pick(b)], &period)?;
    let sep = torus.separation(&[0], &[1])?;
    Ok(if sep.connected {
        ConnectivityVerdict::Connected
    } else {
        ConnectivityVerdict::Disconnected(sep)
    })
}

/// Whether `Rᵈ ∖ H_i` is path-connected, where `H_i` collects the boundary
/// points that translates by coset `i` share with translates by the others.
/// `i` is 0-based.
pub fn general_position_check<T: ExactScalar>(
    p: &Polytope<T>,
    q: &QuasiPeriodicSet<T>,
    i: usize,
) -> Result<ConnectivityVerdict<T>> {
    let others: Vec<usize> = (0..q.cosets().len()).filter(|&j| j != i).collect();
    separation_check(p, q, &[i], &others)
}

/// Connectivity for the split `s1 | s2`, then constancy over `Q[s1]`.
pub fn split_check<T: ExactScalar>(
    p: &Polytope<T>,
    probe: &ProbeDirection,
    q: &QuasiPeriodicSet<T>,
    s1: &[usize],
    s2: &[usize],
    mode: &VerificationMode<T>,
) -> Result<PipelineOutcome<T>> {
    if s1.is_empty() {
        return Err(Error::InvalidInput("the first part of the split is empty".into()));
    }
    match separation_check(p, q, s1, s2)? {
        ConnectivityVerdict::Connected => {}
        other => return Ok(PipelineOutcome::NotConnected(other)),
    }
    match verify_constant_multiplicity(p, probe, &q.subset(s1)?, mode)? {
        Verification::Certified(c) => Ok(PipelineOutcome::Tiles(c)),
        Verification::Discrepancy(d) => Ok(PipelineOutcome::NotConstant(d)),
    }
}

/// General position of coset `i` (0-based), then constancy over that coset.
pub fn single_coset_pipeline<T: ExactScalar>(
    p: &Polytope<T>,
    probe: &ProbeDirection,
    q: &QuasiPeriodicSet<T>,
    i: usize,
    mode: &VerificationMode<T>,
) -> Result<PipelineOutcome<T>> {
    let others: Vec<usize> = (0..q.cosets().len()).filter(|&j| j != i).collect();
    split_check(p, probe, q, &[i], &others, mode)
}
