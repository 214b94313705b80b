//! Lattices, translated lattices and point enumeration.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{inverse, mat_vec, rational_lattice_hnf, transpose, Matrix};
use crate::polytope::{Boundary, Facet, HalfOpenPolytope, Polytope, ProbeDirection};
use crate::scalar::{dot, ExactScalar, Rational, Sign};

/// Probe search radius for fundamental domains of irrational bases.
const MAX_PROBE_RADIUS: i64 = 64;

/// A full-rank lattice `B·Zᵈ`. `basis[j]` is the `j`-th basis vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Lattice<T> {
    basis: Matrix<T>,
    inverse: Matrix<T>,
}

impl<T: ExactScalar> Lattice<T> {
    /// From basis vectors (the columns of `B`).
    pub fn new(columns: Vec<Vec<T>>) -> Result<Self> {
        let d = columns.len();
        if d == 0 {
            return Err(Error::InvalidLattice("empty basis".into()));
        }
        if let Some(c) = columns.iter().find(|c| c.len() != d) {
            return Err(Error::InvalidLattice(format!(
                "basis vector of length {} in dimension {d}",
                c.len()
            )));
        }
        let rows = transpose(&columns);
        let inverse = inverse(&rows).map_err(|e| match e {
            Error::InvalidInput(_) => Error::InvalidLattice("singular basis".into()),
            other => other,
        })?;
        Ok(Lattice {
            basis: columns,
            inverse,
        })
    }

    /// `Zᵈ`.
    pub fn integer(d: usize) -> Self {
        Self::scaled_identity(d, &Rational::one())
    }

    /// `s·Zᵈ` for a positive rational `s`.
    pub fn scaled_identity(d: usize, s: &Rational) -> Self {
        let col = |j: usize, x: &Rational| -> Vec<T> {
            (0..d)
                .map(|i| if i == j { T::from_rational(x.clone()) } else { T::zero() })
                .collect()
        };
        Lattice {
            basis: (0..d).map(|j| col(j, s)).collect(),
            inverse: transpose(&(0..d).map(|j| col(j, &s.recip())).collect::<Vec<_>>()),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Basis vectors, i.e. the columns of `B`.
    pub fn basis(&self) -> &[Vec<T>] {
        &self.basis
    }

    /// Rows of `B⁻¹`.
    pub fn inverse_rows(&self) -> &[Vec<T>] {
        &self.inverse
    }

    /// Rows of `B`.
    pub fn basis_rows(&self) -> Matrix<T> {
        transpose(&self.basis)
    }

    /// The coefficients `c` with `B·c = v`.
    pub fn coords(&self, v: &[T]) -> Result<Vec<T>> {
        self.check_dim(v.len())?;
        mat_vec(&self.inverse, v)
    }

    /// `B·k` for an integer vector `k`.
    pub fn point(&self, k: &[i64]) -> Vec<T> {
        let d = self.dim();
        let mut x = vec![T::zero(); d];
        for (col, &kj) in self.basis.iter().zip(k) {
            if kj == 0 {
                continue;
            }
            let f = Rational::from_integer(kj.into());
            for i in 0..d {
                x[i] = x[i].clone() + &col[i].scale(&f);
            }
        }
        x
    }

    /// Whether `v` is a lattice vector.
    pub fn contains(&self, v: &[T]) -> Result<bool> {
        for c in self.coords(v)? {
            if !is_integral(&c)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `Some(B)` with rational entries, when the basis is rational.
    pub fn rational_basis(&self) -> Option<Matrix<Rational>> {
        self.basis
            .iter()
            .map(|c| c.iter().map(|x| x.as_rational()).collect::<Option<Vec<_>>>())
            .collect()
    }

    /// Column Hermite normal form for rational bases, the basis itself
    /// otherwise. Equal lattices with rational bases get equal canonical bases.
    pub fn canonical_basis(&self) -> Result<Matrix<T>> {
        match self.rational_basis() {
            Some(b) => Ok(rational_lattice_hnf(&b, self.dim())?
                .into_iter()
                .map(|c| c.into_iter().map(T::from_rational).collect())
                .collect()),
            None => Ok(self.basis.clone()),
        }
    }

    /// Whether both bases generate the same set of points.
    pub fn same_lattice(&self, other: &Self) -> Result<bool> {
        if self.dim() != other.dim() {
            return Ok(false);
        }
        if self.basis == other.basis {
            return Ok(true);
        }
        Ok(self.contains_lattice(other)? && other.contains_lattice(self)?)
    }

    /// Whether `other ⊆ self`.
    pub fn contains_lattice(&self, other: &Self) -> Result<bool> {
        for c in &other.basis {
            if !self.contains(c)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `(1/n)·L`.
    pub fn refine(&self, n: &BigInt) -> Result<Self> {
        if n <= &BigInt::zero() {
            return Err(Error::InvalidInput("refinement factor must be positive".into()));
        }
        let s = Rational::new(BigInt::one(), n.clone());
        let basis = self
            .basis
            .iter()
            .map(|c| c.iter().map(|x| x.scale(&s)).collect())
            .collect();
        let inverse = self
            .inverse
            .iter()
            .map(|r| r.iter().map(|x| x.scale(&s.recip())).collect())
            .collect();
        Ok(Lattice { basis, inverse })
    }

    /// The half-open parallelepiped `B·[0,1)ᵈ`.
    pub fn fundamental_domain(&self) -> Result<HalfOpenPolytope<T>> {
        let d = self.dim();
        let mut facets = Vec::with_capacity(2 * d);
        for row in &self.inverse {
            facets.push(Facet {
                normal: row.iter().map(|x| -x.clone()).collect(),
                offset: T::zero(),
            });
            facets.push(Facet {
                normal: row.clone(),
                offset: T::from_i64(1),
            });
        }
        let p = Polytope::from_facets(d, facets)?;
        let probe = self.interior_direction()?;
        HalfOpenPolytope::new(p, probe)
    }

    /// An integer vector `h` with every coordinate of `B⁻¹h` positive.
    fn interior_direction(&self) -> Result<ProbeDirection> {
        if let Some(b) = self.rational_basis() {
            // h = q·B·(1,…,1) scaled to clear denominators.
            let sum: Vec<Rational> = (0..self.dim()).map(|i| b.iter().map(|c| c[i].clone()).sum()).collect();
            let den = crate::scalar::denominator_lcm(&sum);
            let h: Option<Vec<i64>> = sum
                .iter()
                .map(|x| (x * Rational::from_integer(den.clone())).to_integer().to_i64())
                .collect();
            if let Some(h) = h {
                return Ok(ProbeDirection(h));
            }
        }
        for radius in 1..=MAX_PROBE_RADIUS {
            for h in crate::polytope::shell_order(self.dim(), radius) {
                let hs: Vec<T> = h.iter().map(|&x| T::from_i64(x)).collect();
                let mut ok = true;
                for c in self.coords(&hs)? {
                    if c.sign()? != Sign::Positive {
                        ok = false;
                        break;
                    }
                }
                if ok {
                    return Ok(ProbeDirection(h));
                }
            }
        }
        Err(Error::InvalidLattice(
            "no small integer direction inside the basis cone".into(),
        ))
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        if n != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: n,
            });
        }
        Ok(())
    }
}

pub(crate) fn is_integral<T: ExactScalar>(x: &T) -> Result<bool> {
    if let Some(q) = x.as_rational() {
        return Ok(q.is_integer());
    }
    let f = T::from_integer(x.floor()?);
    Ok(*x == f)
}

/// A translated lattice `translation + L` whose points each carry `weight`.
#[derive(Debug, Clone, PartialEq)]
pub struct Coset<T> {
    pub lattice: Lattice<T>,
    pub translation: Vec<T>,
    pub weight: u64,
}

impl<T: ExactScalar> Coset<T> {
    pub fn new(lattice: Lattice<T>, translation: Vec<T>, weight: u64) -> Result<Self> {
        if translation.len() != lattice.dim() {
            return Err(Error::DimensionMismatch {
                expected: lattice.dim(),
                found: translation.len(),
            });
        }
        if weight == 0 {
            return Err(Error::InvalidInput("coset weight must be at least 1".into()));
        }
        Ok(Coset {
            lattice,
            translation,
            weight,
        })
    }

    pub fn dim(&self) -> usize {
        self.lattice.dim()
    }

    /// `translation + B·k`.
    pub fn point(&self, k: &[i64]) -> Vec<T> {
        self.lattice
            .point(k)
            .into_iter()
            .zip(&self.translation)
            .map(|(a, b)| a + b)
            .collect()
    }

    pub fn contains(&self, v: &[T]) -> Result<bool> {
        let diff: Vec<T> = v.iter().zip(&self.translation).map(|(a, b)| a.clone() - b).collect();
        self.lattice.contains(&diff)
    }

    /// The same point set with translation reduced into the fundamental domain.
    pub fn reduced(&self) -> Result<Self> {
        let c = self.lattice.coords(&self.translation)?;
        let k: Vec<i64> = c
            .iter()
            .map(|x| {
                x.floor()?
                    .to_i64()
                    .ok_or_else(|| Error::InvalidInput("translation too large".into()))
            })
            .collect::<Result<_>>()?;
        let shift = self.lattice.point(&k);
        Ok(Coset {
            lattice: self.lattice.clone(),
            translation: self
                .translation
                .iter()
                .zip(&shift)
                .map(|(a, b)| a.clone() - b)
                .collect(),
            weight: self.weight,
        })
    }
}

/// A finite union of weighted cosets, possibly of different lattices.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiPeriodicSet<T> {
    cosets: Vec<Coset<T>>,
}

impl<T: ExactScalar> QuasiPeriodicSet<T> {
    pub fn new(cosets: Vec<Coset<T>>) -> Result<Self> {
        let d = cosets
            .first()
            .ok_or_else(|| Error::InvalidInput("a quasi-periodic set needs a coset".into()))?
            .dim();
        if let Some(c) = cosets.iter().find(|c| c.dim() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: c.dim(),
            });
        }
        Ok(QuasiPeriodicSet { cosets })
    }

    pub fn single(coset: Coset<T>) -> Self {
        QuasiPeriodicSet { cosets: vec![coset] }
    }

    pub fn cosets(&self) -> &[Coset<T>] {
        &self.cosets
    }

    pub fn dim(&self) -> usize {
        self.cosets[0].dim()
    }

    /// The cosets at the given (0-based) indices.
    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        let cosets = indices
            .iter()
            .map(|&i| {
                self.cosets
                    .get(i)
                    .cloned()
                    .ok_or_else(|| Error::InvalidInput(format!("coset index {} out of range", i + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        QuasiPeriodicSet::new(cosets)
    }

    /// Every weight multiplied by `factor`.
    pub fn scaled_weights(&self, factor: u64) -> Self {
        QuasiPeriodicSet {
            cosets: self
                .cosets
                .iter()
                .map(|c| Coset {
                    weight: c.weight * factor,
                    ..c.clone()
                })
                .collect(),
        }
    }

    /// A lattice of periods shared by every coset.
    ///
    /// Cosets of one lattice give that lattice. Rational lattices give their
    /// intersection, computed as the dual of the sum of the duals. Anything
    /// else gives `None`.
    pub fn common_period(&self) -> Result<Option<Lattice<T>>> {
        let first = &self.cosets[0].lattice;
        let mut shared = true;
        for c in &self.cosets[1..] {
            if !first.same_lattice(&c.lattice)? {
                shared = false;
                break;
            }
        }
        if shared {
            return Ok(Some(first.clone()));
        }
        let d = self.dim();
        let mut dual_generators: Vec<Vec<Rational>> = Vec::new();
        for c in &self.cosets {
            let Some(b) = c.lattice.rational_basis() else {
                return Ok(None);
            };
            // Columns of B⁻ᵀ are the rows of B⁻¹.
            let rows = transpose(&b);
            dual_generators.extend(inverse(&rows)?);
        }
        let dual = rational_lattice_hnf(&dual_generators, d)?;
        let meet_rows = inverse(&transpose(&dual))?;
        // (D⁻ᵀ) columns = rows of D⁻¹.
        let columns: Matrix<T> = meet_rows
            .into_iter()
            .map(|r| r.into_iter().map(T::from_rational).collect())
            .collect();
        Ok(Some(Lattice::new(columns)?))
    }
}

/// A finite list of points with multiplicities.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct WindowMultiset<T> {
    pub points: Vec<(Vec<T>, u64)>,
}

impl<T: ExactScalar> WindowMultiset<T> {
    pub fn new(points: Vec<(Vec<T>, u64)>) -> Result<Self> {
        if points.iter().any(|(_, m)| *m == 0) {
            return Err(Error::InvalidInput("multiplicities must be at least 1".into()));
        }
        if let Some((p, _)) = points.first() {
            let d = p.len();
            if let Some((q, _)) = points.iter().find(|(q, _)| q.len() != d) {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: q.len(),
                });
            }
        }
        Ok(WindowMultiset { points })
    }

    /// Total multiplicity.
    pub fn total(&self) -> u64 {
        self.points.iter().map(|(_, m)| m).sum()
    }

    /// Every point of `q` in the closed box `[lower, upper]`.
    pub fn from_set_in_box(q: &QuasiPeriodicSet<T>, lower: &[T], upper: &[T]) -> Result<Self> {
        let b = Polytope::from_box(lower, upper)?;
        let mut points = Vec::new();
        for c in q.cosets() {
            points.extend(enumerate_in_polytope(c, &b, &Boundary::Closed)?.points);
        }
        Ok(WindowMultiset { points })
    }
}

/// Constraint system `⟨n, x⟩ ≤ c` (strict where flagged) with known vertices.
#[derive(Debug, Clone)]
pub(crate) struct Region<T> {
    pub facets: Vec<Facet<T>>,
    pub strict: Vec<bool>,
    pub vertices: Vec<Vec<T>>,
}

impl<T: ExactScalar> Region<T> {
    pub fn of(p: &Polytope<T>, strict: Vec<bool>) -> Self {
        Region {
            facets: p.facets().to_vec(),
            strict,
            vertices: p.vertices().to_vec(),
        }
    }

    /// `v − P`, keeping each facet's strictness.
    pub fn reflected(p: &Polytope<T>, strict: Vec<bool>, v: &[T]) -> Result<Self> {
        let facets = p
            .facets()
            .iter()
            .map(|f| {
                Ok(Facet {
                    normal: f.normal.iter().map(|x| -x.clone()).collect(),
                    offset: f.offset.clone() - &dot(&f.normal, v)?,
                })
            })
            .collect::<Result<_>>()?;
        let vertices = p
            .vertices()
            .iter()
            .map(|w| v.iter().zip(w).map(|(a, b)| a.clone() - b).collect())
            .collect();
        Ok(Region {
            facets,
            strict,
            vertices,
        })
    }
}

/// The region rewritten in lattice coordinates `k` of a coset.
struct CoordinateSystem<T> {
    /// Coefficients of `k` in each facet inequality.
    coeffs: Vec<Vec<T>>,
    rhs: Vec<T>,
    strict: Vec<bool>,
    ranges: Vec<(i64, i64)>,
}

impl<T: ExactScalar> CoordinateSystem<T> {
    fn new(coset: &Coset<T>, region: &Region<T>) -> Result<Option<Self>> {
        let d = coset.dim();
        let lattice = &coset.lattice;
        let t = &coset.translation;
        let mut lo: Vec<Option<T>> = vec![None; d];
        let mut hi: Vec<Option<T>> = vec![None; d];
        for v in &region.vertices {
            let rel: Vec<T> = v.iter().zip(t).map(|(a, b)| a.clone() - b).collect();
            let c = lattice.coords(&rel)?;
            for k in 0..d {
                if lo[k]
                    .as_ref()
                    .map_or(Ok(true), |m| c[k].try_cmp(m).map(|o| o.is_lt()))?
                {
                    lo[k] = Some(c[k].clone());
                }
                if hi[k]
                    .as_ref()
                    .map_or(Ok(true), |m| c[k].try_cmp(m).map(|o| o.is_gt()))?
                {
                    hi[k] = Some(c[k].clone());
                }
            }
        }
        let mut ranges = Vec::with_capacity(d);
        for k in 0..d {
            let (Some(l), Some(h)) = (&lo[k], &hi[k]) else {
                return Ok(None);
            };
            let a = to_i64(l.ceil()?)?;
            let b = to_i64(h.floor()?)?;
            if a > b {
                return Ok(None);
            }
            ranges.push((a, b));
        }
        let mut coeffs = Vec::with_capacity(region.facets.len());
        let mut rhs = Vec::with_capacity(region.facets.len());
        for f in &region.facets {
            coeffs.push(
                lattice
                    .basis()
                    .iter()
                    .map(|col| dot(&f.normal, col))
                    .collect::<Result<Vec<T>>>()?,
            );
            rhs.push(f.offset.clone() - &dot(&f.normal, t)?);
        }
        Ok(Some(CoordinateSystem {
            coeffs,
            rhs,
            strict: region.strict.clone(),
            ranges,
        }))
    }

    /// Inclusive range of the last coordinate given the others, or `None`.
    fn last_range(&self, prefix: &[i64]) -> Result<Option<(i64, i64)>> {
        let d = self.ranges.len();
        let (mut lo, mut hi) = self.ranges[d - 1];
        for ((a, r0), &open) in self.coeffs.iter().zip(&self.rhs).zip(&self.strict) {
            let mut r = r0.clone();
            for (j, &kj) in prefix.iter().enumerate() {
                if kj != 0 && !a[j].is_zero() {
                    r = r - a[j].scale(&Rational::from_integer(kj.into()));
                }
            }
            let last = &a[d - 1];
            match last.sign()? {
                Sign::Zero => {
                    let ok = match r.sign()? {
                        Sign::Positive => true,
                        Sign::Zero => !open,
                        Sign::Negative => false,
                    };
                    if !ok {
                        return Ok(None);
                    }
                }
                s => {
                    let bound = match last.as_rational() {
                        Some(q) => r.scale(&q.recip()),
                        None => r.try_div(last)?,
                    };
                    if s == Sign::Positive {
                        // k ≤ bound, or k < bound when open.
                        let b = if open {
                            bound.ceil()? - BigInt::one()
                        } else {
                            bound.floor()?
                        };
                        hi = hi.min(saturate(b));
                    } else {
                        let b = if open {
                            bound.floor()? + BigInt::one()
                        } else {
                            bound.ceil()?
                        };
                        lo = lo.max(saturate(b));
                    }
                }
            }
            if lo > hi {
                return Ok(None);
            }
        }
        Ok(Some((lo, hi)))
    }

    /// Calls `visit(prefix, lo, hi)` for every prefix of the first `d − 1`
    /// coordinates with a nonempty last range, in lexicographic order.
    fn scan<F>(&self, mut visit: F) -> Result<()>
    where
        F: FnMut(&[i64], i64, i64) -> Result<()>,
    {
        let d = self.ranges.len();
        let mut prefix: Vec<i64> = self.ranges[..d - 1].iter().map(|r| r.0).collect();
        loop {
            if let Some((lo, hi)) = self.last_range(&prefix)? {
                visit(&prefix, lo, hi)?;
            }
            let mut k = d - 1;
            loop {
                if k == 0 {
                    return Ok(());
                }
                k -= 1;
                if prefix[k] < self.ranges[k].1 {
                    prefix[k] += 1;
                    for j in k + 1..d - 1 {
                        prefix[j] = self.ranges[j].0;
                    }
                    break;
                }
            }
        }
    }

    /// The same scan restricted to one value of the first coordinate.
    fn restricted(&self, first: i64) -> Self {
        let mut ranges = self.ranges.clone();
        ranges[0] = (first, first);
        CoordinateSystem {
            coeffs: self.coeffs.clone(),
            rhs: self.rhs.clone(),
            strict: self.strict.clone(),
            ranges,
        }
    }
}

fn saturate(b: BigInt) -> i64 {
    b.to_i64()
        .unwrap_or(if b < BigInt::zero() { i64::MIN } else { i64::MAX })
}

fn to_i64(b: BigInt) -> Result<i64> {
    b.to_i64()
        .ok_or_else(|| Error::InvalidInput(format!("lattice coordinate {b} out of range")))
}

/// Number of coset points (with weight) in the region.
pub(crate) fn count_in_region<T: ExactScalar>(coset: &Coset<T>, region: &Region<T>) -> Result<u64> {
    let Some(sys) = CoordinateSystem::new(coset, region)? else {
        return Ok(0);
    };
    let mut n: u64 = 0;
    sys.scan(|_, lo, hi| {
        n += (hi - lo + 1) as u64;
        Ok(())
    })?;
    Ok(n * coset.weight)
}

/// `start + j·step` for `j < count`, stepping integer numerators over a
/// common denominator per coordinate. `None` when `start` is not rational or
/// the numerators leave `i128`.
fn rational_run<T: ExactScalar>(start: &[T], step: &[Rational], count: usize) -> Option<Vec<Vec<T>>> {
    let mut columns: Vec<(i128, i128, i128)> = Vec::with_capacity(start.len());
    for (x, s) in start.iter().zip(step) {
        let x = x.as_rational()?;
        let den = num_integer::Integer::lcm(x.denom(), s.denom());
        let n0 = (x.numer() * (&den / x.denom())).to_i128()?;
        let ds = (s.numer() * (&den / s.denom())).to_i128()?;
        let den = den.to_i128()?;
        n0.checked_add(ds.checked_mul(count as i128)?)?;
        columns.push((n0, ds, den));
    }
    let mut out = vec![Vec::with_capacity(start.len()); count];
    for &(n0, ds, den) in &columns {
        let mut n = n0;
        for point in out.iter_mut() {
            let g = gcd_i128(n, den);
            let r = Rational::new_raw(BigInt::from(n / g), BigInt::from(den / g));
            point.push(T::from_rational(r));
            n += ds;
        }
    }
    Some(out)
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1) as i128
}

/// Materialized coset points in the region, ordered lexicographically by
/// lattice coordinates.
pub(crate) fn points_in_region<T: ExactScalar>(coset: &Coset<T>, region: &Region<T>) -> Result<Vec<Vec<T>>> {
    let Some(sys) = CoordinateSystem::new(coset, region)? else {
        return Ok(Vec::new());
    };
    let d = coset.dim();
    let last = &coset.lattice.basis()[d - 1];
    let last_rational: Option<Vec<Rational>> = last.iter().map(ExactScalar::as_rational).collect();
    let collect = |sys: &CoordinateSystem<T>| -> Result<Vec<Vec<T>>> {
        let mut out = Vec::new();
        sys.scan(|prefix, lo, hi| {
            let mut k: Vec<i64> = prefix.to_vec();
            k.push(lo);
            let mut x = coset.point(&k);
            if let Some(step) = &last_rational {
                if let Some(run) = rational_run(&x, step, (hi - lo + 1) as usize) {
                    out.extend(run);
                    return Ok(());
                }
            }
            for _ in lo..=hi {
                out.push(x.clone());
                for i in 0..d {
                    x[i] = x[i].clone() + &last[i];
                }
            }
            Ok(())
        })?;
        Ok(out)
    };
    if d < 2 {
        return collect(&sys);
    }
    let (a, b) = sys.ranges[0];
    let parts: Vec<Result<Vec<Vec<T>>>> = (a..=b)
        .into_par_iter()
        .map(|first| collect(&sys.restricted(first)))
        .collect();
    let mut out = Vec::new();
    for p in parts {
        out.extend(p?);
    }
    Ok(out)
}

/// Coset points inside `P` (closed) or `P^h` (half-open), each with the
/// coset's weight, ordered lexicographically by lattice coordinates.
pub fn enumerate_in_polytope<T: ExactScalar>(
    coset: &Coset<T>,
    p: &Polytope<T>,
    boundary: &Boundary,
) -> Result<WindowMultiset<T>> {
    check_same_dim(coset.dim(), p.dim())?;
    let region = Region::of(p, boundary.strictness(p)?);
    Ok(WindowMultiset {
        points: points_in_region(coset, &region)?
            .into_iter()
            .map(|x| (x, coset.weight))
            .collect(),
    })
}

/// Number of coset points in `P` or `P^h`, with weight.
pub fn count_in_polytope<T: ExactScalar>(coset: &Coset<T>, p: &Polytope<T>, boundary: &Boundary) -> Result<u64> {
    check_same_dim(coset.dim(), p.dim())?;
    count_in_region(coset, &Region::of(p, boundary.strictness(p)?))
}

/// Coset points in the closed box `[lower, upper]`.
pub fn enumerate_in_box<T: ExactScalar>(coset: &Coset<T>, lower: &[T], upper: &[T]) -> Result<WindowMultiset<T>> {
    enumerate_in_polytope(coset, &Polytope::from_box(lower, upper)?, &Boundary::Closed)
}

pub(crate) fn check_same_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}
