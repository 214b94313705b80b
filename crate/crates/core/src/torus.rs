//! Exact evaluation over one period cell.
//!
//! Everything is expressed in period coordinates `y = B₀⁻¹x`, where the
//! period lattice becomes `Zᵈ` and a cell is the unit square (or interval).
//! The translates `P + λ` meeting the closed cell are collected once. Their
//! coverage counts are then swept along vertical lines: one at every event
//! abscissa (cell borders, vertices, edge crossings) and one between each
//! pair of consecutive events. Along a line, each translate covers an
//! interval, so the counts at every breakpoint and every gap follow from a
//! difference array. Every face of the edge arrangement meets some evaluated
//! point, hence the set of value vectors is complete.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{enumerate_in_box, Coset, Lattice};
use crate::linalg::{hermite_normal_form, mat_vec};
use crate::polytope::{Facet, Polytope};
use crate::scalar::{dot, sort_dedup, ExactScalar, Rational, Sign};

#[derive(Debug, Clone)]
struct Translate<T> {
    group: usize,
    weight: u64,
    /// Facet offsets of the shifted polytope, in facet order.
    offsets: Vec<T>,
    vertices: Vec<Vec<T>>,
}

/// Counts of the sweep, reported as evidence.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SweepStats {
    pub translates: usize,
    pub segments: usize,
    pub event_lines: usize,
    pub evaluations: usize,
}

/// Value vectors, each with a point (original coordinates) where it occurs.
pub type ValuePoints<T> = Vec<(Vec<u64>, Vec<T>)>;

/// Distinct value vectors, each with the first point (original coordinates)
/// where it was seen.
#[derive(Debug, Clone, PartialEq)]
pub struct Sweep<T> {
    pub values: ValuePoints<T>,
    pub stats: SweepStats,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Segment<T> {
    pub start: Vec<T>,
    pub end: Vec<T>,
}

/// Result of a connectivity analysis of `Rᵈ ∖ H`.
#[derive(Debug, Clone, PartialEq)]
pub struct Separation<T> {
    /// Pieces of `H` inside one period cell, in original coordinates.
    pub segments: Vec<Segment<T>>,
    /// Distinct supporting lines `⟨n, x⟩ = c` of those pieces.
    pub lines: Vec<Facet<T>>,
    /// Connected components of the complement on the torus.
    pub components: usize,
    pub connected: bool,
    pub reason: String,
}

#[derive(Debug, Clone)]
pub struct Torus<T> {
    period: Lattice<T>,
    basis_rows: Vec<Vec<T>>,
    dim: usize,
    shape: Polytope<T>,
    strict: Vec<bool>,
    /// For each facet, the indices of the shape vertices on it (2D only).
    facet_vertices: Vec<Vec<usize>>,
    translates: Vec<Translate<T>>,
    groups: usize,
}

impl<T: ExactScalar> Torus<T> {
    /// Collects the translates of `p` by each group's cosets that meet the
    /// closed period cell. Every coset lattice must contain `period`.
    pub fn new(p: &Polytope<T>, strict: Vec<bool>, groups: &[Vec<Coset<T>>], period: &Lattice<T>) -> Result<Self> {
        let d = p.dim();
        if d != period.dim() {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: period.dim(),
            });
        }
        if d > 2 {
            return Err(Error::ModeUnavailable(format!(
                "exact torus evaluation is limited to dimensions 1 and 2, got {d}"
            )));
        }
        let basis_rows = period.basis_rows();
        let shape = p.in_coordinates(&basis_rows, period.inverse_rows())?;
        let facet_vertices = (0..shape.facets().len())
            .map(|i| {
                let f = &shape.facets()[i];
                let mut on = Vec::new();
                for (k, v) in shape.vertices().iter().enumerate() {
                    if f.excess(v)?.is_zero() {
                        on.push(k);
                    }
                }
                Ok(on)
            })
            .collect::<Result<Vec<_>>>()?;

        // Bounding box of the cell B₀·[0,1]ᵈ in original coordinates.
        let mut cell_lo: Vec<T> = vec![T::zero(); d];
        let mut cell_hi: Vec<T> = vec![T::zero(); d];
        for col in period.basis() {
            for i in 0..d {
                match col[i].sign()? {
                    Sign::Positive => cell_hi[i] = cell_hi[i].clone() + &col[i],
                    Sign::Negative => cell_lo[i] = cell_lo[i].clone() + &col[i],
                    Sign::Zero => {}
                }
            }
        }
        let (p_lo, p_hi) = p.bounding_box();
        let lam_lo: Vec<T> = cell_lo.iter().zip(p_hi).map(|(a, b)| a.clone() - b).collect();
        let lam_hi: Vec<T> = cell_hi.iter().zip(p_lo).map(|(a, b)| a.clone() - b).collect();
        let (s_lo, s_hi) = shape.bounding_box();
        let one = T::from_i64(1);

        let mut translates = Vec::new();
        for (g, cosets) in groups.iter().enumerate() {
            for c in cosets {
                if c.dim() != d {
                    return Err(Error::DimensionMismatch {
                        expected: d,
                        found: c.dim(),
                    });
                }
                if !c.lattice.contains_lattice(period)? {
                    return Err(Error::InvalidLattice(
                        "period lattice is not contained in a coset lattice".into(),
                    ));
                }
                for (lambda, _) in enumerate_in_box(c, &lam_lo, &lam_hi)?.points {
                    let s = period.coords(&lambda)?;
                    let mut meets = true;
                    for i in 0..d {
                        let lo = s_lo[i].clone() + &s[i];
                        let hi = s_hi[i].clone() + &s[i];
                        if lo.try_cmp(&one)?.is_gt() || hi.sign()? == Sign::Negative {
                            meets = false;
                            break;
                        }
                    }
                    if !meets {
                        continue;
                    }
                    let offsets = shape
                        .facets()
                        .iter()
                        .map(|f| Ok(f.offset.clone() + &dot(&f.normal, &s)?))
                        .collect::<Result<Vec<_>>>()?;
                    let vertices = shape
                        .vertices()
                        .iter()
                        .map(|v| v.iter().zip(&s).map(|(a, b)| a.clone() + b).collect())
                        .collect();
                    translates.push(Translate {
                        group: g,
                        weight: c.weight,
                        offsets,
                        vertices,
                    });
                }
            }
        }
        Ok(Torus {
            period: period.clone(),
            basis_rows,
            dim: d,
            shape,
            strict,
            facet_vertices,
            translates,
            groups: groups.len(),
        })
    }

    pub fn period(&self) -> &Lattice<T> {
        &self.period
    }

    pub fn translate_count(&self) -> usize {
        self.translates.len()
    }

    fn to_original(&self, y: &[T]) -> Result<Vec<T>> {
        mat_vec(&self.basis_rows, y)
    }

    /// All edges of translates whose bounding box meets the closed cell.
    fn edges(&self) -> Result<Vec<(usize, usize, Segment<T>)>> {
        let mut out = Vec::new();
        let zero = T::zero();
        let one = T::from_i64(1);
        for (ti, t) in self.translates.iter().enumerate() {
            for (fi, on) in self.facet_vertices.iter().enumerate() {
                if on.len() != 2 {
                    continue;
                }
                let a = &t.vertices[on[0]];
                let b = &t.vertices[on[1]];
                let mut meets = true;
                for k in 0..2 {
                    let (lo, hi) = ordered(&a[k], &b[k])?;
                    if lo.try_cmp(&one)?.is_gt() || hi.try_cmp(&zero)?.is_lt() {
                        meets = false;
                    }
                }
                if meets {
                    out.push((
                        ti,
                        fi,
                        Segment {
                            start: a.clone(),
                            end: b.clone(),
                        },
                    ));
                }
            }
        }
        Ok(out)
    }

    /// Interval of the free coordinate covered by a translate on the line
    /// where the leading coordinates equal `fixed`.
    fn interval(&self, t: &Translate<T>, fixed: &[T]) -> Result<Option<Interval<T>>> {
        let d = self.dim;
        let mut lo: Option<(T, bool)> = None;
        let mut hi: Option<(T, bool)> = None;
        for ((f, off), &open) in self.shape.facets().iter().zip(&t.offsets).zip(&self.strict) {
            let mut rhs = off.clone();
            for (k, x) in fixed.iter().enumerate() {
                if !f.normal[k].is_zero() {
                    rhs = rhs - f.normal[k].try_mul(x)?;
                }
            }
            let a = &f.normal[d - 1];
            match a.sign()? {
                Sign::Zero => {
                    let ok = match rhs.sign()? {
                        Sign::Positive => true,
                        Sign::Zero => !open,
                        Sign::Negative => false,
                    };
                    if !ok {
                        return Ok(None);
                    }
                }
                s => {
                    let bound = divide(&rhs, a)?;
                    if s == Sign::Positive {
                        tighten(&mut hi, bound, open, true)?;
                    } else {
                        tighten(&mut lo, bound, open, false)?;
                    }
                }
            }
        }
        let (Some((lo, lo_open)), Some((hi, hi_open))) = (lo, hi) else {
            return Err(Error::InvalidPolytope("translate is unbounded along a line".into()));
        };
        match lo.try_cmp(&hi)? {
            std::cmp::Ordering::Greater => Ok(None),
            std::cmp::Ordering::Equal if lo_open || hi_open => Ok(None),
            _ => Ok(Some(Interval {
                lo,
                lo_open,
                hi,
                hi_open,
            })),
        }
    }

    /// Coverage vectors along one line; `gaps_only` skips breakpoints.
    fn sweep_line(&self, fixed: &[T], gaps_only: bool) -> Result<(ValuePoints<T>, usize)> {
        let zero = T::zero();
        let one = T::from_i64(1);
        let mut items: Vec<(usize, u64, Interval<T>)> = Vec::new();
        let mut breaks: Vec<T> = vec![zero.clone(), one.clone()];
        for t in &self.translates {
            if let Some(iv) = self.interval(t, fixed)? {
                for x in [&iv.lo, &iv.hi] {
                    if x.sign()? != Sign::Negative && x.try_cmp(&one)?.is_le() {
                        breaks.push(x.clone());
                    }
                }
                items.push((t.group, t.weight, iv));
            }
        }
        sort_dedup(&mut breaks)?;
        let last = 2 * (breaks.len() - 1);
        let mut diff = vec![vec![0i64; last + 2]; self.groups];
        for (g, w, iv) in &items {
            let start = match locate(&breaks, &iv.lo)? {
                Location::Below => 0,
                Location::Above => continue,
                Location::At(i) => 2 * i + usize::from(iv.lo_open),
            };
            let end = match locate(&breaks, &iv.hi)? {
                Location::Above => last,
                Location::Below => continue,
                Location::At(i) => {
                    if iv.hi_open {
                        if i == 0 {
                            continue;
                        }
                        2 * i - 1
                    } else {
                        2 * i
                    }
                }
            };
            if start > end {
                continue;
            }
            diff[*g][start] += *w as i64;
            diff[*g][end + 1] -= *w as i64;
        }
        let mut running = vec![0i64; self.groups];
        let mut seen: HashSet<Vec<u64>> = HashSet::new();
        let mut out = Vec::new();
        let mut evaluations = 0;
        for pos in 0..=last {
            for g in 0..self.groups {
                running[g] += diff[g][pos];
            }
            if gaps_only && pos % 2 == 0 {
                continue;
            }
            evaluations += 1;
            let values: Vec<u64> = running.iter().map(|&x| x as u64).collect();
            if seen.contains(&values) {
                continue;
            }
            seen.insert(values.clone());
            let y = if pos % 2 == 0 {
                breaks[pos / 2].clone()
            } else {
                midpoint(&breaks[pos / 2], &breaks[pos / 2 + 1])
            };
            let mut point = fixed.to_vec();
            point.push(y);
            out.push((values, self.to_original(&point)?));
        }
        Ok((out, evaluations))
    }

    /// Abscissae of cell borders, vertices and edge crossings in `[0, 1]`.
    fn events(&self, edges: &[(usize, usize, Segment<T>)]) -> Result<Vec<T>> {
        let zero = T::zero();
        let one = T::from_i64(1);
        let mut xs = vec![zero.clone(), one.clone()];
        let inside = |x: &T| -> Result<bool> { Ok(x.sign()? != Sign::Negative && x.try_cmp(&one)?.is_le()) };
        for t in &self.translates {
            for v in &t.vertices {
                if inside(&v[0])? {
                    xs.push(v[0].clone());
                }
            }
        }
        let crossings: Vec<Result<Vec<T>>> = (0..edges.len())
            .into_par_iter()
            .map(|i| {
                let mut found = Vec::new();
                for j in i + 1..edges.len() {
                    if edges[i].0 == edges[j].0 {
                        continue;
                    }
                    let fi = &self.shape.facets()[edges[i].1];
                    let fj = &self.shape.facets()[edges[j].1];
                    let ci = &self.translates[edges[i].0].offsets[edges[i].1];
                    let cj = &self.translates[edges[j].0].offsets[edges[j].1];
                    if let Some(p) = crossing(fi, ci, &edges[i].2, fj, cj, &edges[j].2)? {
                        if inside(&p[0])? {
                            found.push(p[0].clone());
                        }
                    }
                }
                Ok(found)
            })
            .collect();
        for c in crossings {
            xs.extend(c?);
        }
        sort_dedup(&mut xs)?;
        Ok(xs)
    }

    /// Every distinct vector of per-group coverage counts over the cell.
    ///
    /// With `generic_only`, only points off every translated boundary are
    /// evaluated.
    pub fn value_vectors(&self, generic_only: bool) -> Result<Sweep<T>> {
        let mut stats = SweepStats {
            translates: self.translates.len(),
            ..SweepStats::default()
        };
        let lines: Vec<(Vec<T>, bool)> = if self.dim == 1 {
            vec![(Vec::new(), generic_only)]
        } else {
            let edges = self.edges()?;
            stats.segments = edges.len();
            let xs = self.events(&edges)?;
            stats.event_lines = xs.len();
            let mut lines = Vec::with_capacity(2 * xs.len());
            for (i, x) in xs.iter().enumerate() {
                if !generic_only {
                    lines.push((vec![x.clone()], false));
                }
                if let Some(next) = xs.get(i + 1) {
                    lines.push((vec![midpoint(x, next)], generic_only));
                }
            }
            lines
        };
        let results: Vec<Result<(ValuePoints<T>, usize)>> = lines
            .par_iter()
            .map(|(fixed, gaps)| self.sweep_line(fixed, *gaps))
            .collect();
        let mut seen: HashSet<Vec<u64>> = HashSet::new();
        let mut values = Vec::new();
        for r in results {
            let (found, n) = r?;
            stats.evaluations += n;
            for (v, p) in found {
                if seen.insert(v.clone()) {
                    values.push((v, p));
                }
            }
        }
        Ok(Sweep { values, stats })
    }

    /// Connectivity of `Rᵈ ∖ H` where `H` is the intersection of the
    /// boundaries of the translates in groups `a` with those in groups `b`.
    pub fn separation(&self, a: &[usize], b: &[usize]) -> Result<Separation<T>> {
        if self.dim == 1 {
            return self.separation_1d(a, b);
        }
        let edges = self.edges()?;
        let zero = T::zero();
        let one = T::from_i64(1);
        let mut pieces: Vec<Segment<T>> = Vec::new();
        for (ti, fi, e) in &edges {
            if !a.contains(&self.translates[*ti].group) {
                continue;
            }
            for (tj, fj, f) in &edges {
                if !b.contains(&self.translates[*tj].group) {
                    continue;
                }
                let ne = &self.shape.facets()[*fi].normal;
                let nf = &self.shape.facets()[*fj].normal;
                let cross = ne[0].try_mul(&nf[1])? - ne[1].try_mul(&nf[0])?;
                if !cross.is_zero() {
                    continue;
                }
                let cf = &self.translates[*tj].offsets[*fj];
                if !(dot(nf, &e.start)? - cf).is_zero() {
                    continue;
                }
                if let Some(o) = overlap(e, f)? {
                    if let Some(c) = clip_to_cell(&o, &zero, &one)? {
                        if !pieces.contains(&c) {
                            pieces.push(c);
                        }
                    }
                }
            }
        }
        let graph = CellGraph::build(&pieces)?;
        let (components, connected, reason) = graph.analyse()?;
        let segments = pieces
            .iter()
            .map(|s| {
                Ok(Segment {
                    start: self.to_original(&s.start)?,
                    end: self.to_original(&s.end)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut lines: Vec<Facet<T>> = Vec::new();
        for s in &segments {
            let l = supporting_line(s)?;
            if !lines.contains(&l) {
                lines.push(l);
            }
        }
        Ok(Separation {
            segments,
            lines,
            components,
            connected,
            reason,
        })
    }

    fn separation_1d(&self, a: &[usize], b: &[usize]) -> Result<Separation<T>> {
        let one = T::from_i64(1);
        let ends = |groups: &[usize]| -> Vec<T> {
            self.translates
                .iter()
                .filter(|t| groups.contains(&t.group))
                .flat_map(|t| t.vertices.iter().map(|v| v[0].clone()))
                .collect()
        };
        let eb = ends(b);
        let mut common: Vec<T> = Vec::new();
        for x in ends(a) {
            if x.sign()? != Sign::Negative && x.try_cmp(&one)?.is_lt() && eb.contains(&x) {
                common.push(x);
            }
        }
        sort_dedup(&mut common)?;
        let mut segments = Vec::new();
        let mut lines = Vec::new();
        for x in &common {
            let p = self.to_original(std::slice::from_ref(x))?;
            lines.push(Facet {
                normal: vec![T::from_i64(1)],
                offset: p[0].clone(),
            });
            segments.push(Segment {
                start: p.clone(),
                end: p,
            });
        }
        let connected = common.is_empty();
        let reason = if connected {
            "no common boundary points".to_string()
        } else {
            format!("{} common boundary point(s) per period cut the line", common.len())
        };
        Ok(Separation {
            components: common.len().max(1),
            segments,
            lines,
            connected,
            reason,
        })
    }
}

#[derive(Debug, Clone)]
struct Interval<T> {
    lo: T,
    lo_open: bool,
    hi: T,
    hi_open: bool,
}

enum Location {
    Below,
    Above,
    At(usize),
}

/// Position of `x` relative to sorted breakpoints spanning `[0, 1]`.
fn locate<T: ExactScalar>(breaks: &[T], x: &T) -> Result<Location> {
    if x.try_cmp(&breaks[0])?.is_lt() {
        return Ok(Location::Below);
    }
    if x.try_cmp(&breaks[breaks.len() - 1])?.is_gt() {
        return Ok(Location::Above);
    }
    let (mut lo, mut hi) = (0, breaks.len() - 1);
    while lo <= hi {
        let mid = (lo + hi) / 2;
        match x.try_cmp(&breaks[mid])? {
            std::cmp::Ordering::Equal => return Ok(Location::At(mid)),
            std::cmp::Ordering::Less => hi = mid - 1,
            std::cmp::Ordering::Greater => lo = mid + 1,
        }
    }
    Err(Error::InvalidInput("breakpoint missing from sweep".into()))
}

fn tighten<T: ExactScalar>(slot: &mut Option<(T, bool)>, bound: T, open: bool, upper: bool) -> Result<()> {
    match slot {
        None => *slot = Some((bound, open)),
        Some((cur, cur_open)) => match bound.try_cmp(cur)? {
            std::cmp::Ordering::Equal => *cur_open |= open,
            o if o.is_lt() == upper => *slot = Some((bound, open)),
            _ => {}
        },
    }
    Ok(())
}

fn divide<T: ExactScalar>(x: &T, by: &T) -> Result<T> {
    match by.as_rational() {
        Some(q) => Ok(x.scale(&q.recip())),
        None => x.try_div(by),
    }
}

fn midpoint<T: ExactScalar>(a: &T, b: &T) -> T {
    (a.clone() + b).scale(&Rational::new(1.into(), 2.into()))
}

fn ordered<T: ExactScalar>(a: &T, b: &T) -> Result<(T, T)> {
    if a.try_cmp(b)?.is_le() {
        Ok((a.clone(), b.clone()))
    } else {
        Ok((b.clone(), a.clone()))
    }
}

fn within<T: ExactScalar>(x: &T, a: &T, b: &T) -> Result<bool> {
    let (lo, hi) = ordered(a, b)?;
    Ok(x.try_cmp(&lo)?.is_ge() && x.try_cmp(&hi)?.is_le())
}

/// Crossing point of two non-parallel edges, if it lies on both.
fn crossing<T: ExactScalar>(
    fi: &Facet<T>,
    ci: &T,
    si: &Segment<T>,
    fj: &Facet<T>,
    cj: &T,
    sj: &Segment<T>,
) -> Result<Option<Vec<T>>> {
    let (a, b) = (&fi.normal, &fj.normal);
    let det = a[0].try_mul(&b[1])? - a[1].try_mul(&b[0])?;
    if det.is_zero() {
        return Ok(None);
    }
    let x = divide(&(ci.try_mul(&b[1])? - cj.try_mul(&a[1])?), &det)?;
    let y = divide(&(a[0].try_mul(cj)? - b[0].try_mul(ci)?), &det)?;
    for s in [si, sj] {
        if !within(&x, &s.start[0], &s.end[0])? || !within(&y, &s.start[1], &s.end[1])? {
            return Ok(None);
        }
    }
    Ok(Some(vec![x, y]))
}

/// Positive-length overlap of two collinear segments.
fn overlap<T: ExactScalar>(e: &Segment<T>, f: &Segment<T>) -> Result<Option<Segment<T>>> {
    let axis = if e.start[0] == e.end[0] { 1 } else { 0 };
    let sort = |s: &Segment<T>| -> Result<(Vec<T>, Vec<T>)> {
        if s.start[axis].try_cmp(&s.end[axis])?.is_le() {
            Ok((s.start.clone(), s.end.clone()))
        } else {
            Ok((s.end.clone(), s.start.clone()))
        }
    };
    let (e0, e1) = sort(e)?;
    let (f0, f1) = sort(f)?;
    let lo = if e0[axis].try_cmp(&f0[axis])?.is_ge() { e0 } else { f0 };
    let hi = if e1[axis].try_cmp(&f1[axis])?.is_le() { e1 } else { f1 };
    if lo[axis].try_cmp(&hi[axis])?.is_lt() {
        Ok(Some(Segment { start: lo, end: hi }))
    } else {
        Ok(None)
    }
}

/// The part of a segment inside `[lo, hi]²`, if it has positive length.
fn clip_to_cell<T: ExactScalar>(s: &Segment<T>, lo: &T, hi: &T) -> Result<Option<Segment<T>>> {
    let dir: Vec<T> = s.end.iter().zip(&s.start).map(|(a, b)| a.clone() - b).collect();
    let mut t0 = T::zero();
    let mut t1 = T::from_i64(1);
    for k in 0..2 {
        match dir[k].sign()? {
            Sign::Zero => {
                if s.start[k].try_cmp(lo)?.is_lt() || s.start[k].try_cmp(hi)?.is_gt() {
                    return Ok(None);
                }
            }
            sg => {
                let ta = divide(&(lo.clone() - &s.start[k]), &dir[k])?;
                let tb = divide(&(hi.clone() - &s.start[k]), &dir[k])?;
                let (enter, leave) = if sg == Sign::Positive { (ta, tb) } else { (tb, ta) };
                if enter.try_cmp(&t0)?.is_gt() {
                    t0 = enter;
                }
                if leave.try_cmp(&t1)?.is_lt() {
                    t1 = leave;
                }
            }
        }
    }
    if t0.try_cmp(&t1)?.is_ge() {
        return Ok(None);
    }
    let at = |t: &T| -> Result<Vec<T>> {
        s.start
            .iter()
            .zip(&dir)
            .map(|(a, d)| Ok(a.clone() + &d.try_mul(t)?))
            .collect()
    };
    Ok(Some(Segment {
        start: at(&t0)?,
        end: at(&t1)?,
    }))
}

/// `⟨n, x⟩ = c` through the segment, `n` scaled so its first nonzero entry is 1.
fn supporting_line<T: ExactScalar>(s: &Segment<T>) -> Result<Facet<T>> {
    let dx = s.end[0].clone() - &s.start[0];
    let dy = s.end[1].clone() - &s.start[1];
    let normal = if dy.is_zero() {
        vec![T::zero(), T::from_i64(1)]
    } else {
        vec![T::from_i64(1), divide(&(-dx), &dy)?]
    };
    let offset = dot(&normal, &s.start)?;
    Ok(Facet { normal, offset })
}

/// Cells of the unit square cut by a set of segments, with torus adjacency.
struct CellGraph<T> {
    cells: Vec<Cell<T>>,
    slabs: Vec<Vec<usize>>,
    xs: Vec<T>,
    verticals: Vec<(T, T, T)>,
    /// Per slab: whether a segment runs along y = 0 or y = 1.
    wrap_blocked: Vec<bool>,
}

struct Cell<T> {
    left: (T, T),
    right: (T, T),
    bottom: bool,
    top: bool,
}

impl<T: ExactScalar> CellGraph<T> {
    fn build(segments: &[Segment<T>]) -> Result<Self> {
        let zero = T::zero();
        let one = T::from_i64(1);
        let mut xs = vec![zero.clone(), one.clone()];
        let mut verticals = Vec::new();
        let mut sloped: Vec<(Segment<T>, T, T)> = Vec::new();
        for s in segments {
            xs.push(s.start[0].clone());
            xs.push(s.end[0].clone());
            if s.start[0] == s.end[0] {
                let (a, b) = ordered(&s.start[1], &s.end[1])?;
                verticals.push((s.start[0].clone(), a, b));
            } else {
                let (a, b) = ordered(&s.start[0], &s.end[0])?;
                sloped.push((s.clone(), a, b));
            }
        }
        for i in 0..sloped.len() {
            for j in i + 1..sloped.len() {
                if let Some(x) = segment_crossing_x(&sloped[i].0, &sloped[j].0)? {
                    xs.push(x);
                }
            }
        }
        sort_dedup(&mut xs)?;
        let mut cells = Vec::new();
        let mut slabs = Vec::new();
        let mut wrap_blocked = Vec::new();
        for w in xs.windows(2) {
            let (x0, x1) = (&w[0], &w[1]);
            let mid = midpoint(x0, x1);
            // Boundaries: (y at mid, y at x0, y at x1).
            let mut bounds: Vec<(T, T, T)> = vec![
                (zero.clone(), zero.clone(), zero.clone()),
                (one.clone(), one.clone(), one.clone()),
            ];
            let mut blocked = false;
            for (s, a, b) in &sloped {
                if a.try_cmp(x0)?.is_le() && b.try_cmp(x1)?.is_ge() {
                    let ym = y_at(s, &mid)?;
                    if ym.is_zero() || ym == one {
                        blocked = true;
                        continue;
                    }
                    bounds.push((ym, y_at(s, x0)?, y_at(s, x1)?));
                }
            }
            crate::scalar::try_sort_by(&mut bounds, |p, q| p.0.try_cmp(&q.0))?;
            bounds.dedup_by(|p, q| p.0 == q.0);
            let mut ids = Vec::new();
            for k in 0..bounds.len() - 1 {
                ids.push(cells.len());
                cells.push(Cell {
                    left: (bounds[k].1.clone(), bounds[k + 1].1.clone()),
                    right: (bounds[k].2.clone(), bounds[k + 1].2.clone()),
                    bottom: k == 0,
                    top: k + 2 == bounds.len(),
                });
            }
            slabs.push(ids);
            wrap_blocked.push(blocked);
        }
        Ok(CellGraph {
            cells,
            slabs,
            xs,
            verticals,
            wrap_blocked,
        })
    }

    /// Whether the open interval `(a, b)` on the line `x = at` (or, for the
    /// wrap, on `x = 0` and `x = 1`) keeps a point outside vertical segments.
    fn passage(&self, lines: &[&T], a: &T, b: &T) -> Result<bool> {
        if a.try_cmp(b)?.is_ge() {
            return Ok(false);
        }
        let mut blockers: Vec<(T, T)> = self
            .verticals
            .iter()
            .filter(|(x, _, _)| lines.contains(&x))
            .map(|(_, lo, hi)| (lo.clone(), hi.clone()))
            .collect();
        crate::scalar::try_sort_by(&mut blockers, |p, q| p.0.try_cmp(&q.0))?;
        let mut reach = a.clone();
        for (lo, hi) in blockers {
            if lo.try_cmp(&reach)?.is_gt() {
                return Ok(true);
            }
            if hi.try_cmp(&reach)?.is_gt() {
                reach = hi;
            }
            if reach.try_cmp(b)?.is_ge() {
                return Ok(false);
            }
        }
        Ok(reach.try_cmp(b)?.is_lt())
    }

    fn link(
        &self,
        from: &[usize],
        to: &[usize],
        lines: &[&T],
        voltage: (i64, i64),
        edges: &mut Vec<(usize, usize, (i64, i64))>,
    ) -> Result<()> {
        for &u in from {
            for &v in to {
                let (ua, ub) = &self.cells[u].right;
                let (va, vb) = &self.cells[v].left;
                let a = if ua.try_cmp(va)?.is_ge() { ua } else { va };
                let b = if ub.try_cmp(vb)?.is_le() { ub } else { vb };
                if self.passage(lines, a, b)? {
                    edges.push((u, v, voltage));
                }
            }
        }
        Ok(())
    }

    /// `(components on the torus, complement connected in the plane, reason)`.
    fn analyse(&self) -> Result<(usize, bool, String)> {
        let n = self.cells.len();
        let mut edges: Vec<(usize, usize, (i64, i64))> = Vec::new();
        let last = self.slabs.len() - 1;
        for i in 0..last {
            self.link(
                &self.slabs[i],
                &self.slabs[i + 1],
                &[&self.xs[i + 1]],
                (0, 0),
                &mut edges,
            )?;
        }
        let ends = [&self.xs[0], &self.xs[self.xs.len() - 1]];
        self.link(&self.slabs[last], &self.slabs[0], &ends, (1, 0), &mut edges)?;
        for (i, ids) in self.slabs.iter().enumerate() {
            if self.wrap_blocked[i] {
                continue;
            }
            let top = ids.iter().copied().find(|&c| self.cells[c].top);
            let bottom = ids.iter().copied().find(|&c| self.cells[c].bottom);
            if let (Some(t), Some(b)) = (top, bottom) {
                edges.push((t, b, (0, 1)));
            }
        }
        let mut adj: Vec<Vec<(usize, (i64, i64))>> = vec![Vec::new(); n];
        for &(u, v, (a, b)) in &edges {
            adj[u].push((v, (a, b)));
            adj[v].push((u, (-a, -b)));
        }
        let mut potential: Vec<Option<(i64, i64)>> = vec![None; n];
        let mut components = 0;
        let mut cycles: Vec<Vec<BigInt>> = Vec::new();
        for start in 0..n {
            if potential[start].is_some() {
                continue;
            }
            components += 1;
            potential[start] = Some((0, 0));
            let mut queue = std::collections::VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                let pu = potential[u].expect("visited");
                for &(v, (a, b)) in &adj[u] {
                    let target = (pu.0 + a, pu.1 + b);
                    match potential[v] {
                        None => {
                            potential[v] = Some(target);
                            queue.push_back(v);
                        }
                        Some(pv) => {
                            let c = (target.0 - pv.0, target.1 - pv.1);
                            if c != (0, 0) && components == 1 {
                                cycles.push(vec![BigInt::from(c.0), BigInt::from(c.1)]);
                            }
                        }
                    }
                }
            }
        }
        if components > 1 {
            return Ok((
                components,
                false,
                format!("complement splits into {components} regions per period cell"),
            ));
        }
        let generates = match hermite_normal_form(&cycles, 2) {
            Ok(h) => h.iter().enumerate().all(|(i, c)| c[i].abs().is_one()),
            Err(_) => false,
        };
        if generates {
            Ok((1, true, "complement is path-connected".into()))
        } else {
            Ok((
                1,
                false,
                "complement is connected on the torus but its lift to the plane is not".into(),
            ))
        }
    }
}

fn y_at<T: ExactScalar>(s: &Segment<T>, x: &T) -> Result<T> {
    let dx = s.end[0].clone() - &s.start[0];
    let dy = s.end[1].clone() - &s.start[1];
    let t = divide(&(x.clone() - &s.start[0]), &dx)?;
    Ok(s.start[1].clone() + &dy.try_mul(&t)?)
}

/// Abscissa where two non-vertical segments cross, if they do.
fn segment_crossing_x<T: ExactScalar>(p: &Segment<T>, q: &Segment<T>) -> Result<Option<T>> {
    let line = |s: &Segment<T>| -> Result<(Vec<T>, T)> {
        let l = supporting_line(s)?;
        Ok((l.normal, l.offset))
    };
    let (np, cp) = line(p)?;
    let (nq, cq) = line(q)?;
    let fp = Facet {
        normal: np,
        offset: cp.clone(),
    };
    let fq = Facet {
        normal: nq,
        offset: cq.clone(),
    };
    Ok(crossing(&fp, &cp, p, &fq, &cq, q)?.map(|v| v[0].clone()))
}
