//! Convex polytopes in H-representation and their half-open counterparts.
//!
//! A polytope is `{x : ⟨nᵢ, x⟩ ≤ cᵢ}`, bounded and full-dimensional. Given a
//! probe direction `h` with `⟨nᵢ, h⟩ ≠ 0` for every facet, the half-open
//! polytope `P^h` keeps a boundary point exactly when every facet it lies on
//! has `⟨nᵢ, h⟩ < 0`, i.e. when a short step along `h` enters the interior.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{rank_of, solve};
use crate::scalar::{dot, dot_int, try_sort_by, ExactScalar, Rational, Sign};
use crate::simplex::feasible_point;

/// Upper bound on the number of facet subsets tried during vertex enumeration.
const MAX_VERTEX_CANDIDATES: u64 = 2_000_000;

/// The closed half-space `⟨normal, x⟩ ≤ offset`.
#[derive(Debug, Clone, PartialEq)]
pub struct Facet<T> {
    pub normal: Vec<T>,
    pub offset: T,
}

impl<T: ExactScalar> Facet<T> {
    /// Signed slack `⟨normal, x⟩ − offset`.
    pub fn excess(&self, x: &[T]) -> Result<T> {
        Ok(dot(&self.normal, x)? - &self.offset)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Polytope<T> {
    dim: usize,
    facets: Vec<Facet<T>>,
    vertices: Vec<Vec<T>>,
    lower: Vec<T>,
    upper: Vec<T>,
}

impl<T: ExactScalar> Polytope<T> {
    /// Builds a polytope from inequalities `⟨n, x⟩ ≤ c`.
    ///
    /// Normals are rescaled so their first nonzero entry is ±1, duplicates and
    /// redundant inequalities are dropped, and the result must be bounded and
    /// full-dimensional.
    pub fn from_facets(dim: usize, facets: Vec<Facet<T>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidPolytope("dimension must be positive".into()));
        }
        let mut normalized: Vec<Facet<T>> = Vec::with_capacity(facets.len());
        for f in facets {
            if f.normal.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: f.normal.len(),
                });
            }
            let Some(lead) = f.normal.iter().find(|x| !x.is_zero()) else {
                if f.offset.sign()? == Sign::Negative {
                    return Err(Error::InvalidPolytope("infeasible inequality 0 ≤ c < 0".into()));
                }
                continue;
            };
            let scale = match lead.sign()? {
                Sign::Negative => -lead.clone(),
                _ => lead.clone(),
            };
            let facet = Facet {
                normal: f.normal.iter().map(|x| x.try_div(&scale)).collect::<Result<_>>()?,
                offset: f.offset.try_div(&scale)?,
            };
            if !normalized.contains(&facet) {
                normalized.push(facet);
            }
        }
        check_bounded(dim, &normalized)?;

        let vertices = enumerate_vertices(dim, &normalized)?;
        if vertices.is_empty() {
            return Err(Error::InvalidPolytope("empty polytope".into()));
        }
        // Keep only genuine facets: those whose vertices span a hyperplane.
        let mut kept = Vec::with_capacity(normalized.len());
        for f in normalized {
            let on: Vec<&Vec<T>> = vertices
                .iter()
                .filter(|v| matches!(f.excess(v), Ok(e) if e.is_zero()))
                .collect();
            if on.len() >= dim {
                let diffs: Vec<Vec<T>> = on[1..]
                    .iter()
                    .map(|v| v.iter().zip(on[0]).map(|(a, b)| a.clone() - b).collect())
                    .collect();
                if rank_of(&diffs)? + 1 >= dim {
                    kept.push(f);
                }
            }
        }

        let centroid = centroid(&vertices);
        for f in &kept {
            if f.excess(&centroid)?.sign()? != Sign::Negative {
                return Err(Error::InvalidPolytope("polytope is not full-dimensional".into()));
            }
        }
        let (lower, upper) = bounding_box(dim, &vertices)?;
        Ok(Polytope {
            dim,
            facets: kept,
            vertices,
            lower,
            upper,
        })
    }

    /// The axis-aligned box `[lower, upper]`.
    pub fn from_box(lower: &[T], upper: &[T]) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                found: upper.len(),
            });
        }
        let dim = lower.len();
        let mut facets = Vec::with_capacity(2 * dim);
        for k in 0..dim {
            let unit = |s: i64| -> Vec<T> { (0..dim).map(|j| T::from_i64(if j == k { s } else { 0 })).collect() };
            facets.push(Facet {
                normal: unit(-1),
                offset: -lower[k].clone(),
            });
            facets.push(Facet {
                normal: unit(1),
                offset: upper[k].clone(),
            });
        }
        Polytope::from_facets(dim, facets)
    }

    /// Convex hull of a point set, for `d ≤ 2` or when the points form an
    /// axis-aligned box (corners present, nothing outside).
    pub fn from_vertices(points: &[Vec<T>]) -> Result<Self> {
        let dim = points
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::InvalidPolytope("no vertices".into()))?;
        if let Some(p) = points.iter().find(|p| p.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: p.len(),
            });
        }
        match dim {
            0 => Err(Error::InvalidPolytope("dimension must be positive".into())),
            1 => {
                let mut xs: Vec<T> = points.iter().map(|p| p[0].clone()).collect();
                crate::scalar::sort_dedup(&mut xs)?;
                let lo = xs.first().expect("nonempty").clone();
                let hi = xs.last().expect("nonempty").clone();
                Polytope::from_box(&[lo], &[hi])
            }
            2 => {
                let hull = convex_hull_2d(points)?;
                if hull.len() < 3 {
                    return Err(Error::InvalidPolytope("points do not span a polygon".into()));
                }
                let mut facets = Vec::with_capacity(hull.len());
                for i in 0..hull.len() {
                    let p = &hull[i];
                    let q = &hull[(i + 1) % hull.len()];
                    // Counter-clockwise hull: the outward normal of p→q is (dy, −dx).
                    let normal = vec![q[1].clone() - &p[1], p[0].clone() - &q[0]];
                    let offset = dot(&normal, p)?;
                    facets.push(Facet { normal, offset });
                }
                Polytope::from_facets(2, facets)
            }
            _ => {
                let (lower, upper) = bounding_box(dim, points)?;
                if dim > 20 {
                    return Err(Error::DimensionUnsupported(format!("box detection in dimension {dim}")));
                }
                for mask in 0u32..(1u32 << dim) {
                    let corner: Vec<T> = (0..dim)
                        .map(|k| {
                            if mask >> k & 1 == 1 {
                                upper[k].clone()
                            } else {
                                lower[k].clone()
                            }
                        })
                        .collect();
                    if !points.contains(&corner) {
                        return Err(Error::DimensionUnsupported(format!(
                            "convex hull of a general vertex set in dimension {dim}; \
                             supply facets instead"
                        )));
                    }
                }
                Polytope::from_box(&lower, &upper)
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn facets(&self) -> &[Facet<T>] {
        &self.facets
    }

    pub fn vertices(&self) -> &[Vec<T>] {
        &self.vertices
    }

    /// Coordinate-wise minimum and maximum over the vertices.
    pub fn bounding_box(&self) -> (&[T], &[T]) {
        (&self.lower, &self.upper)
    }

    pub fn contains_closed(&self, v: &[T]) -> Result<bool> {
        self.check_dim(v)?;
        for f in &self.facets {
            if f.excess(v)?.sign()? == Sign::Positive {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Membership with per-facet strictness (`strict[i]` makes facet `i` open).
    pub(crate) fn contains_with(&self, v: &[T], strict: &[bool]) -> Result<bool> {
        for (f, &open) in self.facets.iter().zip(strict) {
            match f.excess(v)?.sign()? {
                Sign::Positive => return Ok(false),
                Sign::Zero if open => return Ok(false),
                _ => {}
            }
        }
        Ok(true)
    }

    /// `P + t`.
    pub fn translate(&self, t: &[T]) -> Result<Self> {
        self.check_dim(t)?;
        let facets = self
            .facets
            .iter()
            .map(|f| {
                Ok(Facet {
                    normal: f.normal.clone(),
                    offset: f.offset.clone() + &dot(&f.normal, t)?,
                })
            })
            .collect::<Result<_>>()?;
        let shift = |v: &Vec<T>| v.iter().zip(t).map(|(a, b)| a.clone() + b).collect();
        Ok(Polytope {
            dim: self.dim,
            facets,
            vertices: self.vertices.iter().map(shift).collect(),
            lower: shift(&self.lower),
            upper: shift(&self.upper),
        })
    }

    /// The same polytope expressed in the coordinates `x = basis·y`, where the
    /// rows of `basis` are given and `inverse` is its inverse. Facet order is
    /// preserved, so per-facet data (such as strictness) carries over.
    pub(crate) fn in_coordinates(&self, basis: &[Vec<T>], inverse: &[Vec<T>]) -> Result<Self> {
        let d = self.dim;
        let facets = self
            .facets
            .iter()
            .map(|f| {
                // ⟨n, B y⟩ = ⟨Bᵀ n, y⟩
                let normal = (0..d)
                    .map(|j| {
                        let column: Vec<T> = basis.iter().map(|row| row[j].clone()).collect();
                        dot(&f.normal, &column)
                    })
                    .collect::<Result<Vec<T>>>()?;
                Ok(Facet {
                    normal,
                    offset: f.offset.clone(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let vertices = self
            .vertices
            .iter()
            .map(|v| crate::linalg::mat_vec(inverse, v))
            .collect::<Result<Vec<_>>>()?;
        let (lower, upper) = bounding_box(d, &vertices)?;
        Ok(Polytope {
            dim: d,
            facets,
            vertices,
            lower,
            upper,
        })
    }

    /// Vertices lying on facet `i`.
    pub fn facet_vertices(&self, i: usize) -> Result<Vec<&Vec<T>>> {
        let f = &self.facets[i];
        let mut on = Vec::new();
        for v in &self.vertices {
            if f.excess(v)?.is_zero() {
                on.push(v);
            }
        }
        Ok(on)
    }

    /// First integer direction, in a fixed enumeration order, that is not
    /// parallel to any facet.
    ///
    /// Candidates are visited shell by shell in max-norm; within a shell they
    /// are compared lexicographically with each entry ranked
    /// `1 < 2 < … < 0 < −1 < −2 < …`, so `(1, …, 1)` is tried before any
    /// vector containing a zero or a negative entry.
    pub fn find_probe_direction(&self) -> Result<ProbeDirection> {
        for radius in 1i64.. {
            for candidate in shell_order(self.dim, radius) {
                let mut ok = true;
                for f in &self.facets {
                    if dot_int(&f.normal, &candidate).is_zero() {
                        ok = false;
                        break;
                    }
                }
                if ok {
                    return Ok(ProbeDirection(candidate));
                }
            }
        }
        unreachable!("a valid probe direction always exists")
    }

    fn check_dim(&self, v: &[T]) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: v.len(),
            });
        }
        Ok(())
    }
}

/// An integer direction used to decide boundary membership.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProbeDirection(pub Vec<i64>);

impl ProbeDirection {
    pub fn new(h: Vec<i64>) -> Self {
        ProbeDirection(h)
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn negated(&self) -> Self {
        ProbeDirection(self.0.iter().map(|x| -x).collect())
    }
}

impl fmt::Display for ProbeDirection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Boundary rule used when counting points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Boundary {
    Closed,
    HalfOpen(ProbeDirection),
}

impl Boundary {
    /// Which facets of `p` are open under this rule.
    pub fn strictness<T: ExactScalar>(&self, p: &Polytope<T>) -> Result<Vec<bool>> {
        match self {
            Boundary::Closed => Ok(vec![false; p.facets().len()]),
            Boundary::HalfOpen(h) => {
                let half = HalfOpenPolytope::new(p.clone(), h.clone())?;
                Ok(half.strict)
            }
        }
    }
}

/// `P^h`: the polytope together with a probe direction.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfOpenPolytope<T> {
    base: Polytope<T>,
    probe: ProbeDirection,
    strict: Vec<bool>,
}

impl<T: ExactScalar> HalfOpenPolytope<T> {
    /// Fails when the probe is parallel to a facet.
    pub fn new(base: Polytope<T>, probe: ProbeDirection) -> Result<Self> {
        if probe.0.len() != base.dim() {
            return Err(Error::DimensionMismatch {
                expected: base.dim(),
                found: probe.0.len(),
            });
        }
        let mut strict = Vec::with_capacity(base.facets().len());
        for f in base.facets() {
            match dot_int(&f.normal, &probe.0).sign()? {
                Sign::Zero => return Err(Error::InvalidInput(format!("probe {probe} is parallel to a facet"))),
                s => strict.push(s == Sign::Positive),
            }
        }
        Ok(HalfOpenPolytope { base, probe, strict })
    }

    /// With a probe chosen by [`Polytope::find_probe_direction`].
    pub fn with_default_probe(base: Polytope<T>) -> Result<Self> {
        let probe = base.find_probe_direction()?;
        HalfOpenPolytope::new(base, probe)
    }

    pub fn base(&self) -> &Polytope<T> {
        &self.base
    }

    pub fn probe(&self) -> &ProbeDirection {
        &self.probe
    }

    /// Per-facet openness: facet `i` excludes its points iff `⟨nᵢ, h⟩ > 0`.
    pub fn open_facets(&self) -> &[bool] {
        &self.strict
    }

    pub fn contains(&self, v: &[T]) -> Result<bool> {
        self.base.check_dim(v)?;
        self.base.contains_with(v, &self.strict)
    }
}

fn centroid<T: ExactScalar>(points: &[Vec<T>]) -> Vec<T> {
    let n = Rational::from_integer(points.len().into());
    let dim = points[0].len();
    (0..dim)
        .map(|k| points.iter().fold(T::zero(), |acc, p| acc + &p[k]).scale(&n.recip()))
        .collect()
}

fn bounding_box<T: ExactScalar>(dim: usize, points: &[Vec<T>]) -> Result<(Vec<T>, Vec<T>)> {
    let mut lower = points[0].clone();
    let mut upper = points[0].clone();
    for p in &points[1..] {
        for k in 0..dim {
            if p[k].try_cmp(&lower[k])?.is_lt() {
                lower[k] = p[k].clone();
            }
            if p[k].try_cmp(&upper[k])?.is_gt() {
                upper[k] = p[k].clone();
            }
        }
    }
    Ok((lower, upper))
}

/// Bounded iff every ±eₖ is a nonnegative combination of the normals.
fn check_bounded<T: ExactScalar>(dim: usize, facets: &[Facet<T>]) -> Result<()> {
    if facets.is_empty() {
        return Err(Error::InvalidPolytope("unbounded: no facets".into()));
    }
    let transposed: Vec<Vec<T>> = (0..dim)
        .map(|k| facets.iter().map(|f| f.normal[k].clone()).collect())
        .collect();
    for k in 0..dim {
        for s in [1i64, -1] {
            let target: Vec<T> = (0..dim).map(|j| T::from_i64(if j == k { s } else { 0 })).collect();
            if feasible_point(&transposed, &target)?.is_none() {
                return Err(Error::InvalidPolytope(format!(
                    "unbounded in direction {}e{}",
                    if s > 0 { "+" } else { "-" },
                    k + 1
                )));
            }
        }
    }
    Ok(())
}

fn enumerate_vertices<T: ExactScalar>(dim: usize, facets: &[Facet<T>]) -> Result<Vec<Vec<T>>> {
    let count = binomial(facets.len() as u64, dim as u64);
    if count > MAX_VERTEX_CANDIDATES {
        return Err(Error::DimensionUnsupported(format!(
            "vertex enumeration over {count} facet subsets"
        )));
    }
    let mut vertices: Vec<Vec<T>> = Vec::new();
    let mut subset: Vec<usize> = (0..dim).collect();
    if facets.len() < dim {
        return Ok(vertices);
    }
    loop {
        let a: Vec<Vec<T>> = subset.iter().map(|&i| facets[i].normal.clone()).collect();
        let b: Vec<T> = subset.iter().map(|&i| facets[i].offset.clone()).collect();
        if let Ok(x) = solve(&a, &b) {
            let mut feasible = true;
            for f in facets {
                if f.excess(&x)?.sign()? == Sign::Positive {
                    feasible = false;
                    break;
                }
            }
            if feasible && !vertices.contains(&x) {
                vertices.push(x);
            }
        }
        // Next combination in lexicographic order.
        let n = facets.len();
        let mut i = dim;
        loop {
            if i == 0 {
                try_sort_by(&mut vertices, |a, b| lex_cmp(a, b))?;
                return Ok(vertices);
            }
            i -= 1;
            if subset[i] < n - dim + i {
                subset[i] += 1;
                for j in i + 1..dim {
                    subset[j] = subset[j - 1] + 1;
                }
                break;
            }
        }
    }
}

pub(crate) fn lex_cmp<T: ExactScalar>(a: &[T], b: &[T]) -> Result<std::cmp::Ordering> {
    for (x, y) in a.iter().zip(b) {
        let o = x.try_cmp(y)?;
        if o.is_ne() {
            return Ok(o);
        }
    }
    Ok(a.len().cmp(&b.len()))
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let mut r: u64 = 1;
    for i in 0..k.min(n - k) {
        r = r.saturating_mul(n - i) / (i + 1);
    }
    r
}

/// Andrew's monotone chain, counter-clockwise, collinear points dropped.
fn convex_hull_2d<T: ExactScalar>(points: &[Vec<T>]) -> Result<Vec<Vec<T>>> {
    let mut pts = points.to_vec();
    try_sort_by(&mut pts, |a, b| lex_cmp(a, b))?;
    pts.dedup();
    if pts.len() < 3 {
        return Ok(pts);
    }
    let cross = |o: &Vec<T>, a: &Vec<T>, b: &Vec<T>| -> Result<Sign> {
        let ax = a[0].clone() - &o[0];
        let ay = a[1].clone() - &o[1];
        let bx = b[0].clone() - &o[0];
        let by = b[1].clone() - &o[1];
        (ax.try_mul(&by)? - ay.try_mul(&bx)?).sign()
    };
    let mut lower: Vec<Vec<T>> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p)? != Sign::Positive {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Vec<T>> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p)? != Sign::Positive {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    Ok(lower)
}

/// All integer vectors of max-norm exactly `radius`, in probe order.
pub(crate) fn shell_order(dim: usize, radius: i64) -> Vec<Vec<i64>> {
    let rank = |x: i64| -> (bool, i64) { (x <= 0, x.abs()) };
    let mut out = Vec::new();
    let mut v = vec![-radius; dim];
    loop {
        if v.iter().any(|x| x.abs() == radius) {
            out.push(v.clone());
        }
        let mut k = 0;
        loop {
            if k == dim {
                out.sort_by(|a, b| a.iter().map(|&x| rank(x)).cmp(b.iter().map(|&x| rank(x))));
                return out;
            }
            if v[k] < radius {
                v[k] += 1;
                break;
            }
            v[k] = -radius;
            k += 1;
        }
    }
}
