//! The enumerators `L(v) = #(Λ ∩ (−P + v))` and `L^h(v) = #(Λ ∩ (−P^h + v))`.
//!
//! `λ ∈ −P + v` is tested as `v − λ ∈ P`, so the reflected polytope is never
//! built.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{check_same_dim, count_in_region, Coset, QuasiPeriodicSet, Region, WindowMultiset};
use crate::polytope::{Boundary, HalfOpenPolytope, Polytope, ProbeDirection};
use crate::scalar::{ExactScalar, Rational, Sign};

/// The translation multiset `Λ`.
#[derive(Debug, Clone, PartialEq)]
pub enum Translations<T> {
    Periodic(QuasiPeriodicSet<T>),
    Window(WindowMultiset<T>),
}

impl<T: ExactScalar> Translations<T> {
    pub fn dim(&self) -> Option<usize> {
        match self {
            Translations::Periodic(q) => Some(q.dim()),
            Translations::Window(w) => w.points.first().map(|p| p.0.len()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnumeratorContext<T> {
    shape: HalfOpenPolytope<T>,
    translations: Translations<T>,
}

impl<T: ExactScalar> EnumeratorContext<T> {
    /// Fails when the probe is parallel to a facet.
    pub fn new(polytope: Polytope<T>, probe: ProbeDirection, translations: Translations<T>) -> Result<Self> {
        if let Some(d) = translations.dim() {
            check_same_dim(polytope.dim(), d)?;
        }
        Ok(EnumeratorContext {
            shape: HalfOpenPolytope::new(polytope, probe)?,
            translations,
        })
    }

    pub fn with_default_probe(polytope: Polytope<T>, translations: Translations<T>) -> Result<Self> {
        let probe = polytope.find_probe_direction()?;
        Self::new(polytope, probe, translations)
    }

    pub fn polytope(&self) -> &Polytope<T> {
        self.shape.base()
    }

    pub fn probe(&self) -> &ProbeDirection {
        self.shape.probe()
    }

    pub fn translations(&self) -> &Translations<T> {
        &self.translations
    }

    /// `L^h(v)`: translation points `λ` (with multiplicity) with `v − λ ∈ P^h`.
    pub fn l_half_open(&self, v: &[T]) -> Result<u64> {
        self.count(v, self.shape.open_facets())
    }

    /// `L(v)`: translation points `λ` with `v − λ` in the closed polytope.
    pub fn l_closed(&self, v: &[T]) -> Result<u64> {
        self.count(v, &vec![false; self.polytope().facets().len()])
    }

    pub fn evaluate(&self, v: &[T], boundary_open: bool) -> Result<u64> {
        if boundary_open {
            self.l_half_open(v)
        } else {
            self.l_closed(v)
        }
    }

    /// Evaluates many points in parallel; results follow input order.
    pub fn evaluate_many(&self, points: &[Vec<T>], boundary_open: bool) -> Result<Vec<u64>> {
        points.par_iter().map(|v| self.evaluate(v, boundary_open)).collect()
    }

    fn count(&self, v: &[T], strict: &[bool]) -> Result<u64> {
        let p = self.polytope();
        check_same_dim(p.dim(), v.len())?;
        match &self.translations {
            Translations::Periodic(q) => {
                let region = Region::reflected(p, strict.to_vec(), v)?;
                let mut total = 0;
                for c in q.cosets() {
                    total += count_in_region(c, &region)?;
                }
                Ok(total)
            }
            Translations::Window(w) => {
                let mut total = 0;
                for (lambda, m) in &w.points {
                    let rel: Vec<T> = v.iter().zip(lambda).map(|(a, b)| a.clone() - b).collect();
                    if p.contains_with(&rel, strict)? {
                        total += m;
                    }
                }
                Ok(total)
            }
        }
    }

    /// A radius `r` such that `L` (closed) is constant on the max-norm ball of
    /// radius `r` around `v`, or `None` when `v` lies on a translated boundary.
    ///
    /// Only periodic translation sets are supported.
    pub fn constancy_radius(&self, v: &[T]) -> Result<Option<T>> {
        let Translations::Periodic(q) = &self.translations else {
            return Err(Error::InvalidInput("constancy radius needs a periodic set".into()));
        };
        let p = self.polytope();
        let (lower, upper) = p.bounding_box();
        let one = T::from_i64(1);
        let lo: Vec<T> = v.iter().zip(upper).map(|(a, b)| a.clone() - b - &one).collect();
        let hi: Vec<T> = v.iter().zip(lower).map(|(a, b)| a.clone() - b + &one).collect();
        let norms: Vec<Rational> = p
            .facets()
            .iter()
            .map(|f| {
                let mut s = Rational::from_integer(0.into());
                for x in &f.normal {
                    let (a, b) = x.to_interval(&Rational::new(1.into(), 1024.into()))?;
                    // The normals are rescaled so ‖n‖₁ ≥ 1; an upper bound is enough.
                    s += if b > -a.clone() { b } else { -a };
                }
                Ok(s)
            })
            .collect::<Result<_>>()?;
        let mut radius = one.clone();
        for c in q.cosets() {
            for (lambda, _) in crate::lattice::enumerate_in_box(c, &lo, &hi)?.points {
                let rel: Vec<T> = v.iter().zip(&lambda).map(|(a, b)| a.clone() - b).collect();
                let mut inside_gap: Option<T> = None;
                let mut outside_gap: Option<T> = None;
                for (f, norm) in p.facets().iter().zip(&norms) {
                    let e = f.excess(&rel)?;
                    let dist = match e.sign()? {
                        Sign::Zero => return Ok(None),
                        Sign::Negative => -e,
                        Sign::Positive => e,
                    }
                    .scale(&norm.recip());
                    if f.excess(&rel)?.sign()? == Sign::Positive {
                        if outside_gap
                            .as_ref()
                            .map_or(Ok(true), |g| dist.try_cmp(g).map(|o| o.is_gt()))?
                        {
                            outside_gap = Some(dist);
                        }
                    } else if inside_gap
                        .as_ref()
                        .map_or(Ok(true), |g| dist.try_cmp(g).map(|o| o.is_lt()))?
                    {
                        inside_gap = Some(dist);
                    }
                }
                let gap = outside_gap.or(inside_gap).expect("polytope has facets");
                if gap.try_cmp(&radius)?.is_lt() {
                    radius = gap;
                }
            }
        }
        Ok(Some(radius))
    }
}

/// `Σ_λ mult(λ)·1_{P+λ}(v)` over a finite window, evaluated by translating
/// the polytope.
pub fn coverage_count<T: ExactScalar>(
    p: &Polytope<T>,
    boundary: &Boundary,
    window: &WindowMultiset<T>,
    v: &[T],
) -> Result<u64> {
    let strict = boundary.strictness(p)?;
    let mut total = 0;
    for (lambda, m) in &window.points {
        let moved = p.translate(lambda)?;
        if moved.contains_with(v, &strict)? {
            total += m;
        }
    }
    Ok(total)
}

/// Coverage count of a single coset, for callers holding only a coset.
pub fn coset_count<T: ExactScalar>(p: &Polytope<T>, strict: &[bool], coset: &Coset<T>, v: &[T]) -> Result<u64> {
    let region = Region::reflected(p, strict.to_vec(), v)?;
    count_in_region(coset, &region)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Lattice;
    use crate::scalar::Scalar;

    fn s(t: &str) -> Scalar {
        Scalar::parse(t).unwrap()
    }

    fn sv(xs: &[&str]) -> Vec<Scalar> {
        xs.iter().map(|t| s(t)).collect()
    }

    fn rectangle() -> Polytope<Scalar> {
        Polytope::from_box(&sv(&["0", "0"]), &sv(&["1", "1/2"])).unwrap()
    }

    fn square() -> Polytope<Scalar> {
        Polytope::from_box(&sv(&["0", "0"]), &sv(&["1", "1"])).unwrap()
    }

    fn coset(t: &[&str]) -> Coset<Scalar> {
        Coset::new(Lattice::integer(2), sv(t), 1).unwrap()
    }

    fn ex51() -> QuasiPeriodicSet<Scalar> {
        QuasiPeriodicSet::new(vec![coset(&["0", "0"]), coset(&["1/2*sqrt:2", "1/2"])]).unwrap()
    }

    fn h11() -> ProbeDirection {
        ProbeDirection(vec![1, 1])
    }

    #[test]
    fn example_rectangle_counts() {
        let ctx = EnumeratorContext::new(rectangle(), h11(), Translations::Periodic(ex51())).unwrap();
        assert_eq!(ctx.l_half_open(&sv(&["1/4", "1/4"])).unwrap(), 1);
        let only = QuasiPeriodicSet::single(coset(&["0", "0"]));
        let ctx1 = EnumeratorContext::new(rectangle(), h11(), Translations::Periodic(only)).unwrap();
        assert_eq!(ctx1.l_half_open(&sv(&["1/4", "1/4"])).unwrap(), 1);
        assert_eq!(ctx1.l_half_open(&sv(&["1/4", "3/4"])).unwrap(), 0);
        // Closed count at (0, 1/2): λ ∈ {(0,0), (−1,0)} by a box scan below.
        let v = sv(&["0", "1/2"]);
        let mut brute = 0;
        for i in -3..=3i64 {
            for j in -3..=3i64 {
                let rel = vec![v[0].clone() - Scalar::from_i64(i), v[1].clone() - Scalar::from_i64(j)];
                if rectangle().contains_closed(&rel).unwrap() {
                    brute += 1;
                }
            }
        }
        assert_eq!(brute, 2);
        assert_eq!(ctx1.l_closed(&v).unwrap(), 2);
    }

    #[test]
    fn unit_square_counts() {
        let ctx = EnumeratorContext::new(
            square(),
            h11(),
            Translations::Periodic(QuasiPeriodicSet::single(coset(&["0", "0"]))),
        )
        .unwrap();
        for v in [["0", "0"], ["1/3", "sqrt:2"], ["-5/2", "7"]] {
            assert_eq!(ctx.l_half_open(&sv(&v)).unwrap(), 1);
        }
        assert_eq!(ctx.l_closed(&sv(&["0", "0"])).unwrap(), 4);
        assert_eq!(ctx.l_closed(&sv(&["1/2", "1/2"])).unwrap(), 1);
    }

    #[test]
    fn coverage_examples() {
        let half = Boundary::HalfOpen(h11());
        let w = WindowMultiset::new(vec![(sv(&["0", "0"]), 1), (sv(&["-1", "0"]), 1)]).unwrap();
        assert_eq!(coverage_count(&square(), &half, &w, &sv(&["1/2", "1/2"])).unwrap(), 1);
        let w2 = WindowMultiset::new(vec![(sv(&["0", "0"]), 1), (sv(&["1", "0"]), 1)]).unwrap();
        assert_eq!(
            coverage_count(&square(), &Boundary::Closed, &w2, &sv(&["1", "0"])).unwrap(),
            2
        );
        let window = WindowMultiset::from_set_in_box(&ex51(), &sv(&["-3", "-3"]), &sv(&["3", "3"])).unwrap();
        assert_eq!(
            coverage_count(&rectangle(), &half, &window, &sv(&["1/4", "1/4"])).unwrap(),
            1
        );
        let ctx = EnumeratorContext::new(rectangle(), h11(), Translations::Window(window)).unwrap();
        assert_eq!(ctx.l_half_open(&sv(&["1/4", "1/4"])).unwrap(), 1);
    }

    #[test]
    fn constancy_radius_is_safe() {
        let ctx = EnumeratorContext::new(rectangle(), h11(), Translations::Periodic(ex51())).unwrap();
        assert!(ctx.constancy_radius(&sv(&["0", "1/4"])).unwrap().is_none());
        let v = sv(&["1/4", "1/8"]);
        let r = ctx.constancy_radius(&v).unwrap().unwrap();
        assert_eq!(r, s("1/8"));
        let base = ctx.l_closed(&v).unwrap();
        for (dx, dy) in [("1/9", "0"), ("-1/9", "1/9"), ("0", "-1/9")] {
            let w = vec![v[0].clone() + &s(dx), v[1].clone() + &s(dy)];
            assert_eq!(ctx.l_closed(&w).unwrap(), base);
        }
    }
}
