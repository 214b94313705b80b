//! Seeded exact sampling: every coordinate is a dyadic rational `u / 2⁶⁴`.

use num_bigint::BigInt;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::scalar::{ExactScalar, Rational};

/// Where sample points are drawn from.
#[derive(Debug, Clone, PartialEq)]
pub enum SampleRegion<T> {
    /// The parallelepiped `B·[0,1)ᵈ` of the relevant period lattice.
    FundamentalDomain,
    /// The box `[lower, upper)`.
    Box { lower: Vec<T>, upper: Vec<T> },
}

/// Deterministic stream of exact uniform points.
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// A uniform dyadic rational in `[0, 1)`.
    pub fn unit(&mut self) -> Rational {
        Rational::new(BigInt::from(self.rng.next_u64()), BigInt::from(1u8) << 64u32)
    }

    pub fn unit_vector(&mut self, d: usize) -> Vec<Rational> {
        (0..d).map(|_| self.unit()).collect()
    }

    /// A point of the region; `lattice` supplies the fundamental domain.
    pub fn point<T: ExactScalar>(&mut self, region: &SampleRegion<T>, lattice: Option<&Lattice<T>>) -> Result<Vec<T>> {
        match region {
            SampleRegion::FundamentalDomain => {
                let l = lattice
                    .ok_or_else(|| Error::ModeUnavailable("no lattice to sample a fundamental domain of".into()))?;
                let u = self.unit_vector(l.dim());
                let mut x = vec![T::zero(); l.dim()];
                for (col, uj) in l.basis().iter().zip(&u) {
                    for (xi, c) in x.iter_mut().zip(col) {
                        *xi = xi.clone() + &c.scale(uj);
                    }
                }
                Ok(x)
            }
            SampleRegion::Box { lower, upper } => Ok(lower
                .iter()
                .zip(upper)
                .map(|(lo, hi)| {
                    let u = self.unit();
                    lo.clone() + &(hi.clone() - lo).scale(&u)
                })
                .collect()),
        }
    }

    pub fn points<T: ExactScalar>(
        &mut self,
        n: usize,
        region: &SampleRegion<T>,
        lattice: Option<&Lattice<T>>,
    ) -> Result<Vec<Vec<T>>> {
        (0..n).map(|_| self.point(region, lattice)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{parse_rational, Scalar};

    #[test]
    fn reproducible_and_in_range() {
        let mut a = Sampler::new(7);
        let mut b = Sampler::new(7);
        let l = Lattice::<Scalar>::integer(2);
        let pa = a.points(20, &SampleRegion::FundamentalDomain, Some(&l)).unwrap();
        let pb = b.points(20, &SampleRegion::FundamentalDomain, Some(&l)).unwrap();
        assert_eq!(pa, pb);
        let f = l.fundamental_domain().unwrap();
        for p in &pa {
            assert!(f.contains(p).unwrap());
        }
        let q = |t: &str| parse_rational(t).unwrap();
        let region = SampleRegion::Box {
            lower: vec![q("-3")],
            upper: vec![q("-2")],
        };
        for p in Sampler::new(1).points::<Rational>(50, &region, None).unwrap() {
            assert!(p[0] >= q("-3") && p[0] < q("-2"));
        }
    }
}
