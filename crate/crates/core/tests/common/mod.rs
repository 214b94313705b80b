#![allow(dead_code)]

use multitile_core::{ExactScalar, Rational, Scalar};
use num_bigint::BigInt;

pub fn s(t: &str) -> Scalar {
    Scalar::parse(t).unwrap()
}

pub fn sv(xs: &[&str]) -> Vec<Scalar> {
    xs.iter().map(|t| s(t)).collect()
}

pub fn q(t: &str) -> Rational {
    multitile_core::scalar::parse_rational(t).unwrap()
}

/// `#{k ∈ Z : lo ≤ x − k·step < hi}` for `step > 0`, by floors alone.
fn half_open_hits(x: &Scalar, lo: &Scalar, hi: &Scalar, step: &Rational) -> BigInt {
    let inv = step.recip();
    let a = (x.clone() - lo).scale(&inv);
    let b = (x.clone() - hi).scale(&inv);
    ExactScalar::floor(&a).unwrap() - ExactScalar::floor(&b).unwrap()
}

/// `#{k ∈ Z : lo ≤ x − k·step ≤ hi}`.
fn closed_hits(x: &Scalar, lo: &Scalar, hi: &Scalar, step: &Rational) -> BigInt {
    let inv = step.recip();
    let a = (x.clone() - lo).scale(&inv);
    let b = (x.clone() - hi).scale(&inv);
    let n: BigInt = ExactScalar::floor(&a).unwrap() - ExactScalar::ceil(&b).unwrap() + 1;
    n.max(BigInt::from(0))
}

/// Points `λ ∈ t + step·Zᵈ` with `v − λ ∈ [lo, hi)` coordinatewise, which is
/// the half-open box for any probe with positive entries.
pub fn box_count_half_open(lo: &[Scalar], hi: &[Scalar], t: &[Scalar], step: &Rational, v: &[Scalar]) -> u64 {
    let mut n = BigInt::from(1);
    for i in 0..v.len() {
        n *= half_open_hits(&(v[i].clone() - &t[i]), &lo[i], &hi[i], step);
    }
    u64::try_from(n).unwrap()
}

pub fn box_count_closed(lo: &[Scalar], hi: &[Scalar], t: &[Scalar], step: &Rational, v: &[Scalar]) -> u64 {
    let mut n = BigInt::from(1);
    for i in 0..v.len() {
        n *= closed_hits(&(v[i].clone() - &t[i]), &lo[i], &hi[i], step);
    }
    u64::try_from(n).unwrap()
}
