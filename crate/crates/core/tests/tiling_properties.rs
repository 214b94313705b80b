mod common;

use common::{box_count_half_open, q, sv};
use multitile_core::enumerator::coverage_count;
use multitile_core::lattice::enumerate_in_box;
use multitile_core::linalg::rank;
use multitile_core::refine::{refinement_pipeline, weyl_search};
use multitile_core::sampling::Sampler;
use multitile_core::synth::{collect_difference_vectors, synthesize, SynthesisConfig};
use multitile_core::verify::{verify_constant_multiplicity, verify_generic_multiplicity};
use multitile_core::{
    Boundary, Coset, CosetFamily, EnumeratorContext, Lattice, Polytope, ProbeDirection, QuasiPeriodicSet, Rational,
    Scalar, Synthesis, Translations, Verification, VerificationMode, WindowMultiset,
};
use proptest::prelude::*;

fn small_rational(den: i64) -> impl Strategy<Value = Scalar> {
    (0..den).prop_map(move |n| Scalar::from_ratio(n, den))
}

/// A box `[0,w) × [0,h)` with widths that are multiples of 1/4.
fn small_box() -> impl Strategy<Value = Polytope> {
    (1i64..=8, 1i64..=8).prop_map(|(w, h)| {
        Polytope::from_box(&sv(&["0", "0"]), &[Scalar::from_ratio(w, 4), Scalar::from_ratio(h, 4)]).unwrap()
    })
}

fn offsets(n: usize) -> impl Strategy<Value = Vec<Vec<Scalar>>> {
    prop::collection::vec(
        (small_rational(8), small_rational(8)).prop_map(|(a, b)| vec![a, b]),
        1..=n,
    )
}

fn h() -> ProbeDirection {
    ProbeDirection::new(vec![1, 1])
}

fn set_of(offs: &[Vec<Scalar>]) -> QuasiPeriodicSet {
    QuasiPeriodicSet::new(
        offs.iter()
            .map(|t| Coset::new(Lattice::integer(2), t.clone(), 1).unwrap())
            .collect(),
    )
    .unwrap()
}

fn distinct(offs: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let mut out: Vec<Vec<Scalar>> = Vec::new();
    for o in offs {
        if !out.contains(o) {
            out.push(o.clone());
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn exact_and_sampled_agree(p in small_box(), offs in offsets(3), seed in any::<u64>()) {
        let set = set_of(&offs);
        let exact = verify_constant_multiplicity(&p, &h(), &set, &VerificationMode::ExactTorus).unwrap();
        let sampled = verify_constant_multiplicity(&p, &h(), &set, &VerificationMode::sampled(1500, seed)).unwrap();
        if let Some(m) = exact.multiplicity() {
            prop_assert_eq!(sampled.multiplicity(), Some(m));
        }
        if let Verification::Discrepancy(d) = &sampled {
            prop_assert!(matches!(exact, Verification::Discrepancy(_)));
            let ctx = EnumeratorContext::new(p.clone(), h(), Translations::Periodic(set.clone())).unwrap();
            for (v, x) in &d.witnesses {
                prop_assert_eq!(ctx.l_half_open(x).unwrap(), *v);
            }
        }
    }

    #[test]
    fn reports_are_reproducible(p in small_box(), offs in offsets(2), seed in any::<u64>()) {
        let set = set_of(&offs);
        for mode in [VerificationMode::ExactTorus, VerificationMode::sampled(300, seed)] {
            let a = verify_constant_multiplicity(&p, &h(), &set, &mode).unwrap();
            let b = verify_constant_multiplicity(&p, &h(), &set, &mode).unwrap();
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn half_open_and_generic_agree(p in small_box(), offs in offsets(3)) {
        let set = set_of(&offs);
        let a = verify_constant_multiplicity(&p, &h(), &set, &VerificationMode::ExactTorus).unwrap();
        let b = verify_generic_multiplicity(&p, &h(), &set, &VerificationMode::ExactTorus).unwrap();
        if let (Some(x), Some(y)) = (a.multiplicity(), b.multiplicity()) {
            prop_assert_eq!(x, y);
        }
        // Constancy everywhere implies constancy at generic points.
        if a.multiplicity().is_some() {
            prop_assert!(b.multiplicity().is_some());
        }
    }

    #[test]
    fn doubling_weights_doubles_m(p in small_box(), offs in offsets(3)) {
        let set = set_of(&offs);
        let a = verify_constant_multiplicity(&p, &h(), &set, &VerificationMode::ExactTorus).unwrap();
        let b = verify_constant_multiplicity(&p, &h(), &set.scaled_weights(2), &VerificationMode::ExactTorus).unwrap();
        prop_assert_eq!(a.multiplicity().map(|m| 2 * m), b.multiplicity());
    }

    #[test]
    fn enumerator_matches_floor_count(p in small_box(), offs in offsets(3), seed in any::<u64>()) {
        let set = set_of(&offs);
        let ctx = EnumeratorContext::new(p.clone(), h(), Translations::Periodic(set)).unwrap();
        let (lo, hi) = p.bounding_box();
        let mut sampler = Sampler::new(seed);
        for _ in 0..20 {
            let v: Vec<Scalar> = sampler.unit_vector(2).into_iter().map(|x| Scalar::rational(x * Rational::from_integer(6.into()) - Rational::from_integer(3.into()))).collect();
            let expected: u64 = offs.iter().map(|t| box_count_half_open(lo, hi, t, &q("1"), &v)).sum();
            prop_assert_eq!(ctx.l_half_open(&v).unwrap(), expected);
            let window = WindowMultiset::from_set_in_box(
                &set_of(&offs),
                &v.iter().zip(hi).map(|(a, b)| a.clone() - b).collect::<Vec<_>>(),
                &v.iter().zip(lo).map(|(a, b)| a.clone() - b).collect::<Vec<_>>(),
            ).unwrap();
            prop_assert_eq!(coverage_count(&p, &Boundary::HalfOpen(h()), &window, &v).unwrap(), expected);
        }
    }

    #[test]
    fn synthesized_weights_satisfy_the_identity(p in small_box(), offs in offsets(3), seed in any::<u64>()) {
        let offs = distinct(&offs);
        let family = CosetFamily::new(Lattice::integer(2), offs.clone()).unwrap();
        let config = SynthesisConfig::default();
        let diffs = collect_difference_vectors(&p, &h(), &family, &VerificationMode::ExactTorus, &config).unwrap();
        if let Synthesis::Solved(sol) = synthesize(&p, &h(), &family, &VerificationMode::ExactTorus, &config).unwrap() {
            for d in &diffs.vectors {
                let dot: i64 = d.iter().zip(&sol.weights).map(|(a, b)| a * *b as i64).sum();
                prop_assert_eq!(dot, 0);
            }
            let (lo, hi) = p.bounding_box();
            let mut sampler = Sampler::new(seed);
            for _ in 0..50 {
                let v: Vec<Scalar> = sampler.unit_vector(2).into_iter().map(Scalar::rational).collect();
                let total: u64 = offs.iter().zip(&sol.weights).map(|(t, g)| g * box_count_half_open(lo, hi, t, &q("1"), &v)).sum();
                prop_assert_eq!(total, sol.multiplicity);
            }
        }
    }

    #[test]
    fn shifting_offsets_by_lattice_vectors_changes_nothing(p in small_box(), offs in offsets(3), shifts in prop::collection::vec((-3i64..=3, -3i64..=3), 3)) {
        let offs = distinct(&offs);
        let moved: Vec<Vec<Scalar>> = offs
            .iter()
            .zip(&shifts)
            .map(|(t, (a, b))| vec![t[0].clone() + &Scalar::from(*a), t[1].clone() + &Scalar::from(*b)])
            .collect();
        let config = SynthesisConfig::default();
        let mode = VerificationMode::ExactTorus;
        let f1 = CosetFamily::new(Lattice::integer(2), offs).unwrap();
        let f2 = CosetFamily::new(Lattice::integer(2), moved).unwrap();
        let mut v1 = collect_difference_vectors(&p, &h(), &f1, &mode, &config).unwrap().values;
        let mut v2 = collect_difference_vectors(&p, &h(), &f2, &mode, &config).unwrap().values;
        v1.sort();
        v2.sort();
        prop_assert_eq!(v1, v2);
        let s1 = synthesize(&p, &h(), &f1, &mode, &config).unwrap();
        let s2 = synthesize(&p, &h(), &f2, &mode, &config).unwrap();
        match (s1, s2) {
            (Synthesis::Solved(a), Synthesis::Solved(b)) => {
                prop_assert_eq!(a.weights, b.weights);
                prop_assert_eq!(a.multiplicity, b.multiplicity);
            }
            (Synthesis::Failed(_), Synthesis::Failed(_)) => {}
            _ => prop_assert!(false, "outcomes differ"),
        }
    }

    #[test]
    fn candidate_contains_rational_inputs(p in small_box(), t in (small_rational(6), small_rational(6))) {
        let l0 = Lattice::integer(2);
        let t1 = sv(&["0", "0"]);
        let t2 = vec![t.0, t.1];
        let res = refinement_pipeline(&p, &h(), &l0, &t1, &t2, (1, 1), &VerificationMode::ExactTorus).unwrap();
        for t in [&t1, &t2] {
            let c = Coset::new(l0.clone(), t.clone(), 1).unwrap();
            let pts = enumerate_in_box(&c, &sv(&["-5", "-5"]), &sv(&["5", "5"])).unwrap();
            for (x, _) in pts.points.iter().take(100) {
                prop_assert!(res.candidate.contains(x).unwrap());
            }
        }
    }

    #[test]
    fn weyl_result_is_minimal(a in 1i64..=9, b in 2i64..=9, eps in 2i64..=20) {
        let x = vec![Scalar::parse(&format!("{a}/{b}*sqrt:2")).unwrap(), Scalar::parse(&format!("{b}/{a}*sqrt:3")).unwrap()];
        let eps = Rational::new(1.into(), (2 * eps + 1).into());
        if let Some(j) = weyl_search(&x, &eps, 300).unwrap() {
            if j > 0 {
                prop_assert_eq!(weyl_search(&x, &eps, j - 1).unwrap(), None);
            }
        }
    }
}

#[test]
fn exact_certificates_survive_ten_thousand_samples() {
    let p = Polytope::from_box(&sv(&["0", "0"]), &sv(&["1", "1/2"])).unwrap();
    let set = set_of(&[sv(&["0", "0"]), sv(&["1/2*sqrt:2", "1/2"])]);
    let exact = verify_constant_multiplicity(&p, &h(), &set, &VerificationMode::ExactTorus).unwrap();
    let sampled = verify_constant_multiplicity(&p, &h(), &set, &VerificationMode::sampled(10_000, 1)).unwrap();
    assert_eq!(exact.multiplicity(), Some(1));
    assert_eq!(sampled.multiplicity(), Some(1));
}

#[test]
fn exact_difference_span_is_complete() {
    let p = Polytope::from_box(&sv(&["0", "0"]), &sv(&["3/4", "1/2"])).unwrap();
    let offs = vec![sv(&["0", "0"]), sv(&["1/4", "1/2"]), sv(&["1/2", "1/8"])];
    let family = CosetFamily::new(Lattice::integer(2), offs.clone()).unwrap();
    let config = SynthesisConfig::default();
    let exact = collect_difference_vectors(&p, &h(), &family, &VerificationMode::ExactTorus, &config).unwrap();
    let ctxs: Vec<EnumeratorContext> = offs
        .iter()
        .map(|t| {
            EnumeratorContext::new(p.clone(), h(), Translations::Periodic(set_of(std::slice::from_ref(t)))).unwrap()
        })
        .collect();
    let mut sampler = Sampler::new(77);
    let mut rows: Vec<Vec<Rational>> = exact
        .vectors
        .iter()
        .map(|v| v.iter().map(|&x| Rational::from_integer(x.into())).collect())
        .collect();
    for _ in 0..10_000 {
        let v: Vec<Scalar> = sampler.unit_vector(2).into_iter().map(Scalar::rational).collect();
        let w: Vec<Scalar> = sampler.unit_vector(2).into_iter().map(Scalar::rational).collect();
        let d: Vec<Rational> = ctxs
            .iter()
            .map(|c| {
                Rational::from_integer((c.l_half_open(&v).unwrap() as i64 - c.l_half_open(&w).unwrap() as i64).into())
            })
            .collect();
        rows.push(d);
    }
    assert_eq!(rank(&rows, 3), exact.rank);
}

#[test]
fn identity_holds_at_a_thousand_points() {
    let p = Polytope::from_box(&sv(&["0", "0"]), &sv(&["1", "1/2"])).unwrap();
    let offs = vec![sv(&["0", "0"]), sv(&["0", "1/2"])];
    let family = CosetFamily::new(Lattice::integer(2), offs.clone()).unwrap();
    let Synthesis::Solved(sol) = synthesize(
        &p,
        &h(),
        &family,
        &VerificationMode::ExactTorus,
        &SynthesisConfig::default(),
    )
    .unwrap() else {
        panic!("expected weights")
    };
    let mut sampler = Sampler::new(1000);
    let (lo, hi) = p.bounding_box();
    for _ in 0..1000 {
        let v: Vec<Scalar> = sampler
            .unit_vector(2)
            .into_iter()
            .map(|x| Scalar::rational(x * Rational::from_integer(10.into())))
            .collect();
        let total: u64 = offs
            .iter()
            .zip(&sol.weights)
            .map(|(t, g)| g * box_count_half_open(lo, hi, t, &q("1"), &v))
            .sum();
        assert_eq!(total, sol.multiplicity);
    }
}
