//! Acceptance criteria, one PASS/FAIL line each.

mod common;

use std::time::Instant;

use common::{box_count_half_open, q, s, sv};
use multitile_core::enumerator::coverage_count;
use multitile_core::lattice::{count_in_polytope, enumerate_in_box, enumerate_in_polytope};
use multitile_core::refine::{refinement_pipeline, weyl_search};
use multitile_core::sampling::Sampler;
use multitile_core::synth::{synthesize, SynthesisConfig};
use multitile_core::torus::Torus;
use multitile_core::verify::{general_position_check, verify_constant_multiplicity};
use multitile_core::{
    Boundary, ConnectivityVerdict, Coset, CosetFamily, EnumeratorContext, ExactScalar, HalfOpenPolytope, Lattice,
    Polytope, ProbeDirection, QuasiPeriodicSet, Rational, Scalar, Synthesis, Translations, Verification,
    VerificationMode, WindowMultiset,
};
use num_bigint::BigInt;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn check(cond: bool, detail: String) -> Outcome {
    if cond {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn rectangle() -> Polytope {
    Polytope::from_box(&sv(&["0", "0"]), &sv(&["1", "1/2"])).unwrap()
}

fn h2() -> ProbeDirection {
    ProbeDirection::new(vec![1, 1])
}

fn z2_coset(t: &[&str]) -> Coset {
    Coset::new(Lattice::integer(2), sv(t), 1).unwrap()
}

fn example_offsets() -> [Vec<Scalar>; 2] {
    [sv(&["0", "0"]), sv(&["1/2*sqrt:2", "1/2"])]
}

fn example() -> QuasiPeriodicSet {
    QuasiPeriodicSet::new(vec![z2_coset(&["0", "0"]), z2_coset(&["1/2*sqrt:2", "1/2"])]).unwrap()
}

/// Half-open count of Example 5.1 cosets by floors.
fn oracle(offsets: &[&Vec<Scalar>], step: &Rational, v: &[Scalar]) -> u64 {
    let (lo, hi) = (sv(&["0", "0"]), sv(&["1", "1/2"]));
    offsets.iter().map(|t| box_count_half_open(&lo, &hi, t, step, v)).sum()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let r = verify_constant_multiplicity(&rectangle(), &h2(), &example(), &VerificationMode::ExactTorus)
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let Verification::Certified(c) = r else {
        return Err("verification reported a discrepancy".into());
    };
    let offs = example_offsets();
    let mut rng = Sampler::new(11);
    let mut agree = true;
    for _ in 0..200 {
        let v: Vec<Scalar> = rng.unit_vector(2).into_iter().map(Scalar::rational).collect();
        agree &= oracle(&[&offs[0], &offs[1]], &q("1"), &v) == 1;
    }
    check(
        c.multiplicity == 1 && c.exact && agree && elapsed.as_secs_f64() < 10.0,
        format!(
            "m={} exact={} oracle_agrees={} time={:.3}s",
            c.multiplicity,
            c.exact,
            agree,
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_2() -> Outcome {
    let offs = example_offsets();
    let mut details = Vec::new();
    let mut ok = true;
    for i in 0..2 {
        let qi = example().subset(&[i]).map_err(|e| e.to_string())?;
        let r = verify_constant_multiplicity(&rectangle(), &h2(), &qi, &VerificationMode::ExactTorus)
            .map_err(|e| e.to_string())?;
        let Verification::Discrepancy(d) = r else {
            ok = false;
            details.push(format!("coset {}: constant", i + 1));
            continue;
        };
        let mut confirmed = true;
        for (value, x) in &d.witnesses {
            let lo: Vec<Scalar> = x.iter().map(|c| c.clone() - &s("3")).collect();
            let hi: Vec<Scalar> = x.iter().map(|c| c.clone() + &s("3")).collect();
            let window = WindowMultiset::from_set_in_box(&qi, &lo, &hi).map_err(|e| e.to_string())?;
            let direct =
                coverage_count(&rectangle(), &Boundary::HalfOpen(h2()), &window, x).map_err(|e| e.to_string())?;
            confirmed &= direct == *value && oracle(&[&offs[i]], &q("1"), x) == *value;
        }
        ok &= d.observed() == vec![0, 1] && confirmed;
        details.push(format!(
            "coset {}: observed {:?} confirmed={}",
            i + 1,
            d.observed(),
            confirmed
        ));
    }
    check(ok, details.join("; "))
}

fn criterion_3() -> Outcome {
    let mut ok = true;
    let mut details = Vec::new();
    for i in 0..2 {
        match general_position_check(&rectangle(), &example(), i).map_err(|e| e.to_string())? {
            ConnectivityVerdict::Disconnected(sep) => {
                let vertical_integer = sep
                    .lines
                    .iter()
                    .all(|l| l.normal == sv(&["1", "0"]) && l.offset.as_rational().is_some_and(|c| c.is_integer()));
                let lines: Vec<String> = sep
                    .lines
                    .iter()
                    .map(|l| format!("{}*x + {}*y = {}", l.normal[0], l.normal[1], l.offset))
                    .collect();
                ok &= vertical_integer && !sep.lines.is_empty();
                details.push(format!(
                    "i={}: Disconnected, witness lines [{}], vertical x in Z: {}",
                    i + 1,
                    lines.join(", "),
                    vertical_integer
                ));
            }
            other => {
                ok = false;
                details.push(format!("i={}: {:?}", i + 1, other));
            }
        }
    }
    check(ok, details.join("; "))
}

fn criterion_4() -> Outcome {
    let offs = example_offsets();
    let res = refinement_pipeline(
        &rectangle(),
        &h2(),
        &Lattice::integer(2),
        &offs[0],
        &offs[1],
        (1, 1),
        &VerificationMode::ExactTorus,
    )
    .map_err(|e| e.to_string())?;
    let half = Lattice::scaled_identity(2, &q("1/2"));
    let same = res.candidate.lattice.same_lattice(&half).map_err(|e| e.to_string())?;
    let (m, exact) = match &res.verification {
        Verification::Certified(c) => (Some(c.multiplicity), c.exact),
        Verification::Discrepancy(_) => (None, false),
    };
    let mut rng = Sampler::new(4);
    let mut agree = true;
    for _ in 0..200 {
        let v: Vec<Scalar> = rng.unit_vector(2).into_iter().map(Scalar::rational).collect();
        agree &= oracle(&[&offs[0]], &q("1/2"), &v) == 2;
    }
    check(
        res.n == BigInt::from(2) && same && m == Some(2) && exact && agree,
        format!(
            "N={} candidate=(1/2)Z^2:{} m={:?} exact={} oracle_agrees={}",
            res.n, same, m, exact, agree
        ),
    )
}

fn criterion_5() -> Outcome {
    let offsets = vec![sv(&["0", "0"]), sv(&["0", "1/2"])];
    let family = CosetFamily::new(Lattice::integer(2), offsets.clone()).map_err(|e| e.to_string())?;
    let r = synthesize(
        &rectangle(),
        &h2(),
        &family,
        &VerificationMode::ExactTorus,
        &SynthesisConfig::default(),
    )
    .map_err(|e| e.to_string())?;
    let Synthesis::Solved(sol) = r else {
        return Err(format!("synthesis failed: {r:?}"));
    };
    // Every face of the arrangement, independently of the synthesizer.
    let strict = Boundary::HalfOpen(h2())
        .strictness(&rectangle())
        .map_err(|e| e.to_string())?;
    let groups: Vec<Vec<Coset>> = family.cosets().into_iter().map(|c| vec![c]).collect();
    let sweep = Torus::new(&rectangle(), strict, &groups, &Lattice::integer(2))
        .and_then(|t| t.value_vectors(false))
        .map_err(|e| e.to_string())?;
    let mut faces_ok = true;
    for (_, x) in &sweep.values {
        let total: u64 = offsets
            .iter()
            .zip(&sol.weights)
            .map(|(a, g)| g * oracle(&[a], &q("1"), x))
            .sum();
        faces_ok &= total == sol.multiplicity;
    }
    check(
        sol.weights == vec![1, 1] && sol.multiplicity == 1 && faces_ok,
        format!(
            "g'={:?} m={} identity at {} face representatives: {} ({} evaluations)",
            sol.weights,
            sol.multiplicity,
            sweep.values.len(),
            faces_ok,
            sweep.stats.evaluations
        ),
    )
}

fn criterion_6() -> Outcome {
    let mut ok = true;
    let mut details = Vec::new();
    for d in 1..=3 {
        let lo = vec![s("0"); d];
        let hi = vec![s("1"); d];
        let cube = Polytope::from_box(&lo, &hi).map_err(|e| e.to_string())?;
        let probe = ProbeDirection::new(vec![1; d]);
        let family = CosetFamily::new(Lattice::integer(d), vec![lo.clone()]).map_err(|e| e.to_string())?;
        let (mode, config) = if d <= 2 {
            (VerificationMode::ExactTorus, SynthesisConfig::default())
        } else {
            (
                VerificationMode::sampled(10_000, 6),
                SynthesisConfig {
                    verification_samples: 10_000,
                    ..SynthesisConfig::default()
                },
            )
        };
        let r = synthesize(&cube, &probe, &family, &mode, &config).map_err(|e| e.to_string())?;
        match r {
            Synthesis::Solved(sol) => {
                let good = sol.weights == vec![1] && sol.multiplicity == 1;
                ok &= good && (d <= 2 || sol.checked == 10_000);
                details.push(format!(
                    "d={d}: g'={:?} m={} {} ({} checks)",
                    sol.weights,
                    sol.multiplicity,
                    if d <= 2 { "exact" } else { "sampled" },
                    sol.checked
                ));
            }
            Synthesis::Failed(f) => {
                ok = false;
                details.push(format!("d={d}: {f:?}"));
            }
        }
    }
    check(ok, details.join("; "))
}

/// `|(2j+1)/√2 − k| < ε` for the nearest integer `k`, by squaring.
fn weyl_oracle(j: u64, eps: &Rational) -> bool {
    let m = Rational::from_integer(BigInt::from(2 * j + 1));
    let x2 = &m * &m / Rational::from_integer(2.into());
    let mut k = BigInt::from(0);
    while Rational::from_integer((&k + 1) * (&k + 1)) <= x2 {
        k += 1;
    }
    [k.clone(), k + 1].into_iter().any(|k| {
        let k = Rational::from_integer(k);
        let lo = &k - eps;
        let hi = &k + eps;
        let below = if lo > Rational::from_integer(0.into()) {
            &lo * &lo < x2
        } else {
            true
        };
        below && x2 < &hi * &hi
    })
}

fn criterion_7() -> Outcome {
    let eps = q("1/20");
    let start = Instant::now();
    let j = weyl_search(&sv(&["1/2*sqrt:2"]), &eps, 1000).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let earlier_fail = (0..8).all(|j| !weyl_oracle(j, &eps));
    check(
        j == Some(8) && earlier_fail && weyl_oracle(8, &eps) && elapsed.as_secs_f64() < 1.0,
        format!("j={j:?} all j<8 fail={earlier_fail} time={:.4}s", elapsed.as_secs_f64()),
    )
}

fn rand_q(rng: &mut ChaCha8Rng, range: i64, max_den: i64) -> Rational {
    let den = rng.gen_range(1..=max_den);
    Rational::new(rng.gen_range(-range * den..=range * den).into(), den.into())
}

fn rand_point(rng: &mut ChaCha8Rng, d: usize, range: i64) -> Vec<Scalar> {
    (0..d).map(|_| Scalar::rational(rand_q(rng, range, 8))).collect()
}

fn rand_polytope(rng: &mut ChaCha8Rng, d: usize) -> Polytope {
    loop {
        if d == 2 && rng.gen_bool(0.5) {
            let k = rng.gen_range(3..=6);
            let pts: Vec<Vec<Scalar>> = (0..k).map(|_| rand_point(rng, 2, 2)).collect();
            if let Ok(p) = Polytope::from_vertices(&pts) {
                return p;
            }
        } else {
            let lo = rand_point(rng, d, 2);
            let hi: Vec<Scalar> = lo
                .iter()
                .map(|x| {
                    x.clone()
                        + &Scalar::rational(Rational::new(rng.gen_range(1..=8).into(), rng.gen_range(2..=4).into()))
                })
                .collect();
            return Polytope::from_box(&lo, &hi).unwrap();
        }
    }
}

fn rand_lattice(rng: &mut ChaCha8Rng, d: usize) -> Lattice {
    loop {
        let den = rng.gen_range(1..=3);
        let cols: Vec<Vec<Scalar>> = (0..d)
            .map(|_| {
                (0..d)
                    .map(|_| Scalar::rational(Rational::new(rng.gen_range(-3..=3).into(), den.into())))
                    .collect()
            })
            .collect();
        if let Ok(l) = Lattice::new(cols) {
            // Keep instances small enough for the naive scan.
            if inverse_norm(&l) <= 4.0 {
                return l;
            }
        }
    }
}

fn inverse_norm(l: &Lattice) -> f64 {
    l.inverse_rows()
        .iter()
        .map(|r| r.iter().map(|x| x.approx_f64().abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn naive_points(coset: &Coset, shape: &HalfOpenPolytope, open: bool) -> Vec<Vec<Scalar>> {
    let d = coset.dim();
    let (lo, hi) = shape.base().bounding_box();
    // Lattice coordinates of the bounding-box corners bound the scan.
    let mut kmin = vec![i64::MAX; d];
    let mut kmax = vec![i64::MIN; d];
    for mask in 0..1u32 << d {
        let corner: Vec<Scalar> = (0..d)
            .map(|i| if mask >> i & 1 == 1 { hi[i].clone() } else { lo[i].clone() } - &coset.translation[i])
            .collect();
        let k = coset.lattice.coords(&corner).unwrap();
        for j in 0..d {
            kmin[j] = kmin[j].min(i64::try_from(ExactScalar::floor(&k[j]).unwrap()).unwrap());
            kmax[j] = kmax[j].max(i64::try_from(ExactScalar::ceil(&k[j]).unwrap()).unwrap());
        }
    }
    let mut out = Vec::new();
    let mut idx = kmin.clone();
    loop {
        let x = coset.point(&idx);
        let inside = if open {
            shape.contains(&x).unwrap()
        } else {
            shape.base().contains_closed(&x).unwrap()
        };
        if inside {
            out.push(x);
        }
        let mut i = 0;
        loop {
            if i == d {
                return out;
            }
            idx[i] += 1;
            if idx[i] <= kmax[i] {
                break;
            }
            idx[i] = kmin[i];
            i += 1;
        }
    }
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut failures = [0usize; 4];

    // Direct coverage sum against the enumerator.
    for n in 0..1000 {
        let d = if n % 4 == 3 { 3 } else { 2 };
        let p = rand_polytope(&mut rng, d);
        let probe = p.find_probe_direction().unwrap();
        let v = rand_point(&mut rng, d, 3);
        let (window, periodic) = if n % 2 == 0 {
            let k = rng.gen_range(1..=12);
            let pts = (0..k)
                .map(|_| (rand_point(&mut rng, d, 4), rng.gen_range(1..=3)))
                .collect();
            (WindowMultiset::new(pts).unwrap(), None)
        } else {
            let c = Coset::new(
                rand_lattice(&mut rng, d),
                rand_point(&mut rng, d, 1),
                rng.gen_range(1..=3),
            )
            .unwrap();
            let set = QuasiPeriodicSet::single(c);
            let (p_lo, p_hi) = p.bounding_box();
            let lo: Vec<Scalar> = v.iter().zip(p_hi).map(|(x, b)| x.clone() - b).collect();
            let hi: Vec<Scalar> = v.iter().zip(p_lo).map(|(x, b)| x.clone() - b).collect();
            (WindowMultiset::from_set_in_box(&set, &lo, &hi).unwrap(), Some(set))
        };
        let direct = coverage_count(&p, &Boundary::HalfOpen(probe.clone()), &window, &v).unwrap();
        let translations = match periodic {
            Some(set) => Translations::Periodic(set),
            None => Translations::Window(window),
        };
        let ctx = EnumeratorContext::new(p, probe, translations).unwrap();
        if ctx.l_half_open(&v).unwrap() != direct {
            failures[0] += 1;
        }
    }

    // Periodicity.
    for n in 0..1000 {
        let d = if n % 5 == 4 { 3 } else { 2 };
        let lattice = rand_lattice(&mut rng, d);
        let p = rand_polytope(&mut rng, d);
        let c = Coset::new(lattice.clone(), rand_point(&mut rng, d, 1), 1).unwrap();
        let ctx =
            EnumeratorContext::with_default_probe(p, Translations::Periodic(QuasiPeriodicSet::single(c))).unwrap();
        let v = rand_point(&mut rng, d, 2);
        let k: Vec<i64> = (0..d).map(|_| rng.gen_range(-5..=5)).collect();
        let moved: Vec<Scalar> = v.iter().zip(lattice.point(&k)).map(|(a, b)| a.clone() + &b).collect();
        if ctx.l_half_open(&v).unwrap() != ctx.l_half_open(&moved).unwrap() {
            failures[1] += 1;
        }
    }

    // Half-open unit squares partition the plane.
    let square = Polytope::from_box(&sv(&["0", "0"]), &sv(&["1", "1"])).unwrap();
    let shape = HalfOpenPolytope::new(square.clone(), h2()).unwrap();
    for n in 0..1000 {
        let v = if n % 4 == 0 {
            // Lattice-aligned points stress the boundary rule.
            (0..2)
                .map(|_| Scalar::rational(Rational::new(rng.gen_range(-8..=8).into(), 2.into())))
                .collect()
        } else {
            rand_point(&mut rng, 2, 4)
        };
        let mut hits = 0;
        for a in -6..=6 {
            for b in -6..=6 {
                let rel = vec![v[0].clone() - &Scalar::from_i64(a), v[1].clone() - &Scalar::from_i64(b)];
                hits += usize::from(shape.contains(&rel).unwrap());
            }
        }
        if hits != 1 {
            failures[2] += 1;
        }
    }

    // Enumeration against a naive scan.
    for n in 0..500 {
        let d = if n % 3 == 2 { 3 } else { 2 };
        let lattice = rand_lattice(&mut rng, d);
        let c = Coset::new(lattice, rand_point(&mut rng, d, 1), 1).unwrap();
        let p = rand_polytope(&mut rng, d);
        let probe = p.find_probe_direction().unwrap();
        let open = rng.gen_bool(0.5);
        let boundary = if open {
            Boundary::HalfOpen(probe.clone())
        } else {
            Boundary::Closed
        };
        let found = enumerate_in_polytope(&c, &p, &boundary).unwrap();
        let expect = naive_points(&c, &HalfOpenPolytope::new(p, probe).unwrap(), open);
        let same =
            found.points.len() == expect.len() && expect.iter().all(|x| found.points.iter().any(|(y, _)| y == x));
        if !same {
            failures[3] += 1;
        }
    }

    check(
        failures.iter().all(|&f| f == 0),
        format!(
            "failures: identity {}/1000, periodicity {}/1000, partition {}/1000, enumeration {}/500",
            failures[0], failures[1], failures[2], failures[3]
        ),
    )
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (lattice, det) = loop {
        let cols: Vec<Vec<Rational>> = (0..3)
            .map(|_| {
                (0..3)
                    .map(|_| Rational::new(rng.gen_range(-4..=4).into(), 3.into()))
                    .collect()
            })
            .collect();
        if let Ok(l) = multitile_core::RationalLattice::new(cols) {
            let det = multitile_core::linalg::determinant(l.basis()).unwrap();
            if det.abs() >= q("1/2") {
                break (l, det.abs());
            }
        }
    };
    // Box volume ≈ 1.2·10⁶ covolumes.
    let side = ((1.2e6 * multitile_core::ExactScalar::approx_f64(&det)).cbrt()).ceil() as i64;
    let lo = vec![Rational::from_integer(0.into()); 3];
    let hi = vec![Rational::from_integer(side.into()); 3];
    let coset = multitile_core::lattice::Coset::new(lattice, lo.clone(), 1).unwrap();
    let start = Instant::now();
    let pts = enumerate_in_box(&coset, &lo, &hi).map_err(|e| e.to_string())?;
    let enum_time = start.elapsed().as_secs_f64();
    let b = multitile_core::RationalPolytope::from_box(&lo, &hi).unwrap();
    let counted = count_in_polytope(&coset, &b, &Boundary::Closed).map_err(|e| e.to_string())?;

    // Unit square, 24 irrational cosets of Z².
    let square = Polytope::from_box(&sv(&["0", "0"]), &sv(&["1", "1"])).unwrap();
    let cosets: Vec<Coset> = (1..=24)
        .map(|k| {
            let t = vec![s(&format!("{k}/37*sqrt:2")), s(&format!("{k}/41*sqrt:2 + {k}/29"))];
            Coset::new(Lattice::integer(2), t, 1).unwrap()
        })
        .collect();
    let set = QuasiPeriodicSet::new(cosets).unwrap();
    let start = Instant::now();
    let r =
        verify_constant_multiplicity(&square, &h2(), &set, &VerificationMode::ExactTorus).map_err(|e| e.to_string())?;
    let cert_time = start.elapsed().as_secs_f64();
    let (m, segments) = match &r {
        Verification::Certified(c) => match &c.evidence {
            multitile_core::verify::Evidence::Torus(st) => (Some(c.multiplicity), st.segments),
            _ => (Some(c.multiplicity), usize::MAX),
        },
        Verification::Discrepancy(_) => (None, 0),
    };
    check(
        pts.points.len() >= 1_000_000
            && pts.points.len() as u64 == counted
            && enum_time < 5.0
            && m == Some(24)
            && segments <= 200
            && cert_time < 30.0,
        format!(
            "enumerated {} points in {:.3}s (count {}); 2D certificate m={:?} over {} segments in {:.3}s",
            pts.points.len(),
            enum_time,
            counted,
            m,
            segments,
            cert_time
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("example rectangle tiles once with both cosets", criterion_1),
        ("each coset alone gives values {0,1}", criterion_2),
        ("general position fails with vertical witness lines", criterion_3),
        ("refinement gives N=2, (1/2)Z^2, m=2", criterion_4),
        ("weights (1,1) with m=1 for the half-height strips", criterion_5),
        ("unit cube weights in d=1,2,3", criterion_6),
        ("odd-multiple search finds j=8", criterion_7),
        ("randomized exact identities", criterion_8),
        ("scale", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
