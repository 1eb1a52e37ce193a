//! Acceptance criteria 1 to 11. Prints one PASS/FAIL line per criterion and exits non-zero if
//! any criterion fails.

use std::time::{Duration, Instant};

use heckex::bs::{BsElem, BsPair};
use heckex::bundle::{Setting, TrivialLine};
use heckex::check::{self, suite_rng, Property, Suite};
use heckex::eq::{self, EqBundle};
use heckex::hecke;
use heckex::pair::HeckePair;
use heckex::perm::{Perm, PermPair};
use heckex::random::Pools;
use heckex::scalars::RadScalar;
use serde_json::json;

const SEED: u64 = 20_240_601;

struct Outcome {
    suites: Vec<Suite>,
    extra: Vec<Property>,
}

fn s3() -> Setting<PermPair, TrivialLine> {
    Setting::new(PermPair::s3(), TrivialLine)
}

fn s4() -> Setting<PermPair, TrivialLine> {
    Setting::new(PermPair::s4(), TrivialLine)
}

fn bs() -> Setting<BsPair, TrivialLine> {
    Setting::new(BsPair::new(2).unwrap(), TrivialLine)
}

fn criterion_1() -> Outcome {
    let mut rng = suite_rng(SEED, 1);
    let suites = vec![
        check::pair_suite(&PermPair::s3(), 500, &mut rng),
        check::pair_suite(&PermPair::s4(), 500, &mut rng),
        check::pair_suite(&BsPair::new(2).unwrap(), 500, &mut rng),
    ];
    Outcome { suites, extra: vec![] }
}

/// (T₁*T₁)(g) = Σ_{hΓ} T₁(h) T₁(h⁻¹g) computed by enumerating S₃ as image arrays.
fn s3_square_oracle() -> Property {
    type P3 = [usize; 3];
    let comp = |a: &P3, b: &P3| -> P3 { [a[b[0]], a[b[1]], a[b[2]]] };
    let inv = |a: &P3| -> P3 {
        let mut r = [0; 3];
        for i in 0..3 {
            r[a[i]] = i;
        }
        r
    };
    let all: Vec<P3> = vec![[0, 1, 2], [1, 0, 2], [0, 2, 1], [2, 1, 0], [1, 2, 0], [2, 0, 1]];
    let gamma: Vec<P3> = vec![[0, 1, 2], [1, 0, 2]];
    let in_dcoset = |x: &P3, g: &P3| gamma.iter().any(|a| gamma.iter().any(|b| comp(&comp(a, g), b) == *x));
    let t1 = |x: &P3| if in_dcoset(x, &[2, 1, 0]) { 1 } else { 0 };
    // One representative per left coset hΓ.
    let mut reps: Vec<P3> = Vec::new();
    for h in &all {
        if !reps.iter().any(|r| gamma.iter().any(|c| comp(r, c) == *h)) {
            reps.push(*h);
        }
    }
    let p = PermPair::s3();
    let t = hecke::basis(&p, &Perm::from_cycles(3, &[&[1, 3]]));
    let sq = hecke::convolve(&p, &t, &t);
    let expected = hecke::unit(&p).scale(&RadScalar::from_int(2)).add(&t);
    let mut prop = Property::new("T1-squared-by-coset-sums");
    prop.check(sq == expected, || json!({"got": hecke::to_json(&p, &sq)}));
    for g in &all {
        let brute: i64 = reps.iter().map(|h| t1(h) * t1(&comp(&inv(h), g))).sum();
        let lib = hecke::value(&p, &sq, &Perm::from_images(&g.map(|i| i + 1)).unwrap());
        prop.check(lib == RadScalar::from_int(brute), || json!({"g": g, "brute": brute}));
    }
    prop
}

fn criterion_2() -> Outcome {
    let mut rng = suite_rng(SEED, 2);
    let (p3, p4, pb) = (PermPair::s3(), PermPair::s4(), BsPair::new(2).unwrap());
    let d3 = p3.dcosets().unwrap();
    let d4 = p4.dcosets().unwrap();
    let db = Pools::sampled(&bs(), 10, &mut rng).dcosets;
    let suites = vec![
        check::hecke_suite(&p3, &d3, 200, &mut rng),
        check::hecke_suite(&p4, &d4, 200, &mut rng),
        check::hecke_suite(&pb, &db, 200, &mut rng),
    ];
    Outcome { suites, extra: vec![s3_square_oracle()] }
}

fn s4_chain(s: &Setting<PermPair, TrivialLine>) -> (<PermPair as HeckePair>::Sub, <PermPair as HeckePair>::Sub) {
    let p = &s.pair;
    (p.gamma(), p.gamma_g(&Perm::from_cycles(4, &[&[3, 4]])))
}

fn criterion_3() -> Outcome {
    let mut rng = suite_rng(SEED, 3);
    let s = s4();
    let pools = Pools::finite(&s).unwrap();
    let (h, k) = s4_chain(&s);
    let l = s.pair.trivial_sub().unwrap();
    Outcome { suites: vec![check::embedding_suite(&s, &pools, (h, k, l), 200, &mut rng)], extra: vec![] }
}

fn criterion_4() -> Outcome {
    let mut rng = suite_rng(SEED, 4);
    let s = s4();
    let pools = Pools::finite(&s).unwrap();
    Outcome { suites: vec![check::pik_suite(&s, &pools, s4_chain(&s), 50, &mut rng)], extra: vec![] }
}

fn criterion_5() -> Outcome {
    let mut rng = suite_rng(SEED, 5);
    let (a, b) = (s3(), s4());
    let suites = vec![
        check::crossed_suite(&a, &Pools::finite(&a).unwrap(), 100, 200, &mut rng),
        check::crossed_suite(&b, &Pools::finite(&b).unwrap(), 100, 200, &mut rng),
    ];
    Outcome { suites, extra: vec![] }
}

fn criterion_6() -> Outcome {
    let mut rng = suite_rng(SEED, 6);
    let s = s3();
    Outcome { suites: vec![check::regular_suite(&s, &Pools::finite(&s).unwrap(), 50, &mut rng)], extra: vec![] }
}

fn criterion_7() -> Outcome {
    let mut rng = suite_rng(SEED, 7);
    let s = s3();
    Outcome { suites: vec![check::norm_suite(&s, &Pools::finite(&s).unwrap(), 100, &mut rng)], extra: vec![] }
}

fn criterion_8() -> Outcome {
    let mut rng = suite_rng(SEED, 8);
    let (a, b) = (s3(), bs());
    let pb = Pools::sampled(&b, 10, &mut rng);
    let suites = vec![
        check::lln_suite(&a, &Pools::finite(&a).unwrap(), 100, &mut rng),
        check::lln_suite(&b, &pb, 100, &mut rng),
    ];
    Outcome { suites, extra: vec![] }
}

fn criterion_9() -> Outcome {
    let mut rng = suite_rng(SEED, 9);
    let b = bs();
    let window: Vec<BsElem> = [(0, 0), (1, 0), (0, 1), (0, -1), (1, 1), (3, -1)]
        .iter()
        .map(|&(t, k)| BsElem::int(t, k))
        .collect();
    let suites = vec![
        check::svn_suite(&s3(), &mut rng),
        check::svn_suite(&s4(), &mut rng),
        check::svn_window(&b, &window),
    ];
    Outcome { suites, extra: vec![] }
}

fn criterion_10() -> Outcome {
    let mut rng = suite_rng(SEED, 10);
    let flip = Perm::from_cycles(2, &[&[1, 2]]);
    let z2 = PermPair::new(2, vec![flip.clone()], vec![]).unwrap();
    let z2_full = PermPair::new(2, vec![flip.clone()], vec![flip]).unwrap();
    let s3p = PermPair::s3();
    let mut suites = Vec::new();
    for p in [z2, z2_full, s3p] {
        let alg = eq::group_algebra(&p).unwrap();
        let s = Setting::new(p, EqBundle::new(alg));
        suites.extend(check::eq_suite(&s, 100, 200, &mut rng));
    }
    Outcome { suites, extra: vec![] }
}

fn criterion_11() -> Outcome {
    let mut rng = suite_rng(SEED, 11);
    let (a, b, c) = (s3(), s4(), bs());
    let pc = Pools::sampled(&c, 10, &mut rng);
    let suites = vec![
        check::l1_suite(&a, &Pools::finite(&a).unwrap(), 200, &mut rng),
        check::l1_suite(&b, &Pools::finite(&b).unwrap(), 200, &mut rng),
        check::l1_suite(&c, &pc, 200, &mut rng),
    ];
    Outcome { suites, extra: vec![] }
}

fn main() {
    let criteria: [(usize, &str, fn() -> Outcome, Option<u64>); 11] = [
        (1, "Hecke-pair arithmetic", criterion_1, Some(5)),
        (2, "Hecke algebra", criterion_2, Some(10)),
        (3, "embeddings", criterion_3, Some(20)),
        (4, "pi^K inequality", criterion_4, None),
        (5, "crossed product core", criterion_5, None),
        (6, "regular representation", criterion_6, None),
        (7, "reduced-norm coherence", criterion_7, None),
        (8, "LLN equivalence", criterion_8, None),
        (9, "Stone-von Neumann at finite scale", criterion_9, Some(30)),
        (10, "graded bundle over G x G", criterion_10, Some(30)),
        (11, "L1 norms", criterion_11, None),
    ];
    let only: Option<usize> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut all_ok = true;
    for (n, name, run, limit) in criteria {
        if only.is_some_and(|o| o != n) {
            continue;
        }
        let start = Instant::now();
        let out = run();
        let took = start.elapsed();
        let in_time = limit.is_none_or(|l| took < Duration::from_secs(l));
        let props = out.suites.iter().flat_map(|s| s.properties.iter()).chain(out.extra.iter());
        let (mut count, mut checks) = (0, 0);
        let mut failures = Vec::new();
        for p in props {
            count += 1;
            checks += p.checked;
            if !p.passed() {
                failures.push(p.clone());
            }
        }
        let ok = failures.is_empty() && in_time;
        all_ok &= ok;
        let bound = limit.map_or(String::new(), |l| format!(", bound {l}s"));
        println!(
            "criterion {n:>2} {}: {name} ({count} properties, {checks} checks, {:.2}s{bound})",
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64()
        );
        for f in failures {
            println!("    failed: {}", f.to_json());
        }
    }
    if !all_ok {
        std::process::exit(1);
    }
}
