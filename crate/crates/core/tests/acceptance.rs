//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Exits non-zero if any criterion fails, except for the documented
//! condition (A) finding listed in `KNOWN_FINDINGS`.

use corners::fibre::{corner_identity_check, fibre_product, is_strongly_transverse, is_transverse};
use corners::model::ModelCorner;
use corners::poly::{classify_at_origin, germ_of, Classification, PolyMap};
use corners::suites::{self, SuiteOptions, SuiteReport};
use std::time::Instant;

/// Criteria that fail for an understood reason; see the README.
const KNOWN_FINDINGS: &[usize] = &[4];

const SEED: u64 = 20_240_601;

fn mc(n: usize, k: usize) -> ModelCorner {
    ModelCorner::new(n, k).unwrap()
}

struct Outcome {
    ok: bool,
    detail: String,
}

fn from_reports(reports: &[SuiteReport]) -> Outcome {
    let ok = reports.iter().all(|r| r.passed());
    let detail = reports
        .iter()
        .map(|r| {
            let checks: Vec<String> =
                r.tally.iter().map(|(k, t)| format!("{k} {}/{}", t.passed, t.passed + t.failed)).collect();
            format!("{} [{} cases: {}]", r.name, r.cases, checks.join(", "))
        })
        .collect::<Vec<_>>()
        .join("; ");
    let mut fails = String::new();
    for r in reports {
        for m in r.failures.iter().take(3) {
            fails.push_str(&format!("\n      {m}"));
        }
    }
    Outcome { ok, detail: detail + &fails }
}

fn classifier_examples() -> Outcome {
    let mut notes = Vec::new();
    let inclusion = germ_of(&PolyMap::parse(mc(1, 1), mc(1, 0), &["x1"]).unwrap()).unwrap();
    let c = inclusion.is_immersion() && !inclusion.is_submersion() && inclusion.transfer().is_empty();
    notes.push(format!("inclusion smooth, not submersion: {c}"));

    let square = classify_at_origin(&PolyMap::parse(mc(1, 1), mc(1, 1), &["x1^2"]).unwrap());
    let d = matches!(&square, Classification::BMap(b) if b.exponents == vec![vec![2]]);
    notes.push(format!("x^2 b-map not smooth: {d}"));

    let sum = classify_at_origin(&PolyMap::parse(mc(2, 2), mc(1, 1), &["x1 + x2"]).unwrap());
    let e = sum == Classification::WeaklySmoothOnly { failing_rows: vec![1] };
    notes.push(format!("x+y weakly smooth only: {e}"));

    let prod = classify_at_origin(&PolyMap::parse(mc(2, 2), mc(1, 1), &["x1*x2"]).unwrap());
    let f = matches!(&prod, Classification::BMap(b) if b.exponents == vec![vec![1, 1]]);
    notes.push(format!("xy b-map with exponents (1,1): {f}"));
    Outcome { ok: c && d && e && f, detail: notes.join("; ") }
}

fn corner_identity() -> Outcome {
    let mut r = suites::corners(SuiteOptions { seed: SEED, cases: 300, max_dim: 6 }).unwrap();
    let f = germ_of(&PolyMap::parse(mc(1, 1), mc(2, 2), &["x1", "2*x1"]).unwrap()).unwrap();
    let g = germ_of(&PolyMap::parse(mc(1, 1), mc(2, 2), &["2*x1", "x1"]).unwrap()).unwrap();
    let rep = corner_identity_check(&f, &g).unwrap();
    let row0 = rep.row(0).unwrap();
    let others_empty = rep.rows.iter().filter(|r| r.i != 0).all(|r| r.lhs.is_empty() && r.rhs.is_empty());
    let skew_ok = is_transverse(&f, &g).unwrap()
        && !is_strongly_transverse(&f, &g).unwrap()
        && row0.lhs.len() == 1
        && row0.rhs.len() == 2
        && others_empty
        && !rep.holds()
        && fibre_product(&f, &g).unwrap().w_model == mc(0, 0);
    r.record("skew pair: one point against two", skew_ok, || format!("{rep:?}"));
    from_reports(&[r])
}

type Criterion = (&'static str, Box<dyn Fn() -> Outcome>);

fn main() {
    let big = |cases| SuiteOptions { seed: SEED, cases, max_dim: 4 };
    let criteria: Vec<Criterion> = vec![
        ("classifier reproduces the four worked examples", Box::new(classifier_examples)),
        (
            "corner functor laws on 1000 composable pairs",
            Box::new(move || from_reports(&[suites::functor(big(1000)).unwrap()])),
        ),
        ("product corner and iterated-boundary counts, n <= 6", Box::new(|| from_reports(&[suites::products(6)]))),
        (
            "fibre product dimension, depth and interface conditions on 500 pairs",
            Box::new(move || from_reports(&[suites::fibre(big(500)).unwrap()])),
        ),
        ("corner identity for strongly transverse pairs", Box::new(corner_identity)),
        ("universal property on 500 cones", Box::new(move || from_reports(&[suites::universal(big(500)).unwrap()]))),
        (
            "orientation sign identities",
            Box::new(|| from_reports(&[suites::signs(SuiteOptions { seed: SEED, cases: 200, max_dim: 2 }).unwrap()])),
        ),
        ("glued complex classifications", Box::new(|| from_reports(&[suites::complex()]))),
        ("boundary formulas", Box::new(move || from_reports(&[suites::boundary(big(100)).unwrap()]))),
    ];
    let mut unexpected = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let n = i + 1;
        let t = Instant::now();
        let o = run();
        let verdict = if o.ok { "PASS" } else { "FAIL" };
        let known = !o.ok && KNOWN_FINDINGS.contains(&n);
        println!(
            "{verdict} criterion {n}: {name} ({:.1}s){}",
            t.elapsed().as_secs_f64(),
            if known { " [known finding]" } else { "" }
        );
        println!("    {}", o.detail);
        if !o.ok && !known {
            unexpected += 1;
        }
    }
    if unexpected > 0 {
        eprintln!("{unexpected} criteria failed");
        std::process::exit(1);
    }
}
