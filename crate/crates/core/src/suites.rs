//! Seeded verification suites over randomly generated and exhaustive instances.

use crate::complex::corpus;
use crate::error::Result;
use crate::fibre::{
    boundary_formula_checks, check_boundary_formula, check_universal_property, corner_identity_check, fibre_product,
    interface_data, is_strongly_transverse, matched_triples, strong_transversality_witness, BoundaryFormula,
    ClassKind,
};
use crate::fibre::{is_transverse, FibreLedger};
use crate::germ::{compose, CornerMapGerm};
use crate::linalg::{permutation_sign, Q};
use crate::model::{all_subsets, binomial, ModelCorner};
use crate::orient::{
    boundary_orientation_sign, fibre_product_orientation_with, iterated_boundary_sign, projection_instances,
    verify_sign_identity, SignIdentity, SignInstance, Splitting,
};
use crate::random::{self, SuiteRng};
use std::collections::BTreeMap;
use std::fmt;

pub const SUITES: [&str; 8] = ["functor", "products", "fibre", "universal", "corners", "boundary", "signs", "complex"];

#[derive(Debug, Clone, Copy)]
pub struct SuiteOptions {
    pub seed: u64,
    pub cases: usize,
    pub max_dim: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { seed: 0, cases: 200, max_dim: 4 }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Tally {
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, Default)]
pub struct SuiteReport {
    pub name: String,
    pub cases: usize,
    pub tally: BTreeMap<String, Tally>,
    /// The first few failure messages.
    pub failures: Vec<String>,
}

const KEEP_FAILURES: usize = 20;

impl SuiteReport {
    fn new(name: &str) -> Self {
        SuiteReport { name: name.into(), ..Default::default() }
    }

    pub fn record(&mut self, check: &str, ok: bool, detail: impl FnOnce() -> String) {
        let t = self.tally.entry(check.into()).or_default();
        if ok {
            t.passed += 1;
        } else {
            t.failed += 1;
            if self.failures.len() < KEEP_FAILURES {
                self.failures.push(format!("{check}: {}", detail()));
            }
        }
    }

    pub fn failed(&self) -> usize {
        self.tally.values().map(|t| t.failed).sum()
    }

    pub fn passed(&self) -> bool {
        self.failed() == 0
    }

    pub fn check(&self, name: &str) -> Tally {
        self.tally.get(name).copied().unwrap_or_default()
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "pass" } else { "FAIL" };
        writeln!(f, "suite {}: {} cases, {verdict}", self.name, self.cases)?;
        for (k, t) in &self.tally {
            writeln!(f, "  {k}: {} passed, {} failed", t.passed, t.failed)?;
        }
        for m in &self.failures {
            writeln!(f, "  ! {m}")?;
        }
        Ok(())
    }
}

pub fn run_suite(name: &str, opts: SuiteOptions) -> Option<Result<SuiteReport>> {
    Some(match name {
        "functor" => functor(opts),
        "products" => Ok(products(opts.max_dim.max(1))),
        "fibre" => fibre(opts),
        "universal" => universal(opts),
        "corners" => corners(opts),
        "boundary" => boundary(opts),
        "signs" => signs(opts),
        "complex" => Ok(complex()),
        _ => return None,
    })
}

pub fn functor(opts: SuiteOptions) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("functor");
    let mut rng = random::rng(opts.seed);
    for _ in 0..opts.cases {
        let (f, g) = random::composable_pair(&mut rng, opts.max_dim);
        let h = compose(&g, &f)?;
        rep.cases += 1;
        for a in all_subsets(f.source().depth) {
            let cf = f.corner_map(&a)?;
            let composite = cf.then(&g.corner_map(&cf.target_label)?)?;
            rep.record("composition", h.corner_map(&a)? == composite, || format!("{f} then {g} at {a}"));

            let hf = f.hat_corner_map(&a)?;
            let hat = hf.then(&g.hat_corner_map(&hf.target_label)?)?;
            rep.record("hat composition", h.hat_corner_map(&a)? == hat, || format!("{f} then {g} at {a}"));

            let id = CornerMapGerm::identity(f.source()).corner_map(&a)?;
            let ok = id.target_label == a
                && id.restricted == CornerMapGerm::identity(f.source().stratum_model(a.len()))
                && id.then(&cf)? == cf
                && cf.then(&CornerMapGerm::identity(f.target()).corner_map(&cf.target_label)?)? == cf;
            rep.record("identity", ok, || format!("{f} at {a}"));
        }
    }
    Ok(rep)
}

fn falling(k: usize, j: usize) -> u128 {
    if j > k {
        return 0;
    }
    ((k - j + 1)..=k).map(|x| x as u128).product()
}

/// Strata of `[0,∞)^k` of depth `j`, counted by sign pattern.
fn brute_strata(k: usize, j: usize) -> u128 {
    (0u32..1 << k).filter(|mask| mask.count_ones() as usize == j).count() as u128
}

/// Ordered `j`-tuples of distinct faces of `[0,∞)^k`, counted one at a time.
fn brute_ordered(k: usize, j: usize) -> u128 {
    fn go(k: usize, left: usize, used: &mut Vec<bool>) -> u128 {
        if left == 0 {
            return 1;
        }
        let mut total = 0;
        for i in 0..k {
            if !used[i] {
                used[i] = true;
                total += go(k, left - 1, used);
                used[i] = false;
            }
        }
        total
    }
    go(k, j, &mut vec![false; k])
}

/// Corner and iterated-boundary counts of products against brute force, total dimension at most `max_dim`.
pub fn products(max_dim: usize) -> SuiteReport {
    let mut rep = SuiteReport::new("products");
    let models: Vec<ModelCorner> =
        (0..=max_dim).flat_map(|n| (0..=n).map(move |k| ModelCorner { dim: n, depth: k })).collect();
    for x in &models {
        for y in &models {
            if x.dim + y.dim > max_dim {
                continue;
            }
            rep.cases += 1;
            let (p, _) = x.product(y);
            for j in 0..=p.depth + 1 {
                let conv: u128 = (0..=j).map(|i| binomial(x.depth, i) * binomial(y.depth, j - i)).sum();
                let brute = brute_strata(p.depth, j);
                rep.record("corners", p.corners_count(j) == brute && conv == brute, || {
                    format!("{x} x {y}, j = {j}: {} vs {conv} vs {brute}", p.corners_count(j))
                });
                let conv: u128 = (0..=j)
                    .map(|i| binomial(j, i) * falling(x.depth, i) * falling(y.depth, j - i))
                    .sum();
                let brute = brute_ordered(p.depth, j);
                rep.record("iterated boundary", p.iterated_boundary_count(j) == brute && conv == brute, || {
                    format!("{x} x {y}, j = {j}: {} vs {conv} vs {brute}", p.iterated_boundary_count(j))
                });
            }
        }
    }
    rep
}

/// `[J_f | -J_g] · basis = 0` and the basis is injective.
fn kernel_identification(f: &CornerMapGerm, g: &CornerMapGerm, l: &FibreLedger) -> bool {
    let d = f.jacobian().hstack(&g.jacobian().scale(&-Q::from_integer(1.into())));
    let kdim = d.ncols() - d.rank();
    d.mul(&l.basis).is_zero() && l.basis.rank() == l.basis.ncols() && l.basis.ncols() == kdim
}

pub fn fibre(opts: SuiteOptions) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("fibre");
    let mut rng = random::rng(opts.seed);
    for _ in 0..opts.cases {
        let (f, g) = random::transverse_pair(&mut rng, 6);
        rep.cases += 1;
        let l = fibre_product(&f, &g)?;
        let (x, y, z) = (f.source(), g.source(), f.target());
        rep.record("dimension", l.w_model.dim + z.dim == x.dim + y.dim, || format!("{f} / {g}: {}", l.w_model));
        rep.record("registry size", l.registry.len() == l.expected_depth, || {
            format!("{f} / {g}: {} faces, expected {}", l.registry.len(), l.expected_depth)
        });
        let v = l.interface.verdicts;
        rep.record("condition (A)", v.a, || format!("{f} / {g}"));
        rep.record("conditions (B)-(D)", v.b && v.c && v.d, || format!("{f} / {g}"));
        let triples = matched_triples(&f, &g)?;
        rep.record("j+k >= l", triples.iter().all(|t| t.index() >= 0), || format!("{f} / {g}"));
        let mut restricted_ok = true;
        for t in &triples {
            let (fa, gb) = (f.corner_map(&t.a)?.restricted, g.corner_map(&t.b)?.restricted);
            restricted_ok &= is_transverse(&fa, &gb)?;
        }
        rep.record("restricted transversality", restricted_ok, || format!("{f} / {g}"));
        let by_enumeration = strong_transversality_witness(&f, &g)?.is_none();
        let by_classes = !l.interface.classes.iter().any(|e| e.kind == ClassKind::B);
        rep.record("strong transversality criteria agree", by_enumeration == by_classes, || format!("{f} / {g}"));
        rep.record("kernel identification", kernel_identification(&f, &g, &l), || format!("{f} / {g}"));
        if !v.a {
            // the construction must still be right when (A) fails
            let explained = l.interface.classes.iter().any(|e| e.forced_zero);
            rep.record("condition (A) failures explained by vanishing classes", explained, || format!("{f} / {g}"));
            rep.record("interface check reports (A)", interface_data(&f, &g).is_err(), || format!("{f} / {g}"));
        }
    }
    Ok(rep)
}

pub fn universal(opts: SuiteOptions) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("universal");
    let mut rng = random::rng(opts.seed);
    for _ in 0..opts.cases {
        let (f, g) = random::transverse_pair(&mut rng, 6);
        let l = fibre_product(&f, &g)?;
        let (h, h1, h2) = random::cone(&mut rng, &l, 3);
        rep.cases += 1;
        match check_universal_property(&f, &g, &l, &h1, &h2) {
            Ok(m) => {
                rep.record("mediator exists", true, String::new);
                rep.record("mediator is unique", m == h, || format!("{f} / {g}: got {m}, built from {h}"));
                let round = compose(&l.pi_x, &m)? == h1 && compose(&l.pi_y, &m)? == h2;
                rep.record("round trip", round, || format!("{f} / {g}"));
            }
            Err(e) => rep.record("mediator exists", false, || format!("{f} / {g}: {e}")),
        }
    }
    Ok(rep)
}

pub fn corners(opts: SuiteOptions) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("corners");
    let mut rng = random::rng(opts.seed);
    let mut tries = 0;
    while rep.cases < opts.cases && tries < 50 * opts.cases.max(1) {
        tries += 1;
        let (f, g) = random::transverse_pair(&mut rng, 6);
        if !is_strongly_transverse(&f, &g)? {
            continue;
        }
        rep.cases += 1;
        let r = corner_identity_check(&f, &g)?;
        rep.record("restricted pairs transverse", r.non_transverse_triples.is_empty(), || format!("{f} / {g}"));
        for row in &r.rows {
            rep.record("bijection", row.bijection == Some(true), || {
                format!("{f} / {g} at i = {}: {} vs {}", row.i, row.lhs.len(), row.rhs.len())
            });
        }
    }
    let found = rep.cases;
    rep.record("enough strongly transverse pairs", found == opts.cases, || format!("only {found}"));
    Ok(rep)
}

fn boundary_instance(
    rng: &mut SuiteRng,
    formula: BoundaryFormula,
) -> Option<(CornerMapGerm, CornerMapGerm)> {
    use BoundaryFormula::*;
    for _ in 0..100 {
        let z = random::model(rng, 2);
        let z = if formula == BoundarylessTarget { ModelCorner { dim: z.dim, depth: 0 } } else { z };
        let xs = random::submersion_source(rng, z, 2);
        let ys = random::submersion_source(rng, z, 2);
        let any_y = random::model(rng, 3);
        let pair = match formula {
            MinusBoundaryOfSubmersion => {
                random::submersion(rng, xs, z).map(|f| (f.clone(), CornerMapGerm::identity(f.target())))
            }
            BoundarylessTarget => {
                let x = random::model(rng, 3);
                Some((random::germ(rng, x, z), random::germ(rng, any_y, z)))
            }
            OneSubmersion => random::submersion(rng, xs, z).map(|f| (f, random::germ(rng, any_y, z))),
            OneBSubmersive => random::b_submersive_germ(rng, xs, z).map(|f| (f, random::germ(rng, any_y, z))),
            TwoSubmersions => random::submersion(rng, xs, z).zip(random::submersion(rng, ys, z)),
            TwoBSubmersive => random::b_submersive_germ(rng, xs, z).zip(random::b_submersive_germ(rng, ys, z)),
        };
        if let Some((f, g)) = pair {
            if is_transverse(&f, &g).ok()? {
                return Some((f, g));
            }
        }
    }
    None
}

pub fn boundary(opts: SuiteOptions) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("boundary");
    let mut rng = random::rng(opts.seed);
    for formula in BoundaryFormula::ALL {
        for _ in 0..opts.cases {
            let Some((f, g)) = boundary_instance(&mut rng, formula) else {
                rep.record(formula.name(), false, || "no instance found".into());
                continue;
            };
            rep.cases += 1;
            let r = check_boundary_formula(formula, &f, &g)?;
            rep.record(formula.name(), r.holds(), || format!("{f} / {g}: {:?}", r.problems));
        }
    }
    let line = CornerMapGerm::identity(ModelCorner { dim: 1, depth: 0 });
    let diagonal = fibre_product(&line, &line)?;
    rep.record("boundaryless diagonal", diagonal.w_model.depth == 0, String::new);
    Ok(rep)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for slot in 0..=p.len() {
            let mut q = p.clone();
            q.insert(slot, n - 1);
            out.push(q);
        }
    }
    out
}

fn random_sign_instance(rng: &mut SuiteRng, which: SignIdentity) -> Option<SignInstance> {
    use SignIdentity::*;
    let signs5: Vec<i8> = (0..5).map(|_| random::orientation(rng)).collect();
    let signs3 = signs5[..3].to_vec();
    let signs2 = signs5[..2].to_vec();
    let maps = match which {
        MinusBoundary | IdentityPullback => {
            let t = random::model(rng, 2);
            let s = random::submersion_source(rng, t, 2);
            let f = if which == MinusBoundary {
                random::submersion(rng, s, t)?
            } else {
                let s = random::model(rng, 3);
                random::germ(rng, s, t)
            };
            return Some(SignInstance { maps: vec![f], signs: signs2 });
        }
        BoundaryBoundarylessTarget => {
            let (f, g) = boundary_instance(rng, BoundaryFormula::BoundarylessTarget)?;
            vec![f, g]
        }
        BoundaryOneSubmersion => {
            let (f, g) = boundary_instance(rng, BoundaryFormula::OneSubmersion)?;
            vec![f, g]
        }
        BoundaryTwoSubmersions => {
            let (f, g) = boundary_instance(rng, BoundaryFormula::TwoSubmersions)?;
            vec![f, g]
        }
        Swap => {
            let (f, g) = random::transverse_pair(rng, 6);
            vec![f, g]
        }
        Associativity => {
            let (ym, zm) = (random::model(rng, 2), random::model(rng, 2));
            let w = random::submersion_source(rng, zm, 1);
            let v = random::submersion_source(rng, ym, 1);
            let d = random::submersion(rng, v, ym)?;
            let e = random::germ(rng, w, ym);
            let f = random::submersion(rng, w, zm)?;
            let gs = random::model(rng, 2);
            let g = random::germ(rng, gs, zm);
            vec![d, e, f, g]
        }
        ProductTarget => {
            let (ym, zm) = (random::model(rng, 2), random::model(rng, 2));
            let v = random::model(rng, 2);
            let d = random::germ(rng, v, ym);
            let e = random::germ(rng, v, zm);
            let (fs, gs) = (random::submersion_source(rng, ym, 1), random::submersion_source(rng, zm, 1));
            let f = random::submersion(rng, fs, ym)?;
            let g = random::submersion(rng, gs, zm)?;
            vec![d, e, f, g]
        }
        PointBase | ProductSwap => {
            let (x, y) = (random::model(rng, 3), random::model(rng, 3));
            return Some(SignInstance {
                maps: vec![CornerMapGerm::terminal(x), CornerMapGerm::terminal(y)],
                signs: signs2,
            });
        }
        ProjectionFibre => {
            let ms: Vec<CornerMapGerm> = (0..3).map(|_| CornerMapGerm::terminal(random::model(rng, 2))).collect();
            return Some(SignInstance { maps: ms, signs: signs3 });
        }
    };
    let signs = if maps.len() == 4 { signs5 } else { signs3 };
    Some(SignInstance { maps, signs })
}

pub fn signs(opts: SuiteOptions) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("signs");
    let proj_dim = opts.max_dim.min(2);
    for which in SignIdentity::ALL {
        for inst in projection_instances(which, proj_dim) {
            rep.cases += 1;
            let r = verify_sign_identity(which, &inst)?;
            rep.record(&format!("projection {which}"), r.holds(), || format!("{:?} {:?}", r.checks, r.problems));
        }
    }
    let mut rng = random::rng(opts.seed);
    for which in SignIdentity::ALL {
        let mut found = 0;
        for _ in 0..opts.cases * 20 {
            if found == opts.cases {
                break;
            }
            let Some(inst) = random_sign_instance(&mut rng, which) else { continue };
            found += 1;
            rep.cases += 1;
            let r = verify_sign_identity(which, &inst)?;
            rep.record(&format!("random {which}"), r.holds(), || {
                format!("{:?}: {:?} {:?}", inst.maps, r.checks, r.problems)
            });
        }
        rep.record(&format!("random {which} instances"), found == opts.cases, || format!("only {found}"));
    }
    for _ in 0..opts.cases {
        let (f, g) = random::transverse_pair(&mut rng, 6);
        let l = fibre_product(&f, &g)?;
        let (ox, oy, oz) = (random::orientation(&mut rng), random::orientation(&mut rng), random::orientation(&mut rng));
        let a = fibre_product_orientation_with(&f, &g, ox, oy, oz, &l, Splitting::Leftmost)?;
        let b = fibre_product_orientation_with(&f, &g, ox, oy, oz, &l, Splitting::Rightmost)?;
        rep.record("splitting independence", a == b, || format!("{f} / {g}"));
        let flipped = fibre_product_orientation_with(&f, &g, ox, -oy, oz, &l, Splitting::Leftmost)?;
        rep.record("reversing Y flips W", flipped == -a, || format!("{f} / {g}"));
    }
    for n in 0..=6 {
        for k in 0..=n {
            let m = ModelCorner { dim: n, depth: k };
            for i in m.faces() {
                let oracle = if i % 2 == 0 { 1 } else { -1 };
                rep.record("boundary sign oracle", boundary_orientation_sign(m, i)? == oracle, || format!("{m} face {i}"));
            }
            if k <= 4 {
                let base = iterated_boundary_sign(m, &(1..=k).collect::<Vec<_>>())?;
                for p in permutations(k) {
                    let faces: Vec<usize> = p.iter().map(|i| i + 1).collect();
                    let s = iterated_boundary_sign(m, &faces)?;
                    rep.record("face reordering acts by sign", s == base * permutation_sign(&p), || {
                        format!("{m} order {faces:?}")
                    });
                }
            }
        }
    }
    Ok(rep)
}

pub fn complex() -> SuiteReport {
    let mut rep = SuiteReport::new("complex");
    for (name, c) in corpus::all() {
        rep.cases += 1;
        rep.record("valid", c.validate().is_ok(), || name.into());
        let cl = c.classify();
        let chain = (cl.embedded_corners.is_none() || cl.with_faces) && (!cl.with_faces || cl.plain);
        rep.record("implication chain", chain, || name.into());
        let bg = c.boundary_graph();
        let sums = bg.multiplicity.iter().zip(&c.charts).all(|(m, ch)| m.values().sum::<usize>() == ch.depth);
        rep.record("multiplicities sum to depth", sums, || name.into());
        if let Some(w) = &cl.angle_witness {
            let injective = c.charts.iter().enumerate().all(|(ch, m)| {
                w.iter().all(|part| {
                    m.faces().filter(|&i| part.contains(&bg.component_of((ch, i)))).count() <= 1
                })
            });
            rep.record("witness parts are injective", injective, || name.into());
        }
        let bb = c.boundary_complex().boundary_complex();
        let pairs: usize = c.charts.iter().map(|m| binomial(m.depth, 2) as usize).sum();
        rep.record("second boundary doubles depth-2 points", bb.charts.len() == 2 * pairs, || name.into());
    }
    let expect = [("teardrop", None, false), ("square", Some(2), true), ("half-space", Some(1), true)];
    for (name, n, faces) in expect {
        let cl = corpus::by_name(name).expect("fixture").classify();
        rep.record("expected classification", cl.embedded_corners == n && cl.with_faces == faces, || {
            format!("{name}: {}", cl.summary())
        });
    }
    let (a, b) = (corpus::square(), corpus::teardrop());
    let p = a.product(&b);
    for k in 0..=4 {
        let expect: usize = (0..=k).map(|i| a.corners_count(i) * b.corners_count(k - i)).sum();
        rep.record("product corner counts", p.corners_count(k) == expect, || format!("k = {k}"));
    }
    rep
}

/// Boundary formulas that apply to a pair, with their verdicts.
pub fn boundary_verdicts(f: &CornerMapGerm, g: &CornerMapGerm) -> Result<Vec<(BoundaryFormula, bool)>> {
    Ok(boundary_formula_checks(f, g)?.into_iter().map(|r| (r.formula, r.holds())).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SuiteOptions {
        SuiteOptions { seed: 3, cases: 15, max_dim: 1 }
    }

    #[test]
    fn every_suite_runs() {
        for name in SUITES {
            let r = run_suite(name, small()).unwrap().unwrap();
            assert!(r.cases > 0, "{name}");
            let fails: Vec<_> = r.tally.iter().filter(|(k, t)| t.failed > 0 && k.as_str() != "condition (A)").collect();
            assert!(fails.is_empty(), "{r}");
        }
        assert!(run_suite("nope", small()).is_none());
    }

    #[test]
    fn products_small() {
        assert!(products(3).passed());
    }
}
