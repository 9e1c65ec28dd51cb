use corners::fibre::{
    fibre_product, interface_data, is_strongly_transverse, is_transverse, matched_triples, ClassKind, RegistryFace,
};
use corners::germ::{compose, product_germ, CornerMapGerm};
use corners::linalg::{fmt_q, Q};
use corners::model::{all_subsets, binomial, reindex, subsets, Label, ModelCorner};
use corners::orient::{fibre_product_orientation_with, OrientedModel, Splitting};
use corners::poly::{b_map_data, classify_at_origin, compose_poly, germ_of, Classification, PolyMap};
use corners::random::{self, SuiteRng};
use num::{Signed, Zero};
use proptest::prelude::*;
use rand::Rng;

fn model_strategy(max_dim: usize) -> impl Strategy<Value = ModelCorner> {
    (0..=max_dim).prop_flat_map(|n| (Just(n), 0..=n)).prop_map(|(n, k)| ModelCorner::new(n, k).unwrap())
}

fn falling(k: usize, j: usize) -> u128 {
    if j > k {
        0
    } else {
        ((k - j + 1)..=k).map(|x| x as u128).product()
    }
}

/// A polynomial map whose germ at 0 is `g`, with extra higher-order terms.
fn lift_to_poly(rng: &mut SuiteRng, g: &CornerMapGerm) -> PolyMap {
    let (s, t) = (g.source(), g.target());
    let var = |i: usize| format!("x{i}");
    let comps: Vec<String> = (1..=t.dim)
        .map(|j| {
            if let Some(i) = g.pi(j) {
                let lam = fmt_q(&g.lambda(j).unwrap());
                let k = rng.gen_range(1..=s.dim);
                let c = rng.gen_range(0..=2);
                format!("({lam})*{}*(1 + {c}*{})", var(i), var(k))
            } else if j <= t.depth {
                "0".to_string()
            } else {
                let mut terms: Vec<String> = (1..=s.dim)
                    .filter(|&c| !g.jacobian().get(j - 1, c - 1).is_zero())
                    .map(|c| format!("({})*{}", fmt_q(g.jacobian().get(j - 1, c - 1)), var(c)))
                    .collect();
                if s.dim > 0 && rng.gen_bool(0.5) {
                    terms.push(format!("{}*{}", var(rng.gen_range(1..=s.dim)), var(rng.gen_range(1..=s.dim))));
                }
                if terms.is_empty() {
                    "0".into()
                } else {
                    terms.join(" + ")
                }
            }
        })
        .collect();
    let refs: Vec<&str> = comps.iter().map(|c| c.as_str()).collect();
    PolyMap::parse(s, t, &refs).unwrap()
}

proptest! {
    #[test]
    fn product_corner_counts_convolve(x in model_strategy(6), y in model_strategy(6), j in 0usize..14) {
        let (p, _) = x.product(&y);
        let conv: u128 = (0..=j).map(|i| x.corners_count(i) * y.corners_count(j - i)).sum();
        prop_assert_eq!(p.corners_count(j), conv);
        let ordered: u128 =
            (0..=j).map(|i| binomial(j, i) * falling(x.depth, i) * falling(y.depth, j - i)).sum();
        prop_assert_eq!(p.iterated_boundary_count(j), ordered);
    }

    #[test]
    fn boundary_of_corners_is_corners_of_boundary(m in model_strategy(7), j in 0usize..7) {
        // pairs (face, j-subset of the other faces) against ((j+1)-subset, chosen element)
        let lhs: u128 = m.faces().map(|_| m.stratum_model(1).corners_count(j)).sum();
        prop_assert_eq!(lhs, (j as u128 + 1) * m.corners_count(j + 1));
    }

    #[test]
    fn strata_match_sign_patterns(m in model_strategy(6)) {
        for j in 0..=m.depth {
            let patterns = (0u32..1 << m.depth).filter(|s| s.count_ones() as usize == j).count();
            prop_assert_eq!(m.strata(j).len(), patterns);
            prop_assert!(m.strata(j).iter().all(|(_, s)| *s == m.stratum_model(j)));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn functor_laws(seed: u64) {
        let mut rng = random::rng(seed);
        let (f, g) = random::composable_pair(&mut rng, 4);
        let h = compose(&g, &f).unwrap();
        for a in all_subsets(f.source().depth) {
            let cf = f.corner_map(&a).unwrap();
            prop_assert_eq!(h.corner_map(&a).unwrap(), cf.then(&g.corner_map(&cf.target_label).unwrap()).unwrap());
            let hf = f.hat_corner_map(&a).unwrap();
            prop_assert_eq!(h.hat_corner_map(&a).unwrap(), hf.then(&g.hat_corner_map(&hf.target_label).unwrap()).unwrap());
            let id = CornerMapGerm::identity(f.source()).corner_map(&a).unwrap();
            prop_assert_eq!(&id.target_label, &a);
            prop_assert_eq!(&id.restricted, &CornerMapGerm::identity(f.source().stratum_model(a.len())));
        }
    }

    #[test]
    fn face_inclusions_relabel(m in model_strategy(5).prop_filter("has faces", |m| m.depth > 0), pick: usize) {
        let i = 1 + pick % m.depth;
        let inc = CornerMapGerm::face_inclusion(m, i).unwrap();
        for a in all_subsets(m.depth - 1) {
            let b = inc.corner_label(&a);
            prop_assert!(!b.contains(i));
            let back: Label = b.iter().map(|t| reindex(t, &Label::from([i]))).collect();
            prop_assert_eq!(back, a);
        }
    }

    #[test]
    fn products_act_factorwise(seed: u64) {
        let mut rng = random::rng(seed);
        let (f, _) = random::composable_pair(&mut rng, 3);
        let (g, _) = random::composable_pair(&mut rng, 3);
        let p = product_germ(&f, &g);
        let (a, c) = (f.source().depth, f.target().depth);
        for la in all_subsets(a) {
            for lb in all_subsets(g.source().depth) {
                let expect = f.corner_label(&la).union(&g.corner_label(&lb).shifted(c));
                prop_assert_eq!(p.corner_label(&la.union(&lb.shifted(a))), expect);
            }
        }
    }

    #[test]
    fn b_submersive_maps_do_not_deepen(seed: u64) {
        let mut rng = random::rng(seed);
        let t = random::model(&mut rng, 3);
        let s = random::submersion_source(&mut rng, t, 2);
        let f = random::b_submersive_germ(&mut rng, s, t).unwrap();
        prop_assert!(f.is_b_submersive());
        for a in all_subsets(s.depth) {
            prop_assert!(f.corner_map(&a).unwrap().target_label.len() <= a.len());
        }
    }

    #[test]
    fn submersions_have_normal_forms(seed: u64) {
        let mut rng = random::rng(seed);
        let (s, t) = (random::model(&mut rng, 4), random::model(&mut rng, 3));
        let f = random::germ(&mut rng, s, t);
        if f.is_submersion() {
            prop_assert!(f.is_b_submersive());
            let nf = f.submersion_normal_form().unwrap();
            prop_assert!(nf.witness.is_diffeomorphism());
            prop_assert_eq!(compose(&CornerMapGerm::first_projection(nf.y_model, nf.z_model), &nf.witness).unwrap(), f);
        }
    }

    #[test]
    fn inward_sector_is_preserved(seed: u64, v in proptest::collection::vec(-3i64..4, 4)) {
        let mut rng = random::rng(seed);
        let (s, t) = (random::model(&mut rng, 4), random::model(&mut rng, 3));
        let f = random::germ(&mut rng, s, t);
        let v: Vec<Q> = (0..s.dim).map(|i| {
            let x = Q::from_integer(v[i].into());
            if i < s.depth { x.abs() } else { x }
        }).collect();
        let w = f.jacobian().mul_vec(&v);
        prop_assert!(w[..t.depth].iter().all(|x| !x.is_negative()));
        prop_assert!(f.maps_inward(&v));
    }

    #[test]
    fn lowering_commutes_with_composition(seed: u64) {
        let mut rng = random::rng(seed);
        let (f, g) = random::composable_pair(&mut rng, 3);
        let (pf, pg) = (lift_to_poly(&mut rng, &f), lift_to_poly(&mut rng, &g));
        prop_assert_eq!(&germ_of(&pf).unwrap(), &f);
        let composite = compose_poly(&pg, &pf).map_err(|e| TestCaseError::fail(format!("{e}: {pf} then {pg}")))?;
        prop_assert_eq!(germ_of(&composite).unwrap(), compose(&g, &f).unwrap());
    }

    #[test]
    fn classifier_hierarchy(seed: u64) {
        let mut rng = random::rng(seed);
        let (s, t) = (random::model(&mut rng, 2), ModelCorner::new(1, 1).unwrap());
        let vars: Vec<String> = (1..=s.dim).map(|i| format!("x{i}")).collect();
        let mut terms = Vec::new();
        for _ in 0..rng.gen_range(1..=3) {
            if vars.is_empty() { break; }
            let c = rng.gen_range(1..=3);
            let a = &vars[rng.gen_range(0..vars.len())];
            let b = &vars[rng.gen_range(0..vars.len())];
            terms.push(match rng.gen_range(0..3) { 0 => format!("{c}*{a}"), 1 => format!("{c}*{a}*{b}"), _ => format!("{c}*{a}^2") });
        }
        let src = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
        let map = PolyMap::parse(s, t, &[src.as_str()]).unwrap();
        let c = classify_at_origin(&map);
        prop_assert!(!c.is_smooth() || c.is_b_map());
        prop_assert!(!c.is_b_map() || c.is_weakly_smooth());
        if let Classification::BMap(b) = &c {
            prop_assert!(b.reproduces_content(&map, 1));
            let data = b_map_data(&map);
            prop_assert_eq!(data.as_ref(), Some(b));
        }
    }

    #[test]
    fn fibre_product_invariants(seed: u64) {
        let mut rng = random::rng(seed);
        let (f, g) = random::transverse_pair(&mut rng, 6);
        let l = fibre_product(&f, &g).unwrap();
        prop_assert_eq!(l.w_model.dim + f.target().dim, f.source().dim + g.source().dim);
        prop_assert_eq!(l.registry.len(), l.expected_depth);
        prop_assert!(l.interface.verdicts.b && l.interface.verdicts.c && l.interface.verdicts.d);
        let (fx, gy) = (compose(&f, &l.pi_x).unwrap(), compose(&g, &l.pi_y).unwrap());
        prop_assert_eq!(fx, gy);
        for t in matched_triples(&f, &g).unwrap() {
            prop_assert!(t.a.len() + t.b.len() >= t.l.len());
            let (fa, gb) = (f.corner_map(&t.a).unwrap().restricted, g.corner_map(&t.b).unwrap().restricted);
            prop_assert!(is_transverse(&fa, &gb).unwrap());
        }
        let no_b = !l.interface.classes.iter().any(|e| e.kind == ClassKind::B);
        prop_assert_eq!(is_strongly_transverse(&f, &g).unwrap(), no_b);
        if no_b {
            let i = l.registry.iter().filter(|r| matches!(r, RegistryFace::X(_))).count();
            let ii = l.registry.iter().filter(|r| matches!(r, RegistryFace::Y(_))).count();
            let iii = l.registry.len() - i - ii;
            prop_assert_eq!(i + ii + iii + f.target().depth, f.source().depth + g.source().depth);
        }
        if l.interface.verdicts.a {
            prop_assert!(interface_data(&f, &g).is_ok());
        }
    }

    #[test]
    fn orientation_is_splitting_independent(seed: u64, ox: bool, oy: bool, oz: bool) {
        let s = |b: bool| if b { 1 } else { -1 };
        let mut rng = random::rng(seed);
        let (f, g) = random::transverse_pair(&mut rng, 6);
        let l = fibre_product(&f, &g).unwrap();
        let a = fibre_product_orientation_with(&f, &g, s(ox), s(oy), s(oz), &l, Splitting::Leftmost).unwrap();
        let b = fibre_product_orientation_with(&f, &g, s(ox), s(oy), s(oz), &l, Splitting::Rightmost).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn double_flip(m in model_strategy(5), o: bool) {
        let om = OrientedModel::new(m, if o { 1 } else { -1 }).unwrap();
        prop_assert_eq!(om.opposite().opposite(), om);
        prop_assert_ne!(om.opposite(), om);
    }
}

#[test]
fn subsets_are_lexicographic() {
    let s = subsets(4, 2);
    let v: Vec<Vec<usize>> = s.iter().map(|l| l.to_vec()).collect();
    let mut sorted = v.clone();
    sorted.sort();
    assert_eq!(v, sorted);
    assert_eq!(v.len(), 6);
}

#[test]
fn boundary_sign_identities_on_three_dimensional_factors() {
    use corners::orient::{projection_instances, verify_sign_identity, SignIdentity};
    for which in [
        SignIdentity::MinusBoundary,
        SignIdentity::BoundaryBoundarylessTarget,
        SignIdentity::BoundaryOneSubmersion,
        SignIdentity::BoundaryTwoSubmersions,
    ] {
        for inst in projection_instances(which, 3) {
            let r = verify_sign_identity(which, &inst).unwrap();
            assert!(r.holds(), "{which}: {:?} {:?}", r.checks, r.problems);
        }
    }
}
