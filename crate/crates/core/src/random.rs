//! Seeded generators for germs, cospans and cones.
//!
//! Everything is drawn from `ChaCha8Rng::seed_from_u64(seed)`, so a seed fixes
//! every generated object across platforms.

use crate::fibre::{is_transverse, FibreLedger};
use crate::germ::{compose, CornerMapGerm};
use crate::linalg::{q, qi, Matrix, Q};
use crate::model::ModelCorner;
use num::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

pub type SuiteRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SuiteRng {
    ChaCha8Rng::seed_from_u64(seed)
}

const FLAT_PROBABILITY: f64 = 0.3;

pub fn model(rng: &mut SuiteRng, max_dim: usize) -> ModelCorner {
    let n = rng.gen_range(0..=max_dim);
    let k = rng.gen_range(0..=n);
    ModelCorner { dim: n, depth: k }
}

fn lambda(rng: &mut SuiteRng) -> Q {
    [qi(1), qi(2), q(1, 2), qi(3)].choose(rng).expect("nonempty").clone()
}

fn entry(rng: &mut SuiteRng) -> Q {
    [qi(-2), qi(-1), qi(0), qi(0), qi(1), qi(2), q(1, 2), q(-1, 2)].choose(rng).expect("nonempty").clone()
}

fn free_row(rng: &mut SuiteRng, m: usize) -> Vec<Q> {
    (0..m).map(|_| entry(rng)).collect()
}

fn unit_row(m: usize, i: usize, l: Q) -> Vec<Q> {
    let mut r = vec![Q::zero(); m];
    r[i - 1] = l;
    r
}

fn assemble(s: ModelCorner, t: ModelCorner, transfer: BTreeMap<usize, usize>, rng: &mut SuiteRng) -> CornerMapGerm {
    let rows = (1..=t.dim)
        .map(|j| match transfer.get(&j) {
            Some(&i) => unit_row(s.dim, i, lambda(rng)),
            None if j <= t.depth => vec![Q::zero(); s.dim],
            None => free_row(rng, s.dim),
        })
        .collect();
    CornerMapGerm::new(s, t, transfer, Matrix::from_rows(s.dim, rows)).expect("generated germ is valid")
}

/// Each target face is flat with probability 0.3, else transfers to a random source face.
pub fn germ(rng: &mut SuiteRng, s: ModelCorner, t: ModelCorner) -> CornerMapGerm {
    let mut transfer = BTreeMap::new();
    for j in t.faces() {
        if s.depth > 0 && !rng.gen_bool(FLAT_PROBABILITY) {
            transfer.insert(j, rng.gen_range(1..=s.depth));
        }
    }
    assemble(s, t, transfer, rng)
}

/// Every target face transfers, injectively; `None` if the source has too few faces.
pub fn b_submersive_germ(rng: &mut SuiteRng, s: ModelCorner, t: ModelCorner) -> Option<CornerMapGerm> {
    if s.depth < t.depth {
        return None;
    }
    let mut faces: Vec<usize> = s.faces().collect();
    faces.shuffle(rng);
    let transfer = t.faces().zip(faces).collect();
    Some(assemble(s, t, transfer, rng))
}

pub fn submersion(rng: &mut SuiteRng, s: ModelCorner, t: ModelCorner) -> Option<CornerMapGerm> {
    if s.depth < t.depth || s.dim - s.depth < t.dim - t.depth {
        return None;
    }
    (0..20).filter_map(|_| b_submersive_germ(rng, s, t)).find(|f| f.is_submersion())
}

/// A source model admitting a submersion onto `t`.
pub fn submersion_source(rng: &mut SuiteRng, t: ModelCorner, extra: usize) -> ModelCorner {
    let more_faces = rng.gen_range(0..=extra);
    let more_interior = rng.gen_range(0..=extra - more_faces);
    ModelCorner { dim: t.dim + more_faces + more_interior, depth: t.depth + more_faces }
}

/// `f: X -> Y`, `g: Y -> Z` with every dimension at most `max_dim`.
pub fn composable_pair(rng: &mut SuiteRng, max_dim: usize) -> (CornerMapGerm, CornerMapGerm) {
    let (x, y, z) = (model(rng, max_dim), model(rng, max_dim), model(rng, max_dim));
    (germ(rng, x, y), germ(rng, y, z))
}

/// A random cospan `X -> Z <- Y`; not necessarily transverse.
pub fn cospan(rng: &mut SuiteRng, max_dim: usize) -> (CornerMapGerm, CornerMapGerm) {
    let z = model(rng, max_dim);
    let (x, y) = (model(rng, max_dim), model(rng, max_dim));
    (germ(rng, x, z), germ(rng, y, z))
}

/// Draws cospans until one is transverse with `dim X + dim Y <= max_total`.
pub fn transverse_pair(rng: &mut SuiteRng, max_total: usize) -> (CornerMapGerm, CornerMapGerm) {
    loop {
        let (f, g) = cospan(rng, 3);
        if f.source().dim + g.source().dim <= max_total && is_transverse(&f, &g).expect("cospan") {
            return (f, g);
        }
    }
}

/// A cone over the cospan factoring through the fibre product, with the germ it factors through.
pub fn cone(rng: &mut SuiteRng, ledger: &FibreLedger, max_dim: usize) -> (CornerMapGerm, CornerMapGerm, CornerMapGerm) {
    let v = model(rng, max_dim);
    let h = germ(rng, v, ledger.w_model);
    let h1 = compose(&ledger.pi_x, &h).expect("composable");
    let h2 = compose(&ledger.pi_y, &h).expect("composable");
    (h, h1, h2)
}

pub fn orientation(rng: &mut SuiteRng) -> i8 {
    if rng.gen_bool(0.5) {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let a = composable_pair(&mut rng(7), 4);
        let b = composable_pair(&mut rng(7), 4);
        assert_eq!(a, b);
    }

    #[test]
    fn submersions_are_submersions() {
        let mut r = rng(1);
        for _ in 0..50 {
            let t = model(&mut r, 2);
            let s = submersion_source(&mut r, t, 2);
            if let Some(f) = submersion(&mut r, s, t) {
                assert!(f.is_submersion());
            }
        }
    }
}
