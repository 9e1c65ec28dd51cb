//! Small complexes used as fixtures and examples.

use super::{CornerComplex, Gluing};
use crate::model::ModelCorner;

fn mc(n: usize, k: usize) -> ModelCorner {
    ModelCorner { dim: n, depth: k }
}

/// One corner chart whose two faces both run into the same edge chart.
pub fn teardrop() -> CornerComplex {
    CornerComplex {
        dim: 2,
        charts: vec![mc(2, 2), mc(2, 1)],
        gluings: vec![Gluing::new(0, 1, 1, 1), Gluing::new(0, 2, 1, 1)],
        overlaps: vec![(0, 1)],
    }
}

/// `n` corner charts in a cycle, face 2 of each running into face 1 of the next.
pub fn polygon(n: usize) -> CornerComplex {
    CornerComplex {
        dim: 2,
        charts: vec![mc(2, 2); n],
        gluings: (0..n).map(|c| Gluing::new(c, 2, (c + 1) % n, 1)).collect(),
        overlaps: Vec::new(),
    }
}

pub fn square() -> CornerComplex {
    polygon(4)
}

pub fn triangle() -> CornerComplex {
    polygon(3)
}

/// Two corners joined along both faces, like a lens.
pub fn bigon() -> CornerComplex {
    polygon(2)
}

pub fn half_space(n: usize) -> CornerComplex {
    CornerComplex { dim: n, charts: vec![mc(n, 1)], gluings: Vec::new(), overlaps: Vec::new() }
}

pub fn euclidean(n: usize) -> CornerComplex {
    CornerComplex { dim: n, charts: vec![mc(n, 0)], gluings: Vec::new(), overlaps: Vec::new() }
}

pub fn quadrant() -> CornerComplex {
    CornerComplex { dim: 2, charts: vec![mc(2, 2)], gluings: Vec::new(), overlaps: Vec::new() }
}

pub fn cube_corner() -> CornerComplex {
    CornerComplex { dim: 3, charts: vec![mc(3, 3)], gluings: Vec::new(), overlaps: Vec::new() }
}

/// Every named fixture, products included.
pub fn all() -> Vec<(&'static str, CornerComplex)> {
    vec![
        ("teardrop", teardrop()),
        ("square", square()),
        ("triangle", triangle()),
        ("bigon", bigon()),
        ("half-space", half_space(2)),
        ("euclidean", euclidean(2)),
        ("quadrant", quadrant()),
        ("cube-corner", cube_corner()),
        ("teardrop-x-half-line", teardrop().product(&half_space(1))),
        ("square-x-half-line", square().product(&half_space(1))),
        ("teardrop-x-teardrop", teardrop().product(&teardrop())),
        ("triangle-x-square", triangle().product(&square())),
    ]
}

pub fn by_name(name: &str) -> Option<CornerComplex> {
    all().into_iter().find(|(n, _)| *n == name).map(|(_, c)| c)
}
