//! Manifolds with corners presented as model charts glued along faces.
//!
//! Each chart is a neighbourhood of its deepest point. A gluing says that a
//! face of one chart continues into a face of another, so the boundary faces
//! of the whole space are the classes of `(chart, face)` pieces under gluing.
//! Only whole-face affine identifications are representable.

pub mod corpus;

use crate::error::{Error, Result};
use crate::linalg::{parse_q, Matrix};
use crate::model::{reindex, subsets, Label, ModelCorner};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// Affine identification `x -> A x + b` of face coordinates, as rational strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineMap {
    pub matrix: Vec<Vec<String>>,
    pub offset: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gluing {
    pub a: usize,
    pub face_a: usize,
    pub b: usize,
    pub face_b: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<AffineMap>,
}

impl Gluing {
    pub fn new(a: usize, face_a: usize, b: usize, face_b: usize) -> Self {
        Gluing { a, face_a, b, face_b, map: None }
    }

    /// The other end, if `(chart, face)` is one end of this gluing.
    fn partner(&self, chart: usize, face: usize) -> Option<(usize, usize)> {
        if (self.a, self.face_a) == (chart, face) {
            Some((self.b, self.face_b))
        } else if (self.b, self.face_b) == (chart, face) {
            Some((self.a, self.face_a))
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CornerComplex {
    pub dim: usize,
    pub charts: Vec<ModelCorner>,
    #[serde(default)]
    pub gluings: Vec<Gluing>,
    /// Pairs of charts whose interiors overlap.
    #[serde(default)]
    pub overlaps: Vec<(usize, usize)>,
}

/// A `(chart, face)` piece of the boundary.
pub type FacePiece = (usize, usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryGraph {
    /// Boundary components, each listed by its pieces.
    pub components: Vec<Vec<FacePiece>>,
    /// Pairs of components meeting at a depth-2 point; a component may meet itself.
    pub edges: Vec<(usize, usize)>,
    /// For each chart, how many of its faces lie in each component.
    pub multiplicity: Vec<BTreeMap<usize, usize>>,
}

impl BoundaryGraph {
    pub fn component_of(&self, piece: FacePiece) -> usize {
        self.components.iter().position(|c| c.contains(&piece)).expect("piece belongs to a component")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub plain: bool,
    pub with_faces: bool,
    /// Fewest parts in a decomposition of the boundary with injective parts.
    pub embedded_corners: Option<usize>,
    /// A decomposition realising `embedded_corners`, as lists of boundary components.
    pub angle_witness: Option<Vec<Vec<usize>>>,
}

impl Classification {
    pub fn summary(&self) -> String {
        match self.embedded_corners {
            Some(n) => format!("embedded corners, <{n}>-manifold"),
            None if self.with_faces => "manifold with faces".into(),
            None => "plain manifold with corners only".into(),
        }
    }
}

/// Two charts and the face pairs along which they are glued.
type Adjacency = (usize, usize, Vec<(usize, usize)>);

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        self.0[x] = r;
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        self.0[ra.max(rb)] = ra.min(rb);
    }

    fn groups(&mut self) -> Vec<Vec<usize>> {
        let mut m: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for x in 0..self.0.len() {
            let r = self.find(x);
            m.entry(r).or_default().push(x);
        }
        m.into_values().collect()
    }
}

impl CornerComplex {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidComplex(m));
        for (c, m) in self.charts.iter().enumerate() {
            if m.dim != self.dim {
                return bad(format!("chart {c} is {m}, expected dimension {}", self.dim));
            }
        }
        let mut ends = BTreeSet::new();
        for g in &self.gluings {
            for (c, i) in [(g.a, g.face_a), (g.b, g.face_b)] {
                let Some(m) = self.charts.get(c) else {
                    return bad(format!("gluing refers to missing chart {c}"));
                };
                if i == 0 || i > m.depth {
                    return bad(format!("chart {c} has no face {i}"));
                }
            }
            if (g.a, g.face_a) == (g.b, g.face_b) {
                return bad(format!("face {} of chart {} glued to itself", g.face_a, g.a));
            }
            let key = ((g.a, g.face_a).min((g.b, g.face_b)), (g.a, g.face_a).max((g.b, g.face_b)));
            if !ends.insert(key) {
                return bad(format!("gluing {key:?} listed twice"));
            }
            if let Some(map) = &g.map {
                let n = self.dim - 1;
                let rows: Option<Vec<Vec<_>>> =
                    map.matrix.iter().map(|r| r.iter().map(|s| parse_q(s)).collect()).collect();
                let Some(rows) = rows else { return bad("unparseable gluing map".into()) };
                if rows.len() != n || rows.iter().any(|r| r.len() != n) || map.offset.len() != n {
                    return bad(format!("gluing map must act on {n} face coordinates"));
                }
                if map.offset.iter().any(|s| parse_q(s).is_none()) {
                    return bad("unparseable gluing offset".into());
                }
                if Matrix::from_rows(n, rows).inverse().is_none() {
                    return bad("gluing map is not invertible".into());
                }
            }
        }
        for &(a, b) in &self.overlaps {
            if a >= self.charts.len() || b >= self.charts.len() {
                return bad(format!("overlap ({a}, {b}) refers to a missing chart"));
            }
        }
        Ok(())
    }

    pub fn max_depth(&self) -> usize {
        self.charts.iter().map(|m| m.depth).max().unwrap_or(0)
    }

    fn pieces(&self) -> Vec<FacePiece> {
        self.charts.iter().enumerate().flat_map(|(c, m)| m.faces().map(move |i| (c, i))).collect()
    }

    /// Faces not glued to anything.
    pub fn free_faces(&self) -> Vec<FacePiece> {
        self.pieces()
            .into_iter()
            .filter(|&(c, i)| self.gluings.iter().all(|g| g.partner(c, i).is_none()))
            .collect()
    }

    /// Connected components of the space, as sets of charts.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(self.charts.len());
        for &(a, b) in &self.overlaps {
            uf.union(a, b);
        }
        for g in &self.gluings {
            uf.union(g.a, g.b);
        }
        uf.groups()
    }

    pub fn boundary_graph(&self) -> BoundaryGraph {
        let pieces = self.pieces();
        let index: BTreeMap<FacePiece, usize> = pieces.iter().enumerate().map(|(k, p)| (*p, k)).collect();
        let mut uf = UnionFind::new(pieces.len());
        for g in &self.gluings {
            uf.union(index[&(g.a, g.face_a)], index[&(g.b, g.face_b)]);
        }
        let components: Vec<Vec<FacePiece>> =
            uf.groups().into_iter().map(|grp| grp.into_iter().map(|k| pieces[k]).collect()).collect();
        let comp_of = |p: FacePiece| components.iter().position(|c| c.contains(&p)).expect("piece is placed");
        let mut edges = BTreeSet::new();
        let mut multiplicity = Vec::new();
        for (c, m) in self.charts.iter().enumerate() {
            for pair in subsets(m.depth, 2) {
                let v = pair.to_vec();
                let (x, y) = (comp_of((c, v[0])), comp_of((c, v[1])));
                edges.insert((x.min(y), x.max(y)));
            }
            let mut mult = BTreeMap::new();
            for i in m.faces() {
                *mult.entry(comp_of((c, i))).or_insert(0) += 1;
            }
            multiplicity.push(mult);
        }
        BoundaryGraph { components, edges: edges.into_iter().collect(), multiplicity }
    }

    pub fn classify(&self) -> Classification {
        let bg = self.boundary_graph();
        let with_faces = bg.multiplicity.iter().all(|m| m.values().all(|&k| k == 1));
        if !with_faces {
            return Classification { plain: true, with_faces, embedded_corners: None, angle_witness: None };
        }
        let n = bg.components.len();
        let mut adj = vec![BTreeSet::new(); n];
        for &(x, y) in &bg.edges {
            adj[x].insert(y);
            adj[y].insert(x);
        }
        let colours = (0..=n).find_map(|k| colour(&adj, k)).expect("n colours always suffice");
        let parts = colours.iter().copied().max().map_or(0, |m| m + 1);
        let mut witness = vec![Vec::new(); parts];
        for (comp, &col) in colours.iter().enumerate() {
            witness[col].push(comp);
        }
        Classification { plain: true, with_faces, embedded_corners: Some(parts), angle_witness: Some(witness) }
    }

    /// Depth-`k` strata: one chart per `(chart, k faces)`, glued where every
    /// chosen face continues through gluings between the same two charts.
    pub fn corners_complex(&self, k: usize) -> CornerComplex {
        let mut pieces: Vec<(usize, Label)> = Vec::new();
        let mut charts = Vec::new();
        for (c, m) in self.charts.iter().enumerate() {
            if k <= m.depth {
                for s in subsets(m.depth, k) {
                    pieces.push((c, s));
                    charts.push(m.stratum_model(k));
                }
            }
        }
        let links = |c: usize, d: usize| -> Vec<(usize, usize)> {
            self.gluings
                .iter()
                .filter_map(|g| {
                    if g.a == c && g.b == d {
                        Some((g.face_a, g.face_b))
                    } else if g.b == c && g.a == d {
                        Some((g.face_b, g.face_a))
                    } else {
                        None
                    }
                })
                .collect()
        };
        let carry = |s: &Label, l: &[(usize, usize)]| -> Option<Label> {
            let mut out = Label::empty();
            for i in s.iter() {
                let targets: Vec<usize> = l.iter().filter(|(x, _)| *x == i).map(|(_, y)| *y).collect();
                if targets.len() != 1 || !out.insert(targets[0]) {
                    return None;
                }
            }
            Some(out)
        };
        let mut overlaps = Vec::new();
        let mut gluings = Vec::new();
        for (p, (c, s)) in pieces.iter().enumerate() {
            for (q, (d, t)) in pieces.iter().enumerate().skip(p + 1) {
                let l = links(*c, *d);
                if k == 0 {
                    if self.overlaps.contains(&(*c, *d)) || self.overlaps.contains(&(*d, *c)) || !l.is_empty() {
                        overlaps.push((p, q));
                    }
                    continue;
                }
                if carry(s, &l).as_ref() != Some(t) {
                    continue;
                }
                overlaps.push((p, q));
                for (i, j) in &l {
                    if !s.contains(*i) && !t.contains(*j) {
                        gluings.push(Gluing::new(p, reindex(*i, s), q, reindex(*j, t)));
                    }
                }
            }
        }
        CornerComplex { dim: self.dim - k.min(self.dim), charts, gluings, overlaps }
    }

    pub fn boundary_complex(&self) -> CornerComplex {
        self.corners_complex(1)
    }

    /// Number of connected pieces of the depth-`k` corners.
    pub fn corners_count(&self, k: usize) -> usize {
        let c = self.corners_complex(k);
        if c.charts.is_empty() {
            0
        } else {
            c.components().len()
        }
    }

    /// Pairs of distinct adjacent charts with the face gluings between them.
    fn adjacencies(&self) -> Vec<Adjacency> {
        let mut adj: BTreeMap<(usize, usize), Vec<(usize, usize)>> = BTreeMap::new();
        for &(a, b) in &self.overlaps {
            if a != b {
                adj.entry((a.min(b), a.max(b))).or_default();
            }
        }
        for g in &self.gluings {
            if g.a == g.b {
                continue;
            }
            let e = adj.entry((g.a.min(g.b), g.a.max(g.b))).or_default();
            e.push(if g.a < g.b { (g.face_a, g.face_b) } else { (g.face_b, g.face_a) });
        }
        adj.into_iter().map(|((a, b), v)| (a, b, v)).collect()
    }

    pub fn product(&self, other: &CornerComplex) -> CornerComplex {
        let nb = other.charts.len();
        let idx = |a: usize, b: usize| a * nb + b;
        let mut charts = Vec::new();
        for x in &self.charts {
            for y in &other.charts {
                charts.push(x.product(y).0);
            }
        }
        let mut glued: BTreeSet<(FacePiece, FacePiece)> = BTreeSet::new();
        let mut add = |p: FacePiece, q: FacePiece| {
            glued.insert((p.min(q), p.max(q)));
        };
        // a face of one factor continues across any adjacency of the other factor
        for (a, a2, pairs) in self.adjacencies() {
            for (b, y) in other.charts.iter().enumerate() {
                for &(i, i2) in &pairs {
                    add((idx(a, b), i), (idx(a2, b), i2));
                }
                for j in y.faces() {
                    add((idx(a, b), self.charts[a].depth + j), (idx(a2, b), self.charts[a2].depth + j));
                }
            }
        }
        for (b, b2, pairs) in other.adjacencies() {
            for (a, x) in self.charts.iter().enumerate() {
                for &(j, j2) in &pairs {
                    add((idx(a, b), x.depth + j), (idx(a, b2), x.depth + j2));
                }
                for i in x.faces() {
                    add((idx(a, b), i), (idx(a, b2), i));
                }
            }
        }
        for g in self.gluings.iter().filter(|g| g.a == g.b) {
            for b in 0..nb {
                add((idx(g.a, b), g.face_a), (idx(g.a, b), g.face_b));
            }
        }
        for g in other.gluings.iter().filter(|g| g.a == g.b) {
            for (a, x) in self.charts.iter().enumerate() {
                add((idx(a, g.a), x.depth + g.face_a), (idx(a, g.a), x.depth + g.face_b));
            }
        }
        let gluings = glued.into_iter().map(|((a, i), (b, j))| Gluing::new(a, i, b, j)).collect();
        let mut overlaps = Vec::new();
        for (p, q, _) in self.adjacencies() {
            for b in 0..nb {
                overlaps.push((idx(p, b), idx(q, b)));
            }
        }
        for (p, q, _) in other.adjacencies() {
            for a in 0..self.charts.len() {
                overlaps.push((idx(a, p), idx(a, q)));
            }
        }
        CornerComplex { dim: self.dim + other.dim, charts, gluings, overlaps }
    }
}

/// A proper colouring with at most `k` colours, smallest colours first.
fn colour(adj: &[BTreeSet<usize>], k: usize) -> Option<Vec<usize>> {
    fn go(v: usize, adj: &[BTreeSet<usize>], k: usize, out: &mut Vec<usize>) -> bool {
        if v == adj.len() {
            return true;
        }
        for c in 0..k {
            if adj[v].iter().any(|&u| u < v && out[u] == c) {
                continue;
            }
            out[v] = c;
            if go(v + 1, adj, k, out) {
                return true;
            }
        }
        false
    }
    if adj.iter().enumerate().any(|(v, a)| a.contains(&v)) {
        return None;
    }
    let mut out = vec![0; adj.len()];
    go(0, adj, k, &mut out).then_some(out)
}

#[cfg(test)]
mod tests {
    use super::corpus::*;
    use super::*;

    #[test]
    fn teardrop_is_plain_only() {
        let t = teardrop();
        t.validate().unwrap();
        let c = t.classify();
        assert!(c.plain && !c.with_faces && c.embedded_corners.is_none());
        let bg = t.boundary_graph();
        assert_eq!(bg.components.len(), 1);
        assert_eq!(bg.edges, vec![(0, 0)]);
        assert_eq!(bg.multiplicity[0][&0], 2);
    }

    #[test]
    fn teardrop_boundary_is_one_edge() {
        let b = teardrop().boundary_complex();
        assert_eq!(b.components().len(), 1);
        assert_eq!(b.free_faces().len(), 2);
        assert_eq!(teardrop().corners_count(2), 1);
    }

    #[test]
    fn square_has_two_colours() {
        let s = square();
        let c = s.classify();
        assert!(c.with_faces);
        assert_eq!(c.embedded_corners, Some(2));
        assert_eq!(c.angle_witness.unwrap(), vec![vec![0, 2], vec![1, 3]]);
        let bg = s.boundary_graph();
        assert_eq!(bg.components.len(), 4);
        assert_eq!(bg.edges.len(), 4);
        assert_eq!(s.corners_count(2), 4);
        assert_eq!(s.boundary_complex().components().len(), 4);
    }

    #[test]
    fn half_space_and_boundaryless() {
        assert_eq!(half_space(2).classify().embedded_corners, Some(1));
        let r = euclidean(3);
        assert_eq!(r.classify().embedded_corners, Some(0));
        assert!(r.boundary_complex().charts.is_empty());
        assert_eq!(r.corners_count(1), 0);
    }

    #[test]
    fn triangle_needs_three() {
        assert_eq!(triangle().classify().embedded_corners, Some(3));
    }

    #[test]
    fn second_boundary_counts_ordered_pairs() {
        for c in [teardrop(), square(), cube_corner()] {
            let depth2: usize = c.charts.iter().map(|m| subsets(m.depth, 2).len()).sum();
            let bb = c.boundary_complex().boundary_complex();
            let from_pairs = bb.charts.iter().filter(|m| m.dim + 2 == c.dim).count();
            assert_eq!(from_pairs, bb.charts.len());
            let ordered: usize = c.charts.iter().map(|m| m.depth * m.depth.saturating_sub(1)).sum();
            assert_eq!(bb.charts.len(), ordered);
            assert_eq!(ordered, 2 * depth2);
        }
    }

    #[test]
    fn product_counts_convolve() {
        let (a, b) = (square(), half_space(1));
        let p = a.product(&b);
        p.validate().unwrap();
        for k in 0..=3 {
            let expect: usize = (0..=k).map(|i| a.corners_count(i) * b.corners_count(k - i)).sum();
            assert_eq!(p.corners_count(k), expect, "k = {k}");
        }
    }

    #[test]
    fn validation_errors() {
        let mut t = teardrop();
        t.gluings.push(Gluing::new(0, 3, 1, 1));
        assert!(t.validate().is_err());
        let mut t = teardrop();
        t.gluings.push(Gluing::new(0, 1, 0, 1));
        assert!(t.validate().is_err());
    }

    #[test]
    fn json_round_trip() {
        let t = teardrop();
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(serde_json::from_str::<CornerComplex>(&s).unwrap(), t);
    }
}
