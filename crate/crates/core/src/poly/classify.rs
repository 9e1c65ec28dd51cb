//! Classification of polynomial maps at the origin.

use super::Poly;
use crate::error::{Error, Result};
use crate::germ::CornerMapGerm;
use crate::linalg::{fmt_q, q, Matrix, Q};
use crate::model::{Label, ModelCorner};
use num::{One, Signed, Zero};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMap {
    source: ModelCorner,
    target: ModelCorner,
    components: Vec<Poly>,
}

impl PolyMap {
    pub fn new(source: ModelCorner, target: ModelCorner, components: Vec<Poly>) -> Result<Self> {
        if components.len() != target.dim {
            return Err(Error::InvalidPolyMap(format!(
                "{} components for a target of dimension {}",
                components.len(),
                target.dim
            )));
        }
        if let Some(c) = components.iter().find(|c| c.nvars() != source.dim) {
            return Err(Error::InvalidPolyMap(format!(
                "component {c} has {} variables, source has dimension {}",
                c.nvars(),
                source.dim
            )));
        }
        if let Some(j) = (0..target.depth).find(|&j| !components[j].constant_term().is_zero()) {
            return Err(Error::InvalidPolyMap(format!(
                "component {} does not vanish at the origin",
                j + 1
            )));
        }
        Ok(PolyMap { source, target, components })
    }

    pub fn parse(source: ModelCorner, target: ModelCorner, components: &[&str]) -> Result<Self> {
        let polys = components
            .iter()
            .map(|s| super::parse_poly(s, source.dim))
            .collect::<Result<Vec<_>>>()?;
        PolyMap::new(source, target, polys)
    }

    pub fn identity(m: ModelCorner) -> Self {
        PolyMap { source: m, target: m, components: (1..=m.dim).map(|i| Poly::var(m.dim, i)).collect() }
    }

    pub fn source(&self) -> ModelCorner {
        self.source
    }

    pub fn target(&self) -> ModelCorner {
        self.target
    }

    pub fn components(&self) -> &[Poly] {
        &self.components
    }

    pub fn jacobian_at_origin(&self) -> Matrix {
        let m = self.source.dim;
        Matrix::from_rows(
            m,
            self.components.iter().map(|c| (1..=m).map(|i| c.linear_coefficient(i)).collect()).collect(),
        )
    }
}

/// A map whose boundary pullbacks are positive units times source monomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BMapGerm {
    pub source: ModelCorner,
    pub target: ModelCorner,
    /// Row `j-1` holds the exponents of target face `j` (zero for flat rows).
    pub exponents: Vec<Vec<u32>>,
    pub flat_rows: Label,
    /// Value at the origin of the unit cofactor, per non-flat row.
    pub units: BTreeMap<usize, Q>,
    pub jacobian: Matrix,
}

impl BMapGerm {
    pub fn describe_exponents(&self) -> String {
        let rows: Vec<String> = (1..=self.target.depth)
            .map(|j| {
                if self.flat_rows.contains(j) {
                    "flat".to_string()
                } else {
                    let e = &self.exponents[j - 1];
                    if e.len() == 1 {
                        e[0].to_string()
                    } else {
                        let parts: Vec<String> = e.iter().map(|x| x.to_string()).collect();
                        format!("({})", parts.join(","))
                    }
                }
            })
            .collect();
        rows.join("; ")
    }

    pub fn describe_units(&self) -> String {
        let parts: Vec<String> = self.units.iter().map(|(j, u)| format!("{j}:{}", fmt_q(u))).collect();
        parts.join(", ")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Classification {
    /// A boundary component goes negative at the recorded point.
    NotIntoModel { row: usize, witness: Vec<Q> },
    /// Lands in the model but some boundary pullback is not of b-map form.
    WeaklySmoothOnly { failing_rows: Vec<usize> },
    BMap(BMapGerm),
    JoyceSmooth(CornerMapGerm),
}

impl Classification {
    pub fn name(&self) -> &'static str {
        match self {
            Classification::NotIntoModel { .. } => "not into model",
            Classification::WeaklySmoothOnly { .. } => "weakly smooth only",
            Classification::BMap(_) => "b-map",
            Classification::JoyceSmooth(_) => "smooth",
        }
    }

    pub fn is_weakly_smooth(&self) -> bool {
        !matches!(self, Classification::NotIntoModel { .. })
    }

    pub fn is_b_map(&self) -> bool {
        matches!(self, Classification::BMap(_) | Classification::JoyceSmooth(_))
    }

    pub fn is_smooth(&self) -> bool {
        matches!(self, Classification::JoyceSmooth(_))
    }
}

enum Row {
    Flat,
    B { e: Vec<u32>, unit: Q },
    Fail,
}

fn classify_row(q: &Poly, a: usize) -> Row {
    let Some(e) = q.content() else {
        return Row::Flat;
    };
    let unit = q.div_monomial(&e).constant_term();
    if unit.is_positive() && e[a..].iter().all(|&x| x == 0) {
        Row::B { e, unit }
    } else {
        Row::Fail
    }
}

/// Exponent data of a map all of whose boundary rows are b-map rows.
pub fn b_map_data(map: &PolyMap) -> Option<BMapGerm> {
    let (a, c) = (map.source.depth, map.target.depth);
    let mut exponents = Vec::new();
    let mut flat_rows = Label::empty();
    let mut units = BTreeMap::new();
    for j in 1..=c {
        match classify_row(&map.components[j - 1], a) {
            Row::Flat => {
                flat_rows.insert(j);
                exponents.push(vec![0; a]);
            }
            Row::B { e, unit } => {
                exponents.push(e[..a].to_vec());
                units.insert(j, unit);
            }
            Row::Fail => return None,
        }
    }
    Some(BMapGerm {
        source: map.source,
        target: map.target,
        exponents,
        flat_rows,
        units,
        jacobian: map.jacobian_at_origin(),
    })
}

/// Nonnegative coefficients, and interior variables only to even powers.
fn nonnegativity_certificate(q: &Poly, a: usize) -> bool {
    q.coefficients_nonnegative() && q.terms().all(|(e, _)| e.0[a..].iter().all(|k| k % 2 == 0))
}

const GRID_BUDGET: usize = 20_000;

/// Deterministic sample of the model near the origin: boundary coordinates
/// from `{0} ∪ {ε/2^t}`, interior ones from `{0} ∪ {±ε/2^t}`, `ε = 1/1024`.
/// The number of scales shrinks until the grid fits the budget.
fn sample_grid(m: ModelCorner) -> Vec<Vec<Q>> {
    let mut scales = 3usize;
    let size = |s: usize| (s + 1).pow(m.depth as u32) * (2 * s + 1).pow((m.dim - m.depth) as u32);
    while scales > 1 && size(scales) > GRID_BUDGET {
        scales -= 1;
    }
    let eps = q(1, 1024);
    let pos: Vec<Q> = (0..scales).map(|t| &eps / Q::from_integer((1i64 << t).into())).collect();
    let mut axes: Vec<Vec<Q>> = Vec::new();
    for i in 0..m.dim {
        let mut vals = vec![Q::zero()];
        vals.extend(pos.iter().cloned());
        if i >= m.depth {
            vals.extend(pos.iter().map(|v| -v));
        }
        axes.push(vals);
    }
    let mut pts: Vec<Vec<Q>> = vec![vec![]];
    for axis in axes {
        pts = pts
            .into_iter()
            .flat_map(|p| {
                axis.iter().map(move |v| {
                    let mut p = p.clone();
                    p.push(v.clone());
                    p
                })
            })
            .collect();
    }
    pts
}

pub fn classify_at_origin(map: &PolyMap) -> Classification {
    let (a, c) = (map.source.depth, map.target.depth);
    let rows: Vec<Row> = map.components[..c].iter().map(|q| classify_row(q, a)).collect();
    let failing: Vec<usize> =
        rows.iter().enumerate().filter(|(_, r)| matches!(r, Row::Fail)).map(|(j, _)| j + 1).collect();
    if !failing.is_empty() {
        let uncertified: Vec<usize> = failing
            .iter()
            .copied()
            .filter(|&j| !nonnegativity_certificate(&map.components[j - 1], a))
            .collect();
        if !uncertified.is_empty() {
            for p in sample_grid(map.source) {
                for &j in &uncertified {
                    if map.components[j - 1].eval(&p).is_negative() {
                        return Classification::NotIntoModel { row: j, witness: p };
                    }
                }
            }
        }
        return Classification::WeaklySmoothOnly { failing_rows: failing };
    }
    let smooth = rows.iter().all(|r| match r {
        Row::B { e, .. } => e.iter().sum::<u32>() == 1,
        _ => true,
    });
    if smooth {
        let transfer = rows
            .iter()
            .enumerate()
            .filter_map(|(j, r)| match r {
                Row::B { e, .. } => Some((j + 1, e.iter().position(|&x| x == 1).unwrap() + 1)),
                _ => None,
            })
            .collect();
        let germ = CornerMapGerm::new(map.source, map.target, transfer, map.jacobian_at_origin())
            .expect("unit exponent rows give valid germ rows");
        Classification::JoyceSmooth(germ)
    } else {
        Classification::BMap(b_map_data(map).expect("all rows passed the b-map test"))
    }
}

pub fn germ_of(map: &PolyMap) -> Result<CornerMapGerm> {
    match classify_at_origin(map) {
        Classification::JoyceSmooth(g) => Ok(g),
        _ => Err(Error::NotJoyceSmooth),
    }
}

/// `g ∘ f` by substitution.
pub fn compose_poly(g: &PolyMap, f: &PolyMap) -> Result<PolyMap> {
    if f.target != g.source {
        return Err(Error::ModelMismatch(format!(
            "cannot compose: f lands in {}, g starts at {}",
            f.target, g.source
        )));
    }
    let comps = g.components.iter().map(|gk| gk.substitute(&f.components, f.source.dim)).collect();
    PolyMap::new(f.source, g.target, comps)
}

impl std::fmt::Display for PolyMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.components.iter().map(|c| c.to_string()).collect();
        write!(f, "{} -> {}: ({})", self.source, self.target, parts.join(", "))
    }
}

impl BMapGerm {
    /// Rebuilds `x^e · u` for row `j` from the recorded exponents and checks
    /// it against the component.
    pub fn reproduces_content(&self, map: &PolyMap, j: usize) -> bool {
        let q = &map.components()[j - 1];
        if self.flat_rows.contains(j) {
            return q.is_zero();
        }
        let mut e = self.exponents[j - 1].clone();
        e.resize(self.source.dim, 0);
        let u = q.div_monomial(&e);
        let back = &Poly::monomial(e.clone(), Q::one()) * &u;
        back == *q && q.content() == Some(e) && u.constant_term() == self.units[&j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::qi;

    fn mc(n: usize, k: usize) -> ModelCorner {
        ModelCorner::new(n, k).unwrap()
    }

    #[test]
    fn square_is_b_map() {
        let f = PolyMap::parse(mc(1, 1), mc(1, 1), &["x1^2"]).unwrap();
        match classify_at_origin(&f) {
            Classification::BMap(b) => assert_eq!(b.exponents, vec![vec![2]]),
            other => panic!("{other:?}"),
        }
        // on the whole line the source coordinate is not a boundary coordinate
        let g = PolyMap::parse(mc(1, 0), mc(1, 1), &["x1^2"]).unwrap();
        assert!(matches!(classify_at_origin(&g), Classification::WeaklySmoothOnly { .. }));
    }

    #[test]
    fn sum_is_weakly_smooth_only() {
        let f = PolyMap::parse(mc(2, 2), mc(1, 1), &["x1 + x2"]).unwrap();
        assert_eq!(classify_at_origin(&f), Classification::WeaklySmoothOnly { failing_rows: vec![1] });
    }

    #[test]
    fn product_has_exponent_row() {
        let f = PolyMap::parse(mc(2, 2), mc(1, 1), &["x1*x2"]).unwrap();
        match classify_at_origin(&f) {
            Classification::BMap(b) => {
                assert_eq!(b.exponents, vec![vec![1, 1]]);
                assert!(b.reproduces_content(&f, 1));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn diagonal_lines_are_smooth() {
        let f = PolyMap::parse(mc(1, 1), mc(2, 2), &["x1", "2*x1"]).unwrap();
        let g = germ_of(&f).unwrap();
        assert_eq!(g.pi(1), Some(1));
        assert_eq!(g.pi(2), Some(1));
        assert_eq!(g.lambda(2), Some(qi(2)));
        let h = germ_of(&PolyMap::parse(mc(1, 1), mc(2, 2), &["2*x1", "x1"]).unwrap()).unwrap();
        assert_eq!(h.lambda(1), Some(qi(2)));
        assert_eq!(h.lambda(2), Some(qi(1)));
    }

    #[test]
    fn inclusion_and_identity() {
        let inc = germ_of(&PolyMap::parse(mc(1, 1), mc(1, 0), &["x1"]).unwrap()).unwrap();
        assert!(inc.transfer().is_empty());
        assert_eq!(inc.jacobian(), &Matrix::from_i64(1, &[&[1]]));
        assert!(inc.is_immersion() && !inc.is_submersion());
        let m = mc(3, 2);
        assert_eq!(germ_of(&PolyMap::identity(m)).unwrap(), CornerMapGerm::identity(m));
    }

    #[test]
    fn negativity_detected() {
        let f = PolyMap::parse(mc(2, 1), mc(1, 1), &["x1 + x2"]).unwrap();
        match classify_at_origin(&f) {
            Classification::NotIntoModel { row, witness } => {
                assert_eq!(row, 1);
                assert!(f.components()[0].eval(&witness).is_negative());
            }
            other => panic!("{other:?}"),
        }
        let g = PolyMap::parse(mc(1, 1), mc(1, 1), &["x1 - x1^2"]).unwrap();
        assert!(g.components()[0].eval(&[q(1, 1024)]).is_positive());
        assert!(matches!(classify_at_origin(&g), Classification::BMap(_) | Classification::JoyceSmooth(_)));
    }

    #[test]
    fn invariant_enforced() {
        assert!(PolyMap::parse(mc(1, 1), mc(1, 1), &["x1 + 1"]).is_err());
        assert!(PolyMap::parse(mc(1, 1), mc(1, 0), &["x1 + 1"]).is_ok());
        assert!(PolyMap::parse(mc(1, 1), mc(2, 1), &["x1"]).is_err());
    }

    #[test]
    fn composition_through_a_point() {
        let f = PolyMap::parse(mc(1, 0), mc(0, 0), &[]).unwrap();
        let g = PolyMap::parse(mc(0, 0), mc(2, 1), &["0", "3"]).unwrap();
        let h = compose_poly(&g, &f).unwrap();
        assert_eq!(h.source(), mc(1, 0));
        assert_eq!(h.components()[1].constant_term(), qi(3));
    }

    #[test]
    fn composition() {
        let f = PolyMap::parse(mc(1, 1), mc(1, 1), &["x1^3"]).unwrap();
        let g = PolyMap::parse(mc(1, 1), mc(1, 1), &["x1^2"]).unwrap();
        assert_eq!(compose_poly(&g, &f).unwrap().components()[0].to_string(), "x1^6");
        let id = PolyMap::identity(mc(1, 1));
        assert_eq!(compose_poly(&id, &f).unwrap(), f);
        assert!(compose_poly(&g, &PolyMap::identity(mc(2, 1))).is_err());
    }
}
