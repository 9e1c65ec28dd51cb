//! Corner strata of a fibre product against matched strata of the factors.

use super::construct::{fibre_product, FibreLedger};
use super::{check_cospan, is_transverse, matched_triples, strong_transversality_witness, Triple};
use crate::error::{Error, Result};
use crate::germ::CornerMapGerm;
use crate::model::{subsets, Label, ModelCorner};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CornerIdentityRow {
    pub i: usize,
    /// Strata of W cut out by `i` faces.
    pub lhs: Vec<Label>,
    /// Matched triples with `|A| + |B| - |L| = i`.
    pub rhs: Vec<Triple>,
    /// `Some` only for strongly transverse pairs: whether the registry map is a
    /// bijection `lhs -> rhs` preserving stratum models.
    pub bijection: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct CornerIdentityReport {
    pub w_model: ModelCorner,
    pub strongly_transverse: bool,
    pub rows: Vec<CornerIdentityRow>,
    /// Triples whose restricted maps fail to be transverse.
    pub non_transverse_triples: Vec<Triple>,
    /// Triples with `|A| + |B| < |L|`.
    pub negative_triples: Vec<Triple>,
    pub witness: Option<Triple>,
}

impl CornerIdentityReport {
    pub fn holds(&self) -> bool {
        self.non_transverse_triples.is_empty()
            && self.negative_triples.is_empty()
            && self.rows.iter().all(|r| r.bijection == Some(true))
    }

    pub fn row(&self, i: usize) -> Option<&CornerIdentityRow> {
        self.rows.iter().find(|r| r.i == i)
    }
}

fn restricted_pair(f: &CornerMapGerm, g: &CornerMapGerm, t: &Triple) -> Result<(CornerMapGerm, CornerMapGerm)> {
    Ok((f.corner_map(&t.a)?.restricted, g.corner_map(&t.b)?.restricted))
}

/// Sends the W stratum `s` to the triple of faces its registry entries come from.
fn registry_image(ledger: &FibreLedger, f: &CornerMapGerm, s: &Label) -> Triple {
    let a = ledger.pi_x.corner_label(s);
    let b = ledger.pi_y.corner_label(s);
    let l = f.corner_label(&a);
    Triple { a, b, l }
}

fn bijection_holds(f: &CornerMapGerm, g: &CornerMapGerm, ledger: &FibreLedger, row: &CornerIdentityRow) -> Result<bool> {
    if row.lhs.len() != row.rhs.len() {
        return Ok(false);
    }
    let mut seen = Vec::new();
    for s in &row.lhs {
        let t = registry_image(ledger, f, s);
        if g.corner_label(&t.b) != t.l || !row.rhs.contains(&t) || seen.contains(&t) {
            return Ok(false);
        }
        let (fa, gb) = restricted_pair(f, g, &t)?;
        if fibre_product(&fa, &gb)?.w_model != ledger.w_model.stratum_model(row.i) {
            return Ok(false);
        }
        seen.push(t);
    }
    Ok(true)
}

pub fn corner_identity_check(f: &CornerMapGerm, g: &CornerMapGerm) -> Result<CornerIdentityReport> {
    check_cospan(f, g)?;
    if !is_transverse(f, g)? {
        return Err(Error::NotTransverse);
    }
    let ledger = fibre_product(f, g)?;
    let triples = matched_triples(f, g)?;
    let witness = strong_transversality_witness(f, g)?;
    let strongly = witness.is_none();

    let mut non_transverse_triples = Vec::new();
    let mut negative_triples = Vec::new();
    for t in &triples {
        if t.index() < 0 {
            negative_triples.push(t.clone());
            continue;
        }
        let (fa, gb) = restricted_pair(f, g, t)?;
        if !is_transverse(&fa, &gb)? {
            non_transverse_triples.push(t.clone());
        }
    }

    let top = triples.iter().map(|t| t.index().max(0) as usize).max().unwrap_or(0).max(ledger.w_model.depth);
    let mut rows = Vec::new();
    for i in 0..=top {
        let lhs = if i <= ledger.w_model.depth { subsets(ledger.w_model.depth, i) } else { Vec::new() };
        let rhs: Vec<Triple> = triples.iter().filter(|t| t.index() == i as isize).cloned().collect();
        let mut row = CornerIdentityRow { i, lhs, rhs, bijection: None };
        if strongly {
            row.bijection = Some(bijection_holds(f, g, &ledger, &row)?);
        }
        rows.push(row);
    }
    Ok(CornerIdentityReport {
        w_model: ledger.w_model,
        strongly_transverse: strongly,
        rows,
        non_transverse_triples,
        negative_triples,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::super::tests::{germ, mc, skew_pair};
    use super::*;

    #[test]
    fn skew_pair_fails_at_zero() {
        let (f, g) = skew_pair();
        let r = corner_identity_check(&f, &g).unwrap();
        assert!(!r.strongly_transverse);
        let row0 = r.row(0).unwrap();
        assert_eq!(row0.lhs.len(), 1);
        assert_eq!(row0.rhs.len(), 2);
        for i in 1..r.rows.len() {
            assert!(r.rows[i].lhs.is_empty() && r.rows[i].rhs.is_empty());
        }
        assert_eq!(r.witness.as_ref().unwrap().l, Label::from([1, 2]));
        assert!(!r.holds());
    }

    #[test]
    fn diagonal_of_half_line() {
        let id = CornerMapGerm::identity(mc(1, 1));
        let r = corner_identity_check(&id, &id).unwrap();
        assert!(r.holds());
        assert_eq!(r.rows.len(), 2);
        assert_eq!(r.rows[1].rhs, vec![Triple { a: Label::from([1]), b: Label::from([1]), l: Label::from([1]) }]);
    }

    #[test]
    fn product_of_corners() {
        let x = germ((2, 2), (0, 0), &[], &[]);
        let y = germ((1, 1), (0, 0), &[], &[]);
        let r = corner_identity_check(&x, &y).unwrap();
        assert_eq!(r.w_model, mc(3, 3));
        assert!(r.holds());
        assert_eq!(r.row(2).unwrap().lhs.len(), 3);
    }
}
