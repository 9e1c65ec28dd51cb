//! Boundary of a fibre product as a disjoint union of fibre products over faces.
//!
//! Each face `r` of W is matched against every term of a formula: the legs
//! `∂_r W -> X'` and `∂_r W -> Y'` are built from the projections, and the face
//! belongs to the term when the induced map into the term's fibre product is a
//! diffeomorphism. A formula holds when this matching is a bijection.

use super::construct::{check_universal_property, fibre_product, FibreLedger};
use super::{check_cospan, is_transverse};
use crate::error::{Error, Result};
use crate::germ::{compose, CornerMapGerm};
use crate::model::Label;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryFormula {
    /// `∂_-X ≅ X x_Y ∂Y` for a submersion `f: X -> Y`.
    MinusBoundaryOfSubmersion,
    /// Target without boundary: `∂W ≅ ∂X x_Z Y ⊔ X x_Z ∂Y`.
    BoundarylessTarget,
    /// `∂W ≅ ∂_+X x_Z Y ⊔ X x_Z ∂Y` for `f` a submersion.
    OneSubmersion,
    /// As `OneSubmersion` with `f` only b-submersive.
    OneBSubmersive,
    /// `∂W ≅ ∂_+X x_Z Y ⊔ X x_Z ∂_+Y ⊔ ∂_-X x_∂Z ∂_-Y` for two submersions.
    TwoSubmersions,
    /// As `TwoSubmersions` with both maps only b-submersive.
    TwoBSubmersive,
}

impl BoundaryFormula {
    pub const ALL: [BoundaryFormula; 6] = [
        BoundaryFormula::MinusBoundaryOfSubmersion,
        BoundaryFormula::BoundarylessTarget,
        BoundaryFormula::OneSubmersion,
        BoundaryFormula::OneBSubmersive,
        BoundaryFormula::TwoSubmersions,
        BoundaryFormula::TwoBSubmersive,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            BoundaryFormula::MinusBoundaryOfSubmersion => "minus-boundary",
            BoundaryFormula::BoundarylessTarget => "boundaryless-target",
            BoundaryFormula::OneSubmersion => "one-submersion",
            BoundaryFormula::OneBSubmersive => "one-b-submersive",
            BoundaryFormula::TwoSubmersions => "two-submersions",
            BoundaryFormula::TwoBSubmersive => "two-b-submersive",
        }
    }

    fn hypothesis(&self, f: &CornerMapGerm, g: &CornerMapGerm) -> Result<Option<String>> {
        let transverse = is_transverse(f, g)?;
        let missing = match self {
            BoundaryFormula::MinusBoundaryOfSubmersion => (!f.is_submersion()).then_some("f is not a submersion"),
            BoundaryFormula::BoundarylessTarget => {
                if f.target().depth != 0 {
                    Some("target has boundary")
                } else {
                    (!transverse).then_some("maps are not transverse")
                }
            }
            BoundaryFormula::OneSubmersion => (!f.is_submersion()).then_some("f is not a submersion"),
            BoundaryFormula::OneBSubmersive => {
                if !transverse {
                    Some("maps are not transverse")
                } else {
                    (!f.is_b_submersive()).then_some("f is not b-submersive")
                }
            }
            BoundaryFormula::TwoSubmersions => {
                (!(f.is_submersion() && g.is_submersion())).then_some("f and g are not both submersions")
            }
            BoundaryFormula::TwoBSubmersive => {
                if !transverse {
                    Some("maps are not transverse")
                } else {
                    (!(f.is_b_submersive() && g.is_b_submersive())).then_some("f and g are not both b-submersive")
                }
            }
        };
        Ok(missing.map(String::from))
    }
}

impl fmt::Display for BoundaryFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// How a term's factor sits over the original factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Whole,
    Face(usize),
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Whole => write!(f, "whole"),
            Side::Face(i) => write!(f, "face {i}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BoundaryTerm {
    pub x_side: Side,
    pub y_side: Side,
    pub f_term: CornerMapGerm,
    pub g_term: CornerMapGerm,
    /// Face of Z the term lives over, if not Z itself.
    pub z_face: Option<usize>,
    pub label: String,
}

#[derive(Debug, Clone)]
pub struct BoundaryMatch {
    /// Face of W, 1-based.
    pub face: usize,
    pub term: usize,
    pub mediator: CornerMapGerm,
}

#[derive(Debug, Clone)]
pub struct BoundaryReport {
    pub formula: BoundaryFormula,
    /// Faces of W taking part in the formula.
    pub lhs_faces: Vec<usize>,
    pub terms: Vec<BoundaryTerm>,
    pub matches: Vec<BoundaryMatch>,
    pub problems: Vec<String>,
}

impl BoundaryReport {
    pub fn holds(&self) -> bool {
        self.problems.is_empty()
    }
}

fn leg(pi: &CornerMapGerm, side: Side, r: usize) -> Result<Option<CornerMapGerm>> {
    let w = pi.source();
    match side {
        Side::Whole => Ok(Some(compose(pi, &CornerMapGerm::face_inclusion(w, r)?)?)),
        Side::Face(i) => {
            let cm = pi.corner_map(&Label::from([r]))?;
            Ok((cm.target_label == Label::from([i])).then_some(cm.restricted))
        }
    }
}

fn try_match(ledger: &FibreLedger, term: &BoundaryTerm, tl: &FibreLedger, r: usize) -> Result<Option<CornerMapGerm>> {
    let (Some(x), Some(y)) = (leg(&ledger.pi_x, term.x_side, r)?, leg(&ledger.pi_y, term.y_side, r)?) else {
        return Ok(None);
    };
    if compose(&term.f_term, &x)? != compose(&term.g_term, &y)? {
        return Ok(None);
    }
    match check_universal_property(&term.f_term, &term.g_term, tl, &x, &y) {
        Ok(h) if h.is_diffeomorphism() => Ok(Some(h)),
        Ok(_) | Err(Error::NoMediator(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

fn face_terms(x: &CornerMapGerm, faces: Label, with: &CornerMapGerm, x_first: bool, tag: &str) -> Result<Vec<BoundaryTerm>> {
    faces
        .iter()
        .map(|i| {
            let restricted = compose(x, &CornerMapGerm::face_inclusion(x.source(), i)?)?;
            let (x_side, y_side, f_term, g_term) = if x_first {
                (Side::Face(i), Side::Whole, restricted, with.clone())
            } else {
                (Side::Whole, Side::Face(i), with.clone(), restricted)
            };
            Ok(BoundaryTerm { x_side, y_side, f_term, g_term, z_face: None, label: format!("{tag} {i}") })
        })
        .collect()
}

fn all_faces(g: &CornerMapGerm) -> Label {
    g.source().faces().collect()
}

fn build_terms(formula: BoundaryFormula, f: &CornerMapGerm, g: &CornerMapGerm) -> Result<Vec<BoundaryTerm>> {
    use BoundaryFormula::*;
    let plus_x = f.boundary_decomposition().plus_faces;
    let plus_y = g.boundary_decomposition().plus_faces;
    Ok(match formula {
        MinusBoundaryOfSubmersion => {
            let y = f.target();
            (1..=y.depth)
                .map(|j| {
                    Ok(BoundaryTerm {
                        x_side: Side::Whole,
                        y_side: Side::Face(j),
                        f_term: f.clone(),
                        g_term: CornerMapGerm::face_inclusion(y, j)?,
                        z_face: None,
                        label: format!("X x dY face {j}"),
                    })
                })
                .collect::<Result<_>>()?
        }
        BoundarylessTarget => {
            let mut t = face_terms(f, all_faces(f), g, true, "dX face")?;
            t.extend(face_terms(g, all_faces(g), f, false, "dY face")?);
            t
        }
        OneSubmersion | OneBSubmersive => {
            let mut t = face_terms(f, plus_x, g, true, "d+X face")?;
            t.extend(face_terms(g, all_faces(g), f, false, "dY face")?);
            t
        }
        TwoSubmersions | TwoBSubmersive => {
            let mut t = face_terms(f, plus_x, g, true, "d+X face")?;
            t.extend(face_terms(g, plus_y, f, false, "d+Y face")?);
            let lf = f.b_submersive_lifts()?;
            let lg = g.b_submersive_lifts()?;
            for (i, tf, fm) in &lf.minus {
                for (k, tg, gm) in &lg.minus {
                    if tf == tg {
                        t.push(BoundaryTerm {
                            x_side: Side::Face(*i),
                            y_side: Side::Face(*k),
                            f_term: fm.clone(),
                            g_term: gm.clone(),
                            z_face: Some(*tf),
                            label: format!("d-X face {i} x d-Y face {k} over dZ face {tf}"),
                        });
                    }
                }
            }
            t
        }
    })
}

pub fn check_boundary_formula(formula: BoundaryFormula, f: &CornerMapGerm, g: &CornerMapGerm) -> Result<BoundaryReport> {
    if formula == BoundaryFormula::MinusBoundaryOfSubmersion {
        if let Some(why) = formula.hypothesis(f, &CornerMapGerm::identity(f.target()))? {
            return Err(Error::HypothesisNotMet(why));
        }
        return minus_boundary(f);
    }
    check_cospan(f, g)?;
    if let Some(why) = formula.hypothesis(f, g)? {
        return Err(Error::HypothesisNotMet(why));
    }
    let ledger = fibre_product(f, g)?;
    let lhs: Vec<usize> = (1..=ledger.w_model.depth).collect();
    match_faces(formula, f, g, &ledger, lhs)
}

fn match_faces(
    formula: BoundaryFormula,
    f: &CornerMapGerm,
    g: &CornerMapGerm,
    ledger: &FibreLedger,
    lhs: Vec<usize>,
) -> Result<BoundaryReport> {
    let terms = build_terms(formula, f, g)?;
    let mut problems = Vec::new();
    let mut term_ledgers = Vec::new();
    for t in &terms {
        match fibre_product(&t.f_term, &t.g_term) {
            Ok(l) => term_ledgers.push(Some(l)),
            Err(Error::NotTransverse) => {
                problems.push(format!("term {} is not transverse", t.label));
                term_ledgers.push(None);
            }
            Err(e) => return Err(e),
        }
    }
    let mut matches = Vec::new();
    for &r in &lhs {
        let mut hits = Vec::new();
        for (k, (t, tl)) in terms.iter().zip(&term_ledgers).enumerate() {
            if let Some(tl) = tl {
                if let Some(h) = try_match(ledger, t, tl, r)? {
                    hits.push(BoundaryMatch { face: r, term: k, mediator: h });
                }
            }
        }
        if hits.len() != 1 {
            problems.push(format!("{} of W matches {} terms", ledger.describe_face(r), hits.len()));
        }
        matches.extend(hits);
    }
    for (k, t) in terms.iter().enumerate() {
        let n = matches.iter().filter(|m| m.term == k).count();
        if n != 1 {
            problems.push(format!("term {} is matched by {n} faces", t.label));
        }
    }
    Ok(BoundaryReport { formula, lhs_faces: lhs, terms, matches, problems })
}

fn minus_boundary(f: &CornerMapGerm) -> Result<BoundaryReport> {
    let id = CornerMapGerm::identity(f.target());
    let ledger = fibre_product(f, &id)?;
    let mut problems = Vec::new();
    if !ledger.pi_x.is_diffeomorphism() {
        problems.push("X x_Y Y is not identified with X".into());
    }
    let minus = f.boundary_decomposition().minus_faces;
    let lhs: Vec<usize> = (1..=ledger.w_model.depth)
        .filter(|&r| {
            let xs = ledger.face_sources(r).0;
            !xs.is_empty() && xs.is_subset(&minus)
        })
        .collect();
    let mut report = match_faces(BoundaryFormula::MinusBoundaryOfSubmersion, f, &id, &ledger, lhs)?;
    // the projection to dY agrees with f_- under the identification
    let lifts = f.boundary_lifts()?;
    for m in &report.matches {
        let cm = ledger.pi_x.corner_map(&Label::from([m.face]))?;
        let i = cm.target_label.iter().next().expect("minus face");
        let Some((_, _, f_minus)) = lifts.minus.iter().find(|(s, _, _)| *s == i) else {
            problems.push(format!("no lift for face {i}"));
            continue;
        };
        let y_leg = ledger.pi_y.corner_map(&Label::from([m.face]))?.restricted;
        if compose(f_minus, &cm.restricted)? != y_leg {
            problems.push(format!("projection to dY differs from f_- on face {i}"));
        }
    }
    report.problems.extend(problems);
    Ok(report)
}

/// Every formula whose hypotheses the pair meets.
pub fn boundary_formula_checks(f: &CornerMapGerm, g: &CornerMapGerm) -> Result<Vec<BoundaryReport>> {
    check_cospan(f, g)?;
    let mut out = Vec::new();
    for formula in BoundaryFormula::ALL {
        match check_boundary_formula(formula, f, g) {
            Ok(r) => out.push(r),
            Err(Error::HypothesisNotMet(_)) => {}
            Err(e) => return Err(e),
        }
    }
    if out.is_empty() {
        return Err(Error::HypothesisNotMet("no boundary formula applies".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::tests::{germ, mc};
    use super::*;

    #[test]
    fn projection_against_identity() {
        let f = germ((2, 2), (1, 1), &[(1, 1)], &[&[1, 0]]);
        let id = CornerMapGerm::identity(mc(1, 1));
        let r = check_boundary_formula(BoundaryFormula::OneSubmersion, &f, &id).unwrap();
        assert!(r.holds(), "{:?}", r.problems);
        assert_eq!(r.terms.len(), 2);
        let r = check_boundary_formula(BoundaryFormula::TwoSubmersions, &f, &id).unwrap();
        assert!(r.holds(), "{:?}", r.problems);
    }

    #[test]
    fn minus_boundary_of_projection() {
        let f = germ((3, 2), (2, 1), &[(1, 2)], &[&[0, 1, 0], &[1, 0, 1]]);
        let r = check_boundary_formula(BoundaryFormula::MinusBoundaryOfSubmersion, &f, &f).unwrap();
        assert!(r.holds(), "{:?}", r.problems);
        assert_eq!(r.lhs_faces.len(), 1);
    }

    #[test]
    fn boundaryless_target() {
        let f = germ((2, 1), (1, 0), &[], &[&[1, 1]]);
        let g = germ((2, 2), (1, 0), &[], &[&[0, 2]]);
        let r = check_boundary_formula(BoundaryFormula::BoundarylessTarget, &f, &g).unwrap();
        assert!(r.holds(), "{:?}", r.problems);
        assert_eq!(r.matches.len(), 3);
    }

    #[test]
    fn hypotheses_enforced() {
        let f = germ((1, 1), (2, 2), &[(1, 1), (2, 1)], &[&[1], &[2]]);
        assert!(matches!(
            check_boundary_formula(BoundaryFormula::OneSubmersion, &f, &f),
            Err(Error::HypothesisNotMet(_))
        ));
    }
}
