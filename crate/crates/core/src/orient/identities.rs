//! Sign identities between oriented boundaries and fibre products.
//!
//! Each check orients both sides independently, builds the canonical
//! diffeomorphism germ `h: LHS -> RHS` from the universal property, and
//! compares `sign(det J_h) · o_LHS` with `predicted · o_RHS`.

use super::{boundary_orientation_sign, fibre_product_orientation, jacobian_sign, OrientedModel};
use crate::error::{Error, Result};
use crate::fibre::{check_boundary_formula, check_universal_property, fibre_product, BoundaryFormula, Side};
use crate::germ::{compose, direct_product_germ, product_germ, CornerMapGerm};
use crate::model::ModelCorner;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignIdentity {
    /// `∂_-X ≅ (-1)^{x+y} X x_Y ∂Y`; maps `[f]`, signs `[oX, oY]`.
    MinusBoundary,
    /// Boundary of `X x_Z Y` over a boundaryless `Z`; maps `[f, g]`, signs `[oX, oY, oZ]`.
    BoundaryBoundarylessTarget,
    /// Boundary of `X x_Z Y` with `f` a submersion (or b-submersive).
    BoundaryOneSubmersion,
    /// Boundary of `X x_Z Y` with both maps submersions (or both b-submersive).
    BoundaryTwoSubmersions,
    /// `X x_Z Y ≅ ± Y x_Z X`; maps `[f, g]`.
    Swap,
    /// Reassociating a double fibre product; maps `[d, e, f, g]`, signs `[oV, oW, oX, oY, oZ]`.
    Associativity,
    /// Fibre product over `Y x Z` against an iterated one; maps `[d, e, f, g]`.
    ProductTarget,
    /// Fibre product over a point is the product; maps `[X -> pt, Y -> pt]`.
    PointBase,
    /// `X ≅ Y x_{id,Y,f} X`; maps `[f]`, signs `[oX, oY]`.
    IdentityPullback,
    /// `X x Y ≅ (-1)^{xy} Y x X`; maps `[X -> pt, Y -> pt]`.
    ProductSwap,
    /// `(M x Z) x_Z (Z x N) ≅ M x Z x N`; maps `[M -> pt, Z -> pt, N -> pt]`.
    ProjectionFibre,
}

impl SignIdentity {
    pub const ALL: [SignIdentity; 11] = [
        SignIdentity::MinusBoundary,
        SignIdentity::BoundaryBoundarylessTarget,
        SignIdentity::BoundaryOneSubmersion,
        SignIdentity::BoundaryTwoSubmersions,
        SignIdentity::Swap,
        SignIdentity::Associativity,
        SignIdentity::ProductTarget,
        SignIdentity::PointBase,
        SignIdentity::IdentityPullback,
        SignIdentity::ProductSwap,
        SignIdentity::ProjectionFibre,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SignIdentity::MinusBoundary => "minus-boundary",
            SignIdentity::BoundaryBoundarylessTarget => "boundary-boundaryless-target",
            SignIdentity::BoundaryOneSubmersion => "boundary-one-submersion",
            SignIdentity::BoundaryTwoSubmersions => "boundary-two-submersions",
            SignIdentity::Swap => "swap",
            SignIdentity::Associativity => "associativity",
            SignIdentity::ProductTarget => "product-target",
            SignIdentity::PointBase => "point-base",
            SignIdentity::IdentityPullback => "identity-pullback",
            SignIdentity::ProductSwap => "product-swap",
            SignIdentity::ProjectionFibre => "projection-fibre",
        }
    }

    pub fn from_name(s: &str) -> Option<SignIdentity> {
        SignIdentity::ALL.into_iter().find(|i| i.name() == s)
    }

    fn arity(&self) -> (usize, usize) {
        match self {
            SignIdentity::MinusBoundary | SignIdentity::IdentityPullback => (1, 2),
            SignIdentity::Associativity | SignIdentity::ProductTarget => (4, 5),
            SignIdentity::PointBase | SignIdentity::ProductSwap => (2, 2),
            SignIdentity::ProjectionFibre => (3, 3),
            _ => (2, 3),
        }
    }
}

impl fmt::Display for SignIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone)]
pub struct SignInstance {
    pub maps: Vec<CornerMapGerm>,
    pub signs: Vec<i8>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignCheck {
    pub label: String,
    pub lhs: i8,
    pub rhs: i8,
    pub predicted: i8,
    pub jacobian: i8,
}

impl SignCheck {
    pub fn holds(&self) -> bool {
        self.jacobian != 0 && self.jacobian * self.lhs == self.predicted * self.rhs
    }
}

#[derive(Debug, Clone)]
pub struct SignReport {
    pub identity: SignIdentity,
    pub checks: Vec<SignCheck>,
    /// Failures that are not a sign mismatch, e.g. no canonical isomorphism.
    pub problems: Vec<String>,
}

impl SignReport {
    pub fn holds(&self) -> bool {
        self.problems.is_empty() && self.checks.iter().all(SignCheck::holds)
    }
}

fn parity(n: usize) -> i8 {
    if n.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn check(label: impl Into<String>, h: &CornerMapGerm, lhs: i8, predicted: i8, rhs: i8) -> SignCheck {
    let jacobian = if h.is_diffeomorphism() { jacobian_sign(h) } else { 0 };
    SignCheck { label: label.into(), lhs, rhs, predicted, jacobian }
}

fn face_sign(m: ModelCorner, side: Side) -> Result<i8> {
    match side {
        Side::Whole => Ok(1),
        Side::Face(i) => boundary_orientation_sign(m, i),
    }
}

pub fn verify_sign_identity(which: SignIdentity, inst: &SignInstance) -> Result<SignReport> {
    let (nm, ns) = which.arity();
    if inst.maps.len() != nm || inst.signs.len() != ns {
        return Err(Error::HypothesisNotMet(format!(
            "{which} takes {nm} maps and {ns} signs, got {} and {}",
            inst.maps.len(),
            inst.signs.len()
        )));
    }
    if inst.signs.iter().any(|s| *s != 1 && *s != -1) {
        return Err(Error::HypothesisNotMet("orientation signs must be +1 or -1".into()));
    }
    let m = &inst.maps;
    let s = &inst.signs;
    let mut report = SignReport { identity: which, checks: Vec::new(), problems: Vec::new() };
    match which {
        SignIdentity::MinusBoundary => minus_boundary(&m[0], s[0], s[1], &mut report)?,
        SignIdentity::BoundaryBoundarylessTarget => {
            boundary(BoundaryFormula::BoundarylessTarget, &m[0], &m[1], s, &mut report)?
        }
        SignIdentity::BoundaryOneSubmersion => {
            let formula =
                if m[0].is_submersion() { BoundaryFormula::OneSubmersion } else { BoundaryFormula::OneBSubmersive };
            boundary(formula, &m[0], &m[1], s, &mut report)?
        }
        SignIdentity::BoundaryTwoSubmersions => {
            let formula = if m[0].is_submersion() && m[1].is_submersion() {
                BoundaryFormula::TwoSubmersions
            } else {
                BoundaryFormula::TwoBSubmersive
            };
            boundary(formula, &m[0], &m[1], s, &mut report)?
        }
        SignIdentity::Swap => swap(&m[0], &m[1], s, &mut report)?,
        SignIdentity::Associativity => associativity(m, s, &mut report)?,
        SignIdentity::ProductTarget => product_target(m, s, &mut report)?,
        SignIdentity::PointBase => point_base(&m[0], &m[1], s, &mut report)?,
        SignIdentity::IdentityPullback => identity_pullback(&m[0], s[0], s[1], &mut report)?,
        SignIdentity::ProductSwap => {
            let (x, y) = (m[0].source(), m[1].source());
            let (ox, oy) = (OrientedModel { model: x, sign: s[0] }, OrientedModel { model: y, sign: s[1] });
            let h = direct_product_germ(
                &CornerMapGerm::second_projection(x, y),
                &CornerMapGerm::first_projection(x, y),
            )?;
            let predicted = parity(x.dim * y.dim);
            report.checks.push(check("X x Y -> Y x X", &h, ox.product(&oy).sign, predicted, oy.product(&ox).sign));
        }
        SignIdentity::ProjectionFibre => projection_fibre(m, s, &mut report)?,
    }
    Ok(report)
}

fn minus_boundary(f: &CornerMapGerm, ox: i8, oy: i8, report: &mut SignReport) -> Result<()> {
    if !f.is_submersion() {
        return Err(Error::HypothesisNotMet("f is not a submersion".into()));
    }
    let (x, y) = (f.source(), f.target());
    let predicted = parity(x.dim + y.dim);
    for (i, j, f_minus) in f.boundary_lifts()?.minus {
        let inc_y = CornerMapGerm::face_inclusion(y, j)?;
        let t = fibre_product(f, &inc_y)?;
        let oy_face = oy * boundary_orientation_sign(y, j)?;
        let rhs = fibre_product_orientation(f, &inc_y, ox, oy_face, oy, &t)?;
        let lhs = ox * boundary_orientation_sign(x, i)?;
        let inc_x = CornerMapGerm::face_inclusion(x, i)?;
        match check_universal_property(f, &inc_y, &t, &inc_x, &f_minus) {
            Ok(h) => report.checks.push(check(format!("x-face {i} over y-face {j}"), &h, lhs, predicted, rhs)),
            Err(e) => report.problems.push(format!("x-face {i}: {e}")),
        }
    }
    Ok(())
}

fn boundary(formula: BoundaryFormula, f: &CornerMapGerm, g: &CornerMapGerm, s: &[i8], report: &mut SignReport) -> Result<()> {
    let (ox, oy, oz) = (s[0], s[1], s[2]);
    let br = check_boundary_formula(formula, f, g)?;
    report.problems.extend(br.problems.iter().map(|p| format!("{formula}: {p}")));
    let (x, y, z) = (f.source(), g.source(), f.target());
    let w = fibre_product(f, g)?;
    let ow = fibre_product_orientation(f, g, ox, oy, oz, &w)?;
    for m in &br.matches {
        let term = &br.terms[m.term];
        let lhs = ow * boundary_orientation_sign(w.w_model, m.face)?;
        let ox_t = ox * face_sign(x, term.x_side)?;
        let oy_t = oy * face_sign(y, term.y_side)?;
        let oz_t = oz * term.z_face.map_or(Ok(1), |t| boundary_orientation_sign(z, t))?;
        let tl = fibre_product(&term.f_term, &term.g_term)?;
        let rhs = fibre_product_orientation(&term.f_term, &term.g_term, ox_t, oy_t, oz_t, &tl)?;
        let predicted = match (term.x_side, term.y_side) {
            (Side::Whole, Side::Face(_)) => parity(x.dim + z.dim),
            _ => 1,
        };
        report.checks.push(check(format!("W face {} -> {}", m.face, term.label), &m.mediator, lhs, predicted, rhs));
    }
    Ok(())
}

fn swap(f: &CornerMapGerm, g: &CornerMapGerm, s: &[i8], report: &mut SignReport) -> Result<()> {
    let (ox, oy, oz) = (s[0], s[1], s[2]);
    let w = fibre_product(f, g)?;
    let v = fibre_product(g, f)?;
    let lhs = fibre_product_orientation(f, g, ox, oy, oz, &w)?;
    let rhs = fibre_product_orientation(g, f, oy, ox, oz, &v)?;
    let (x, y, z) = (f.source().dim, g.source().dim, f.target().dim);
    let predicted = parity((x + z) * (y + z));
    match check_universal_property(g, f, &v, &w.pi_y, &w.pi_x) {
        Ok(h) => report.checks.push(check("X x_Z Y -> Y x_Z X", &h, lhs, predicted, rhs)),
        Err(e) => report.problems.push(e.to_string()),
    }
    Ok(())
}

fn associativity(m: &[CornerMapGerm], s: &[i8], report: &mut SignReport) -> Result<()> {
    let (d, e, f, g) = (&m[0], &m[1], &m[2], &m[3]);
    let (ov, ow, ox, oy, oz) = (s[0], s[1], s[2], s[3], s[4]);
    if d.target() != e.target() || e.source() != f.source() || f.target() != g.target() {
        return Err(Error::ModelMismatch("maps do not form d: V->Y, e: W->Y, f: W->Z, g: X->Z".into()));
    }
    let p = fibre_product(f, g)?;
    let op = fibre_product_orientation(f, g, ow, ox, oz, &p)?;
    let e_p = compose(e, &p.pi_x)?;
    let l = fibre_product(d, &e_p)?;
    let ol = fibre_product_orientation(d, &e_p, ov, op, oy, &l)?;

    let q = fibre_product(d, e)?;
    let oq = fibre_product_orientation(d, e, ov, ow, oy, &q)?;
    let f_q = compose(f, &q.pi_y)?;
    let r = fibre_product(&f_q, g)?;
    let or = fibre_product_orientation(&f_q, g, oq, ox, oz, &r)?;

    let k = check_universal_property(d, e, &q, &l.pi_x, &compose(&p.pi_x, &l.pi_y)?)?;
    let h = check_universal_property(&f_q, g, &r, &k, &compose(&p.pi_y, &l.pi_y)?)?;
    report.checks.push(check("V x_Y (W x_Z X) -> (V x_Y W) x_Z X", &h, ol, 1, or));
    Ok(())
}

fn product_target(m: &[CornerMapGerm], s: &[i8], report: &mut SignReport) -> Result<()> {
    let (d, e, f, g) = (&m[0], &m[1], &m[2], &m[3]);
    let (ov, ow, ox, oy, oz) = (s[0], s[1], s[2], s[3], s[4]);
    if d.source() != e.source() || d.target() != f.target() || e.target() != g.target() {
        return Err(Error::ModelMismatch("maps do not form d: V->Y, e: V->Z, f: W->Y, g: X->Z".into()));
    }
    let (wm, xm) = (f.source(), g.source());
    let (ym, zm) = (d.target(), e.target());
    let de = direct_product_germ(d, e)?;
    let fg = product_germ(f, g);
    let owx = OrientedModel { model: wm, sign: ow }.product(&OrientedModel { model: xm, sign: ox }).sign;
    let oyz = OrientedModel { model: ym, sign: oy }.product(&OrientedModel { model: zm, sign: oz }).sign;
    let l = fibre_product(&de, &fg)?;
    let ol = fibre_product_orientation(&de, &fg, ov, owx, oyz, &l)?;

    let q = fibre_product(d, f)?;
    let oq = fibre_product_orientation(d, f, ov, ow, oy, &q)?;
    let e_q = compose(e, &q.pi_x)?;
    let r = fibre_product(&e_q, g)?;
    let or = fibre_product_orientation(&e_q, g, oq, ox, oz, &r)?;

    let to_w = compose(&CornerMapGerm::first_projection(wm, xm), &l.pi_y)?;
    let to_x = compose(&CornerMapGerm::second_projection(wm, xm), &l.pi_y)?;
    let k = check_universal_property(d, f, &q, &l.pi_x, &to_w)?;
    let h = check_universal_property(&e_q, g, &r, &k, &to_x)?;
    let predicted = parity(zm.dim * (ym.dim + wm.dim));
    report.checks.push(check("V x_{YxZ} (W x X) -> (V x_Y W) x_Z X", &h, ol, predicted, or));
    Ok(())
}

fn point_base(a: &CornerMapGerm, b: &CornerMapGerm, s: &[i8], report: &mut SignReport) -> Result<()> {
    let pt = ModelCorner::point();
    let (f, g) = (CornerMapGerm::terminal(a.source()), CornerMapGerm::terminal(b.source()));
    if a.target() != pt || b.target() != pt {
        return Err(Error::HypothesisNotMet("both maps must land in a point".into()));
    }
    let w = fibre_product(&f, &g)?;
    let ow = fibre_product_orientation(&f, &g, s[0], s[1], 1, &w)?;
    let h = direct_product_germ(&w.pi_x, &w.pi_y)?;
    let prod = OrientedModel { model: a.source(), sign: s[0] }.product(&OrientedModel { model: b.source(), sign: s[1] });
    report.checks.push(check("X x_pt Y -> X x Y", &h, ow, 1, prod.sign));
    Ok(())
}

fn identity_pullback(f: &CornerMapGerm, ox: i8, oy: i8, report: &mut SignReport) -> Result<()> {
    let id = CornerMapGerm::identity(f.target());
    let w = fibre_product(&id, f)?;
    let ow = fibre_product_orientation(&id, f, oy, ox, oy, &w)?;
    let h = check_universal_property(&id, f, &w, f, &CornerMapGerm::identity(f.source()))?;
    report.checks.push(check("X -> Y x_Y X", &h, ox, 1, ow));
    Ok(())
}

fn projection_fibre(m: &[CornerMapGerm], s: &[i8], report: &mut SignReport) -> Result<()> {
    let (mm, zm, nm) = (m[0].source(), m[1].source(), m[2].source());
    let om = OrientedModel { model: mm, sign: s[0] };
    let oz = OrientedModel { model: zm, sign: s[1] };
    let on = OrientedModel { model: nm, sign: s[2] };
    let f = CornerMapGerm::second_projection(mm, zm);
    let g = CornerMapGerm::first_projection(zm, nm);
    let w = fibre_product(&f, &g)?;
    let ow = fibre_product_orientation(&f, &g, om.product(&oz).sign, oz.product(&on).sign, oz.sign, &w)?;
    let to_n = compose(&CornerMapGerm::second_projection(zm, nm), &w.pi_y)?;
    let h = direct_product_germ(&w.pi_x, &to_n)?;
    report.checks.push(check("(M x Z) x_Z (Z x N) -> M x Z x N", &h, ow, 1, om.product(&oz).product(&on).sign));
    Ok(())
}

/// All models `(n, k)` with `n <= max_dim`.
fn models(max_dim: usize) -> Vec<ModelCorner> {
    (0..=max_dim).flat_map(|n| (0..=n).map(move |k| ModelCorner { dim: n, depth: k })).collect()
}

fn tuples(pool: &[ModelCorner], len: usize) -> Vec<Vec<ModelCorner>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                pool.iter().map(move |m| {
                    let mut t = t.clone();
                    t.push(*m);
                    t
                })
            })
            .collect();
    }
    out
}

fn pattern(idx: usize, n: usize) -> Vec<i8> {
    (0..n).map(|k| if (idx >> k) & 1 == 1 { -1 } else { 1 }).collect()
}

/// Projection instances over every factor model of dimension at most `max_dim`;
/// orientation signs cycle through a fixed pattern.
pub fn projection_instances(which: SignIdentity, max_dim: usize) -> Vec<SignInstance> {
    use CornerMapGerm as G;
    let pool = models(max_dim);
    let (_, ns) = which.arity();
    let build = |t: &[ModelCorner]| -> Option<Vec<CornerMapGerm>> {
        Some(match which {
            SignIdentity::MinusBoundary | SignIdentity::IdentityPullback => {
                vec![G::second_projection(t[0], t[1])]
            }
            SignIdentity::BoundaryBoundarylessTarget
            | SignIdentity::BoundaryOneSubmersion
            | SignIdentity::BoundaryTwoSubmersions
            | SignIdentity::Swap => {
                let (m, z, n) = (t[0], t[1], t[2]);
                if which == SignIdentity::BoundaryBoundarylessTarget && z.depth != 0 {
                    return None;
                }
                vec![G::second_projection(m, z), G::first_projection(z, n)]
            }
            SignIdentity::Associativity => {
                let (p, y, z, q, r) = (t[0], t[1], t[2], t[3], t[4]);
                let (yz, _) = y.product(&z);
                let out = G::first_projection(yz, q);
                vec![
                    G::second_projection(p, y),
                    compose(&G::first_projection(y, z), &out).ok()?,
                    compose(&G::second_projection(y, z), &out).ok()?,
                    G::first_projection(z, r),
                ]
            }
            SignIdentity::ProductTarget => {
                let (y, z, p, q, r) = (t[0], t[1], t[2], t[3], t[4]);
                let (yz, _) = y.product(&z);
                let out = G::first_projection(yz, p);
                vec![
                    compose(&G::first_projection(y, z), &out).ok()?,
                    compose(&G::second_projection(y, z), &out).ok()?,
                    G::first_projection(y, q),
                    G::first_projection(z, r),
                ]
            }
            SignIdentity::PointBase | SignIdentity::ProductSwap => {
                vec![G::terminal(t[0]), G::terminal(t[1])]
            }
            SignIdentity::ProjectionFibre => vec![G::terminal(t[0]), G::terminal(t[1]), G::terminal(t[2])],
        })
    };
    let factors = match which {
        SignIdentity::MinusBoundary
        | SignIdentity::IdentityPullback
        | SignIdentity::PointBase
        | SignIdentity::ProductSwap => 2,
        SignIdentity::Associativity | SignIdentity::ProductTarget => 5,
        _ => 3,
    };
    tuples(&pool, factors)
        .iter()
        .filter_map(|t| build(t))
        .enumerate()
        .map(|(idx, maps)| SignInstance { maps, signs: pattern(idx, ns) })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mc(n: usize, k: usize) -> ModelCorner {
        ModelCorner::new(n, k).unwrap()
    }

    fn run(which: SignIdentity, max_dim: usize) {
        let inst = projection_instances(which, max_dim);
        assert!(!inst.is_empty());
        for i in &inst {
            let r = verify_sign_identity(which, i).unwrap();
            assert!(r.holds(), "{which}: {:?} {:?}", r.checks, r.problems);
        }
    }

    #[test]
    fn small_projection_suites() {
        for which in SignIdentity::ALL {
            run(which, 1);
        }
    }

    #[test]
    fn swap_sign_on_unit_dims() {
        let z = mc(1, 0);
        let inst = SignInstance {
            maps: vec![
                CornerMapGerm::second_projection(mc(1, 0), z),
                CornerMapGerm::first_projection(z, mc(1, 0)),
            ],
            signs: vec![1, 1, 1],
        };
        let r = verify_sign_identity(SignIdentity::Swap, &inst).unwrap();
        assert_eq!(r.checks[0].predicted, -1);
        assert!(r.holds());
    }

    #[test]
    fn wrong_arity_rejected() {
        let inst = SignInstance { maps: vec![], signs: vec![] };
        assert!(matches!(verify_sign_identity(SignIdentity::Swap, &inst), Err(Error::HypothesisNotMet(_))));
    }
}
