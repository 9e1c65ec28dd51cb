//! Orientations of model corners as signs relative to the coordinate order.
//!
//! A boundary face is oriented so that (outward normal, face coordinates) is
//! oriented. A transverse fibre product `W` is oriented from a splitting
//! `TW ⊕ TZ ≅ TX ⊕ TY` so that the two sides differ by `(-1)^{dim Y dim Z}`.

mod identities;

pub use identities::{
    projection_instances, verify_sign_identity, SignCheck, SignIdentity, SignInstance, SignReport,
};

use crate::error::{Error, Result};
use crate::fibre::FibreLedger;
use crate::germ::CornerMapGerm;
use crate::linalg::{permutation_sign, sign, Matrix, Q};
use crate::model::{reindex, Label, ModelCorner};
use num::{One, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrientedModel {
    pub model: ModelCorner,
    pub sign: i8,
}

impl OrientedModel {
    pub fn new(model: ModelCorner, sign: i8) -> Result<Self> {
        if sign != 1 && sign != -1 {
            return Err(Error::InvalidModel { dim: model.dim, depth: model.depth });
        }
        Ok(OrientedModel { model, sign })
    }

    pub fn standard(model: ModelCorner) -> Self {
        OrientedModel { model, sign: 1 }
    }

    pub fn opposite(&self) -> Self {
        OrientedModel { model: self.model, sign: -self.sign }
    }

    pub fn boundary(&self, i: usize) -> Result<OrientedModel> {
        let s = boundary_orientation_sign(self.model, i)?;
        Ok(OrientedModel { model: self.model.stratum_model(1), sign: self.sign * s })
    }

    pub fn product(&self, other: &OrientedModel) -> OrientedModel {
        let (model, lay) = self.model.product(&other.model);
        OrientedModel { model, sign: self.sign * other.sign * permutation_sign(&lay.permutation()) }
    }
}

/// Sign of `[-e_i, e_1, .., ê_i, .., e_n]`.
pub fn boundary_orientation_sign(m: ModelCorner, i: usize) -> Result<i8> {
    if i == 0 || i > m.depth {
        return Err(Error::BadFace { face: i, depth: m.depth });
    }
    let n = m.dim;
    let mut frame = Matrix::zeros(n, n);
    frame.set(i - 1, 0, -Q::one());
    let rest = (0..n).filter(|&c| c != i - 1);
    for (col, r) in rest.enumerate() {
        frame.set(r, col + 1, Q::one());
    }
    Ok(sign(&frame.det()))
}

/// Orientation sign of `∂^j` reached by cutting the original faces in the given order.
pub fn iterated_boundary_sign(m: ModelCorner, faces: &[usize]) -> Result<i8> {
    let mut removed = Label::empty();
    let mut cur = m;
    let mut s = 1;
    for &b in faces {
        if b == 0 || b > m.depth || removed.contains(b) {
            return Err(Error::BadFace { face: b, depth: m.depth });
        }
        s *= boundary_orientation_sign(cur, reindex(b, &removed))?;
        removed.insert(b);
        cur = cur.stratum_model(1);
    }
    Ok(s)
}

/// How to lift `TZ` back into `TX ⊕ TY`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Splitting {
    Leftmost,
    Rightmost,
}

fn lift(d: &Matrix, splitting: Splitting) -> Result<Matrix> {
    let (p, w) = (d.nrows(), d.ncols());
    let order: Vec<usize> = match splitting {
        Splitting::Leftmost => (0..w).collect(),
        Splitting::Rightmost => (0..w).rev().collect(),
    };
    let rows: Vec<usize> = (0..p).collect();
    let (_, piv) = d.select(&rows, &order).rref();
    if piv.len() != p {
        return Err(Error::NotTransverse);
    }
    let cols: Vec<usize> = piv.iter().map(|&k| order[k]).collect();
    let inv = d.select(&rows, &cols).inverse().ok_or(Error::NotTransverse)?;
    let mut l = Matrix::zeros(w, p);
    for (r, &c) in cols.iter().enumerate() {
        for z in 0..p {
            l.set(c, z, inv.get(r, z).clone());
        }
    }
    Ok(l)
}

pub fn fibre_product_orientation(
    f: &CornerMapGerm,
    g: &CornerMapGerm,
    ox: i8,
    oy: i8,
    oz: i8,
    ledger: &FibreLedger,
) -> Result<i8> {
    fibre_product_orientation_with(f, g, ox, oy, oz, ledger, Splitting::Leftmost)
}

pub fn fibre_product_orientation_with(
    f: &CornerMapGerm,
    g: &CornerMapGerm,
    ox: i8,
    oy: i8,
    oz: i8,
    ledger: &FibreLedger,
    splitting: Splitting,
) -> Result<i8> {
    if !crate::fibre::is_transverse(f, g)? {
        return Err(Error::NotTransverse);
    }
    let d = f.jacobian().hstack(&g.jacobian().scale(&-Q::one()));
    let frame = ledger.basis.hstack(&lift(&d, splitting)?);
    let det = frame.det();
    if det.is_zero() {
        return Err(Error::InternalInvariantViolation("splitting frame is singular".into()));
    }
    let twist = if (g.source().dim * f.target().dim) % 2 == 1 { -1 } else { 1 };
    Ok(sign(&det) * ox * oy * oz * twist)
}

/// Sign of `det J_h` for a germ between models of equal dimension.
pub fn jacobian_sign(h: &CornerMapGerm) -> i8 {
    if h.source().dim != h.target().dim {
        return 0;
    }
    sign(&h.jacobian().det())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fibre::fibre_product;
    use crate::model::subsets;

    fn mc(n: usize, k: usize) -> ModelCorner {
        ModelCorner::new(n, k).unwrap()
    }

    #[test]
    fn boundary_signs() {
        assert_eq!(boundary_orientation_sign(mc(1, 1), 1).unwrap(), -1);
        assert_eq!(boundary_orientation_sign(mc(2, 2), 1).unwrap(), -1);
        assert_eq!(boundary_orientation_sign(mc(2, 2), 2).unwrap(), 1);
        assert!(boundary_orientation_sign(mc(2, 1), 2).is_err());
    }

    #[test]
    fn double_flip() {
        let o = OrientedModel::new(mc(3, 1), -1).unwrap();
        assert_eq!(o.opposite().opposite(), o);
        assert!(OrientedModel::new(mc(1, 0), 0).is_err());
    }

    #[test]
    fn diagonal_is_positive() {
        let id = CornerMapGerm::identity(mc(2, 1));
        let l = fibre_product(&id, &id).unwrap();
        assert_eq!(fibre_product_orientation(&id, &id, 1, 1, 1, &l).unwrap(), 1);
        assert_eq!(fibre_product_orientation(&id, &id, 1, -1, 1, &l).unwrap(), -1);
    }

    #[test]
    fn splittings_agree_on_projections() {
        let z = mc(1, 0);
        let f = CornerMapGerm::second_projection(mc(2, 1), z);
        let g = CornerMapGerm::first_projection(z, mc(1, 1));
        let l = fibre_product(&f, &g).unwrap();
        let a = fibre_product_orientation_with(&f, &g, 1, 1, 1, &l, Splitting::Leftmost).unwrap();
        let b = fibre_product_orientation_with(&f, &g, 1, 1, 1, &l, Splitting::Rightmost).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn reordering_faces_acts_by_sign() {
        let m = mc(4, 3);
        let base = iterated_boundary_sign(m, &[1, 2, 3]).unwrap();
        assert_eq!(iterated_boundary_sign(m, &[2, 1, 3]).unwrap(), -base);
        assert_eq!(iterated_boundary_sign(m, &[2, 3, 1]).unwrap(), base);
        for s in subsets(3, 2) {
            let v = s.to_vec();
            let a = iterated_boundary_sign(m, &v).unwrap();
            let b = iterated_boundary_sign(m, &[v[1], v[0]]).unwrap();
            assert_eq!(a, -b);
        }
    }
}
