//! Germs at the origin of smooth maps between corner models.
//!
//! A germ `f: R^m_a -> R^p_c` is stored as its Jacobian plus transfer data.
//! Target face `j` either pulls back to zero (flat) or to a positive multiple of
//! a source boundary coordinate `x_{Π(j)}`; the transferred faces form the set
//! `P`. At first order this pins row `j` of the Jacobian to `λ_j e_{Π(j)}` with
//! `λ_j > 0`, or to zero.

mod corners;
mod submersion;

pub use corners::{BoundaryDecomposition, CornerPointMap, XiData};
pub use submersion::{BoundaryLifts, NormalForm};

use crate::error::{Error, Result};
use crate::linalg::{fmt_q, Matrix, Q};
use crate::model::{Label, ModelCorner};
use num::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CornerMapGerm {
    source: ModelCorner,
    target: ModelCorner,
    transfer: BTreeMap<usize, usize>,
    jacobian: Matrix,
}

impl fmt::Debug for CornerMapGerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CornerMapGerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pi: Vec<String> = self.transfer.iter().map(|(j, i)| format!("{j}->{i}")).collect();
        write!(f, "{} -> {} Pi{{{}}} J={:?}", self.source, self.target, pi.join(","), self.jacobian)
    }
}

impl CornerMapGerm {
    /// Validates the row invariants against the transfer data.
    pub fn new(
        source: ModelCorner,
        target: ModelCorner,
        transfer: BTreeMap<usize, usize>,
        jacobian: Matrix,
    ) -> Result<Self> {
        ModelCorner::new(source.dim, source.depth)?;
        ModelCorner::new(target.dim, target.depth)?;
        if jacobian.nrows() != target.dim || jacobian.ncols() != source.dim {
            return Err(Error::InvalidGerm(format!(
                "jacobian is {}x{}, expected {}x{}",
                jacobian.nrows(),
                jacobian.ncols(),
                target.dim,
                source.dim
            )));
        }
        for (&j, &i) in &transfer {
            if j == 0 || j > target.depth {
                return Err(Error::InvalidGerm(format!("transferred face {j} is not a target face")));
            }
            if i == 0 || i > source.depth {
                return Err(Error::InvalidGerm(format!("face {j} transfers to {i}, not a source face")));
            }
        }
        for j in 1..=target.depth {
            let row = jacobian.row(j - 1);
            match transfer.get(&j) {
                Some(&i) => {
                    let ok = row.iter().enumerate().all(|(c, x)| {
                        if c == i - 1 {
                            x.is_positive()
                        } else {
                            x.is_zero()
                        }
                    });
                    if !ok {
                        return Err(Error::InvalidGerm(format!(
                            "row {j} must be a positive multiple of e_{i}"
                        )));
                    }
                }
                None => {
                    if !row.iter().all(Zero::is_zero) {
                        return Err(Error::InvalidGerm(format!("flat row {j} must vanish")));
                    }
                }
            }
        }
        Ok(CornerMapGerm { source, target, transfer, jacobian })
    }

    pub fn source(&self) -> ModelCorner {
        self.source
    }

    pub fn target(&self) -> ModelCorner {
        self.target
    }

    pub fn jacobian(&self) -> &Matrix {
        &self.jacobian
    }

    pub fn transfer(&self) -> &BTreeMap<usize, usize> {
        &self.transfer
    }

    pub fn transfer_set(&self) -> Label {
        self.transfer.keys().copied().collect()
    }

    pub fn pi(&self, j: usize) -> Option<usize> {
        self.transfer.get(&j).copied()
    }

    /// The positive constant `λ_j` of a transferred face.
    pub fn lambda(&self, j: usize) -> Option<Q> {
        self.pi(j).map(|i| self.jacobian.get(j - 1, i - 1).clone())
    }

    pub fn flat_faces(&self) -> Label {
        self.target.faces().filter(|j| !self.transfer.contains_key(j)).collect()
    }

    pub fn identity(m: ModelCorner) -> Self {
        let transfer = m.faces().map(|i| (i, i)).collect();
        CornerMapGerm { source: m, target: m, transfer, jacobian: Matrix::identity(m.dim) }
    }

    /// Inclusion of face `i` of `m`, from the face model `(n-1, k-1)`.
    pub fn face_inclusion(m: ModelCorner, i: usize) -> Result<Self> {
        if i == 0 || i > m.depth {
            return Err(Error::BadFace { face: i, depth: m.depth });
        }
        let face = m.stratum_model(1);
        let mut j = Matrix::zeros(m.dim, face.dim);
        for c in 0..face.dim {
            let r = if c + 1 < i { c } else { c + 1 };
            j.set(r, c, Q::one());
        }
        let transfer =
            m.faces().filter(|&t| t != i).map(|t| (t, if t < i { t } else { t - 1 })).collect();
        Ok(CornerMapGerm { source: face, target: m, transfer, jacobian: j })
    }

    /// The map to a point.
    pub fn terminal(m: ModelCorner) -> Self {
        CornerMapGerm {
            source: m,
            target: ModelCorner::point(),
            transfer: BTreeMap::new(),
            jacobian: Matrix::zeros(0, m.dim),
        }
    }

    /// The projection `y x z -> y` out of the product model.
    pub fn first_projection(y: ModelCorner, z: ModelCorner) -> Self {
        let (prod, lay) = y.product(&z);
        let mut j = Matrix::zeros(y.dim, prod.dim);
        for (r, &c) in lay.left.iter().enumerate() {
            j.set(r, c, Q::one());
        }
        let transfer = y.faces().map(|i| (i, i)).collect();
        CornerMapGerm { source: prod, target: y, transfer, jacobian: j }
    }

    /// The projection `y x z -> z` out of the product model.
    pub fn second_projection(y: ModelCorner, z: ModelCorner) -> Self {
        let (prod, lay) = y.product(&z);
        let mut j = Matrix::zeros(z.dim, prod.dim);
        for (r, &c) in lay.right.iter().enumerate() {
            j.set(r, c, Q::one());
        }
        let transfer = z.faces().map(|i| (i, i + lay.face_shift)).collect();
        CornerMapGerm { source: prod, target: z, transfer, jacobian: j }
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &CornerMapGerm) -> Result<CornerMapGerm> {
        compose(g, self)
    }

    pub fn is_immersion(&self) -> bool {
        self.jacobian.rank() == self.source.dim
    }

    pub fn is_submersion(&self) -> bool {
        let (m, a, p, c) = (self.source.dim, self.source.depth, self.target.dim, self.target.depth);
        if self.jacobian.rank() != p {
            return false;
        }
        let rows: Vec<usize> = (c..p).collect();
        let cols: Vec<usize> = (a..m).collect();
        self.jacobian.select(&rows, &cols).rank() == p - c
    }

    pub fn is_b_submersive(&self) -> bool {
        let full = self.transfer.len() == self.target.depth;
        let mut seen = std::collections::BTreeSet::new();
        full && self.transfer.values().all(|i| seen.insert(*i))
    }

    /// Square, invertible, and a bijection on faces.
    pub fn is_diffeomorphism(&self) -> bool {
        self.source == self.target
            && self.is_b_submersive()
            && self.jacobian.det() != Q::zero()
    }

    pub fn inverse(&self) -> Result<CornerMapGerm> {
        if !self.is_diffeomorphism() {
            return Err(Error::InvalidGerm("germ is not invertible".into()));
        }
        let jac = self.jacobian.inverse().expect("nonzero determinant");
        let transfer = self.transfer.iter().map(|(&j, &i)| (i, j)).collect();
        CornerMapGerm::new(self.target, self.source, transfer, jac)
    }

    /// First-order inward-sector check: `J v` has nonnegative boundary coordinates.
    pub fn maps_inward(&self, v: &[Q]) -> bool {
        let w = self.jacobian.mul_vec(v);
        w[..self.target.depth].iter().all(|x| !x.is_negative())
    }

    /// Deletes source faces `a` (columns) and target faces `b` (rows).
    /// Every transferred face outside `b` must transfer outside `a`.
    pub(crate) fn restrict(&self, a: &Label, b: &Label) -> Result<CornerMapGerm> {
        let source = self.source.stratum_model(a.len());
        let target = self.target.stratum_model(b.len());
        let rows: Vec<usize> = (1..=self.target.dim).filter(|j| !b.contains(*j)).map(|j| j - 1).collect();
        let cols: Vec<usize> = (1..=self.source.dim).filter(|i| !a.contains(*i)).map(|i| i - 1).collect();
        let mut transfer = BTreeMap::new();
        for (&j, &i) in &self.transfer {
            if b.contains(j) {
                continue;
            }
            if a.contains(i) {
                return Err(Error::InternalInvariantViolation(format!(
                    "face {j} transfers into the deleted face {i}"
                )));
            }
            transfer.insert(crate::model::reindex(j, b), crate::model::reindex(i, a));
        }
        CornerMapGerm::new(source, target, transfer, self.jacobian.select(&rows, &cols))
    }

    pub fn describe_transfer(&self) -> String {
        let parts: Vec<String> = self
            .transfer
            .iter()
            .map(|(j, i)| format!("{j}->{i} (λ={})", fmt_q(&self.lambda(*j).unwrap())))
            .collect();
        format!("{{{}}}", parts.join(", "))
    }
}

/// `g ∘ f`.
pub fn compose(g: &CornerMapGerm, f: &CornerMapGerm) -> Result<CornerMapGerm> {
    if f.target != g.source {
        return Err(Error::ModelMismatch(format!(
            "cannot compose: f lands in {}, g starts at {}",
            f.target, g.source
        )));
    }
    let transfer = g
        .transfer
        .iter()
        .filter_map(|(&j, &k)| f.pi(k).map(|i| (j, i)))
        .collect();
    CornerMapGerm::new(f.source, g.target, transfer, g.jacobian.mul(&f.jacobian))
}

/// `f x g` between product models.
pub fn product_germ(f: &CornerMapGerm, g: &CornerMapGerm) -> CornerMapGerm {
    let (src, sl) = f.source.product(&g.source);
    let (tgt, tl) = f.target.product(&g.target);
    let mut j = Matrix::zeros(tgt.dim, src.dim);
    for r in 0..f.target.dim {
        for c in 0..f.source.dim {
            j.set(tl.left[r], sl.left[c], f.jacobian.get(r, c).clone());
        }
    }
    for r in 0..g.target.dim {
        for c in 0..g.source.dim {
            j.set(tl.right[r], sl.right[c], g.jacobian.get(r, c).clone());
        }
    }
    let mut transfer: BTreeMap<usize, usize> = f.transfer.clone();
    for (&t, &s) in &g.transfer {
        transfer.insert(t + tl.face_shift, s + sl.face_shift);
    }
    CornerMapGerm { source: src, target: tgt, transfer, jacobian: j }
}

/// `(f, g)` into the product of the targets.
pub fn direct_product_germ(f: &CornerMapGerm, g: &CornerMapGerm) -> Result<CornerMapGerm> {
    if f.source != g.source {
        return Err(Error::ModelMismatch(format!(
            "direct product needs a common source, got {} and {}",
            f.source, g.source
        )));
    }
    let (tgt, tl) = f.target.product(&g.target);
    let mut j = Matrix::zeros(tgt.dim, f.source.dim);
    for c in 0..f.source.dim {
        for r in 0..f.target.dim {
            j.set(tl.left[r], c, f.jacobian.get(r, c).clone());
        }
        for r in 0..g.target.dim {
            j.set(tl.right[r], c, g.jacobian.get(r, c).clone());
        }
    }
    let mut transfer = f.transfer.clone();
    for (&t, &s) in &g.transfer {
        transfer.insert(t + tl.face_shift, s);
    }
    Ok(CornerMapGerm { source: f.source, target: tgt, transfer, jacobian: j })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::qi;

    pub(crate) fn mc(n: usize, k: usize) -> ModelCorner {
        ModelCorner::new(n, k).unwrap()
    }

    pub(crate) fn germ(
        s: (usize, usize),
        t: (usize, usize),
        pi: &[(usize, usize)],
        rows: &[&[i64]],
    ) -> CornerMapGerm {
        CornerMapGerm::new(
            mc(s.0, s.1),
            mc(t.0, t.1),
            pi.iter().copied().collect(),
            Matrix::from_i64(s.0, rows),
        )
        .unwrap()
    }

    fn diagonal() -> CornerMapGerm {
        germ((1, 1), (2, 2), &[(1, 1), (2, 1)], &[&[1], &[1]])
    }

    fn projection() -> CornerMapGerm {
        germ((2, 2), (1, 1), &[(1, 1)], &[&[1, 0]])
    }

    #[test]
    fn identity_examples() {
        let id = CornerMapGerm::identity(mc(2, 2));
        assert_eq!(id.transfer_set(), Label::from([1, 2]));
        assert_eq!(id.jacobian(), &Matrix::identity(2));
        let pt = CornerMapGerm::identity(mc(0, 0));
        assert!(pt.transfer().is_empty());
        let h = CornerMapGerm::identity(mc(3, 1));
        assert_eq!(h.pi(1), Some(1));
        assert_eq!(h.jacobian(), &Matrix::identity(3));
    }

    #[test]
    fn invariants_rejected() {
        let bad = CornerMapGerm::new(mc(1, 1), mc(1, 1), BTreeMap::new(), Matrix::from_i64(1, &[&[1]]));
        assert!(bad.is_err(), "flat row must vanish");
        let neg = CornerMapGerm::new(mc(1, 1), mc(1, 1), [(1, 1)].into(), Matrix::from_i64(1, &[&[-1]]));
        assert!(neg.is_err());
        let mixed =
            CornerMapGerm::new(mc(2, 1), mc(1, 1), [(1, 1)].into(), Matrix::from_i64(2, &[&[1, 1]]));
        assert!(mixed.is_err());
    }

    #[test]
    fn compose_examples() {
        let c = compose(&projection(), &diagonal()).unwrap();
        assert_eq!(c, CornerMapGerm::identity(mc(1, 1)));
        let f = germ((2, 1), (2, 2), &[(2, 1)], &[&[0, 0], &[3, 0]]);
        assert_eq!(compose(&CornerMapGerm::identity(mc(2, 2)), &f).unwrap(), f);
        // face 1 of f is flat, and g transfers its face 1 to it
        let g = germ((2, 2), (1, 1), &[(1, 1)], &[&[2, 0]]);
        let gf = compose(&g, &f).unwrap();
        assert!(gf.transfer().is_empty());
        assert!(gf.jacobian().row_is_zero(0));
        assert!(compose(&f, &g).is_err());
    }

    #[test]
    fn product_examples() {
        let id = product_germ(&CornerMapGerm::identity(mc(2, 1)), &CornerMapGerm::identity(mc(1, 1)));
        assert_eq!(id, CornerMapGerm::identity(mc(3, 2)));
        let inc = germ((1, 1), (1, 0), &[], &[&[1]]);
        let pp = product_germ(&inc, &inc);
        assert_eq!(pp.source(), mc(2, 2));
        assert_eq!(pp.target(), mc(2, 0));
        assert!(pp.transfer().is_empty());
        assert_eq!(pp.jacobian(), &Matrix::identity(2));
    }

    #[test]
    fn direct_product_examples() {
        let id = CornerMapGerm::identity(mc(1, 1));
        assert_eq!(direct_product_germ(&id, &id).unwrap(), diagonal());
        let into_interior = germ((1, 1), (1, 0), &[], &[&[1]]);
        let d = direct_product_germ(&id, &into_interior).unwrap();
        assert_eq!(d.transfer_set(), Label::from([1]));
        let back = compose(&CornerMapGerm::first_projection(mc(1, 1), mc(1, 0)), &d).unwrap();
        assert_eq!(back, id);
    }

    #[test]
    fn predicates() {
        let inc = germ((1, 1), (1, 0), &[], &[&[1]]);
        assert!(inc.is_immersion() && !inc.is_submersion());
        assert!(projection().is_submersion() && projection().is_b_submersive());
        assert!(!diagonal().is_b_submersive());
        assert!(diagonal().is_immersion());
    }

    #[test]
    fn face_inclusion_shape() {
        let i2 = CornerMapGerm::face_inclusion(mc(3, 2), 2).unwrap();
        assert_eq!(i2.source(), mc(2, 1));
        assert_eq!(i2.pi(1), Some(1));
        assert_eq!(i2.pi(2), None);
        assert_eq!(i2.jacobian(), &Matrix::from_i64(2, &[&[1, 0], &[0, 0], &[0, 1]]));
        assert!(CornerMapGerm::face_inclusion(mc(3, 2), 3).is_err());
    }

    #[test]
    fn inverse_round_trip() {
        let f = germ((2, 2), (2, 2), &[(1, 2), (2, 1)], &[&[0, 3], &[2, 0]]);
        let inv = f.inverse().unwrap();
        assert_eq!(compose(&inv, &f).unwrap(), CornerMapGerm::identity(mc(2, 2)));
        assert_eq!(inv.lambda(1), Some(crate::linalg::q(1, 2)));
        assert!(projection().inverse().is_err());
        let _ = qi(0);
    }
}
