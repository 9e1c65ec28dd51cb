//! Local normal form of submersions and the lifts of a map to boundary faces.

use super::{compose, CornerMapGerm};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Q};
use crate::model::{Label, ModelCorner};
use num::One;
use std::collections::BTreeMap;

/// `witness: X -> Y x Z` is a diffeomorphism germ with
/// `first_projection(Y, Z) ∘ witness = f`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalForm {
    /// Source faces in their new order: transferred faces in target order, then the rest.
    pub source_reorder: Vec<usize>,
    pub y_model: ModelCorner,
    pub z_model: ModelCorner,
    pub witness: CornerMapGerm,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryLifts {
    /// `(source face i, f ∘ i_X)` for faces nothing transfers to.
    pub plus: Vec<(usize, CornerMapGerm)>,
    /// `(source face i, target face j, f_-)` with `f ∘ i_X = i_Y ∘ f_-`.
    pub minus: Vec<(usize, usize, CornerMapGerm)>,
}

impl CornerMapGerm {
    pub fn submersion_normal_form(&self) -> Result<NormalForm> {
        if !self.is_submersion() {
            return Err(Error::NotSubmersion);
        }
        let (m, a) = (self.source.dim, self.source.depth);
        let (p, c) = (self.target.dim, self.target.depth);
        let y = self.target;
        let z = ModelCorner::new(m - p, a - c)?;
        let (prod, lay) = y.product(&z);

        let transferred: Vec<usize> = (1..=c).map(|j| self.transfer[&j]).collect();
        let rest: Vec<usize> = (1..=a).filter(|i| !transferred.contains(i)).collect();

        let mut rows: Vec<Option<Vec<Q>>> = vec![None; m];
        for r in 0..p {
            rows[lay.left[r]] = Some(self.jacobian.row(r).to_vec());
        }
        let unit = |k: usize| -> Vec<Q> {
            let mut v = vec![Q::from_integer(0.into()); m];
            v[k] = Q::one();
            v
        };
        for (s, &i) in rest.iter().enumerate() {
            rows[lay.right[s]] = Some(unit(i - 1));
        }
        // complete with interior coordinate functionals, leftmost first
        let mut acc = Matrix::from_rows(m, rows.iter().flatten().cloned().collect());
        let mut next = rest.len();
        for k in a..m {
            if next == z.dim {
                break;
            }
            let cand = acc.vstack(&Matrix::from_rows(m, vec![unit(k)]));
            if cand.rank() > acc.rank() {
                acc = cand;
                rows[lay.right[next]] = Some(unit(k));
                next += 1;
            }
        }
        if next != z.dim {
            return Err(Error::InternalInvariantViolation("basis completion fell short".into()));
        }
        let jac = Matrix::from_rows(m, rows.into_iter().map(|r| r.expect("row assigned")).collect());

        let mut transfer: BTreeMap<usize, usize> = self.transfer.clone();
        for (s, &i) in rest.iter().enumerate() {
            transfer.insert(lay.face_shift + s + 1, i);
        }
        let witness = CornerMapGerm::new(self.source, prod, transfer, jac)?;
        if !witness.is_diffeomorphism() {
            return Err(Error::InternalInvariantViolation("normal form witness is singular".into()));
        }
        if compose(&CornerMapGerm::first_projection(y, z), &witness)? != *self {
            return Err(Error::InternalInvariantViolation("normal form does not reproduce f".into()));
        }
        let source_reorder = transferred.into_iter().chain(rest).collect();
        Ok(NormalForm { source_reorder, y_model: y, z_model: z, witness })
    }

    pub fn boundary_lifts(&self) -> Result<BoundaryLifts> {
        if !self.is_submersion() {
            return Err(Error::NotSubmersion);
        }
        self.lifts()
    }

    /// The same lifts for b-submersive germs, where `f_-` is still defined.
    pub fn b_submersive_lifts(&self) -> Result<BoundaryLifts> {
        if !self.is_b_submersive() {
            return Err(Error::HypothesisNotMet("germ is not b-submersive".into()));
        }
        self.lifts()
    }

    fn lifts(&self) -> Result<BoundaryLifts> {
        let dec = self.boundary_decomposition();
        let plus = dec
            .plus_faces
            .iter()
            .map(|i| Ok((i, compose(self, &CornerMapGerm::face_inclusion(self.source, i)?)?)))
            .collect::<Result<Vec<_>>>()?;
        let mut minus = Vec::new();
        for (&j, &i) in &self.transfer {
            let f_minus = self.restrict(&Label::from([i]), &Label::from([j]))?;
            minus.push((i, j, f_minus));
        }
        minus.sort_by_key(|(i, j, _)| (*i, *j));
        Ok(BoundaryLifts { plus, minus })
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::{germ, mc};
    use super::*;

    #[test]
    fn projection_normal_form_is_trivial() {
        let proj = CornerMapGerm::first_projection(mc(1, 1), mc(2, 1));
        let nf = proj.submersion_normal_form().unwrap();
        assert_eq!(nf.source_reorder, vec![1, 2]);
        assert_eq!(nf.z_model, mc(2, 1));
        assert_eq!(nf.witness, CornerMapGerm::identity(mc(3, 2)));
    }

    #[test]
    fn swapped_faces_absorb_lambda() {
        let f = germ((2, 2), (1, 1), &[(1, 2)], &[&[0, 3]]);
        let nf = f.submersion_normal_form().unwrap();
        assert_eq!(nf.source_reorder, vec![2, 1]);
        assert_eq!(nf.z_model, mc(1, 1));
        assert_eq!(nf.witness.jacobian(), &Matrix::from_i64(2, &[&[0, 3], &[1, 0]]));
    }

    #[test]
    fn boundaryless_target() {
        let f = germ((3, 2), (1, 0), &[], &[&[1, 0, 1]]);
        let nf = f.submersion_normal_form().unwrap();
        assert_eq!(nf.z_model, mc(2, 2));
        assert!(germ((1, 1), (1, 0), &[], &[&[1]]).submersion_normal_form().is_err());
    }

    #[test]
    fn projection_lifts() {
        let proj = germ((2, 2), (1, 1), &[(1, 1)], &[&[1, 0]]);
        let l = proj.boundary_lifts().unwrap();
        assert_eq!(l.plus.len(), 1);
        assert_eq!(l.plus[0], (2, CornerMapGerm::identity(mc(1, 1))));
        // face 1 is ∂Y' x Z' with Y' = Z' = [0,inf): f_- collapses it onto the point ∂Y'
        assert_eq!(l.minus.len(), 1);
        let (i, j, fm) = &l.minus[0];
        assert_eq!((*i, *j), (1, 1));
        assert_eq!(fm, &CornerMapGerm::terminal(mc(1, 1)));
        assert!(fm.is_submersion());
    }

    #[test]
    fn lifts_commute_with_inclusions() {
        let f = germ((3, 2), (2, 1), &[(1, 2)], &[&[0, 2, 0], &[1, 1, 1]]);
        let l = f.boundary_lifts().unwrap();
        for (i, j, fm) in &l.minus {
            let lhs = compose(&f, &CornerMapGerm::face_inclusion(f.source(), *i).unwrap()).unwrap();
            let rhs = compose(&CornerMapGerm::face_inclusion(f.target(), *j).unwrap(), fm).unwrap();
            assert_eq!(lhs, rhs);
        }
        let target_boundaryless = germ((2, 1), (1, 0), &[], &[&[0, 1]]);
        assert!(target_boundaryless.boundary_lifts().unwrap().minus.is_empty());
    }
}
