//! Local corner models `R^n_k = [0,inf)^k x R^(n-k)`.
//!
//! Faces are the hyperplanes `x_i = 0` for `1 <= i <= k`, indexed from 1.
//! A stratum label is a set of faces; the closed stratum it names is again
//! a corner model with those coordinates deleted.

use crate::error::{Error, Result};
use crate::linalg::Q;
use num::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ModelCorner {
    pub dim: usize,
    pub depth: usize,
}

impl fmt::Display for ModelCorner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.dim, self.depth)
    }
}

/// A set of 1-based face indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Label(BTreeSet<usize>);

impl Label {
    pub fn empty() -> Self {
        Label(BTreeSet::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.contains(&i)
    }

    pub fn insert(&mut self, i: usize) -> bool {
        self.0.insert(i)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn max(&self) -> Option<usize> {
        self.0.iter().next_back().copied()
    }

    pub fn union(&self, other: &Label) -> Label {
        Label(self.0.union(&other.0).copied().collect())
    }

    pub fn is_subset(&self, other: &Label) -> bool {
        self.0.is_subset(&other.0)
    }

    /// Faces shifted by `by`, as used for the second factor of a product.
    pub fn shifted(&self, by: usize) -> Label {
        self.iter().map(|i| i + by).collect()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl FromIterator<usize> for Label {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        Label(iter.into_iter().collect())
    }
}

impl<const N: usize> From<[usize; N]> for Label {
    fn from(a: [usize; N]) -> Self {
        a.into_iter().collect()
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// All `j`-subsets of `{1..k}` in lexicographic order.
pub fn subsets(k: usize, j: usize) -> Vec<Label> {
    let mut out = Vec::new();
    if j > k {
        return out;
    }
    let mut idx: Vec<usize> = (1..=j).collect();
    loop {
        out.push(idx.iter().copied().collect());
        // advance the rightmost index that still has room
        let mut p = j;
        loop {
            if p == 0 {
                return out;
            }
            p -= 1;
            if idx[p] < k - (j - 1 - p) {
                break;
            }
        }
        idx[p] += 1;
        for q in p + 1..j {
            idx[q] = idx[q - 1] + 1;
        }
    }
}

/// Every subset of `{1..k}`, by size then lexicographically.
pub fn all_subsets(k: usize) -> Vec<Label> {
    (0..=k).flat_map(|j| subsets(k, j)).collect()
}

/// Faces of `{1..k}` not in `removed`, in increasing order. Position `r` in the
/// result is the new (1-based `r+1`) index of that face after deletion.
pub fn surviving(k: usize, removed: &Label) -> Vec<usize> {
    (1..=k).filter(|i| !removed.contains(*i)).collect()
}

/// New 1-based index of face `i` once the faces in `removed` are deleted.
pub fn reindex(i: usize, removed: &Label) -> usize {
    i - removed.iter().filter(|&r| r < i).count()
}

/// Where each factor's coordinates land in a product model (0-based). Boundary
/// coordinates of the left factor come first, then those of the right factor,
/// then the interior coordinates in the same order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductLayout {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    /// Face `j` of the right factor becomes face `j + face_shift`.
    pub face_shift: usize,
}

impl ProductLayout {
    /// The product coordinate order as a permutation of the concatenation
    /// (left coordinates, then right coordinates).
    pub fn permutation(&self) -> Vec<usize> {
        self.left.iter().chain(self.right.iter()).copied().collect()
    }
}

fn falling(k: usize, j: usize) -> u128 {
    if j > k {
        return 0;
    }
    ((k - j + 1)..=k).map(|x| x as u128).product()
}

pub fn binomial(k: usize, j: usize) -> u128 {
    if j > k {
        return 0;
    }
    let j = j.min(k - j);
    let mut r: u128 = 1;
    for t in 0..j {
        r = r * (k - t) as u128 / (t + 1) as u128;
    }
    r
}

impl ModelCorner {
    pub fn new(dim: usize, depth: usize) -> Result<Self> {
        if depth > dim {
            return Err(Error::InvalidModel { dim, depth });
        }
        Ok(ModelCorner { dim, depth })
    }

    pub fn point() -> Self {
        ModelCorner { dim: 0, depth: 0 }
    }

    pub fn faces(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.depth
    }

    pub fn check_label(&self, a: &Label) -> Result<()> {
        if a.contains(0) || a.max().is_some_and(|i| i > self.depth) {
            return Err(Error::BadLabel(format!("{a} is not a set of faces of {self}")));
        }
        Ok(())
    }

    pub fn contains(&self, p: &[Q]) -> bool {
        p.len() == self.dim && p[..self.depth].iter().all(|x| !x.is_negative())
    }

    pub fn depth_of_point(&self, p: &[Q]) -> Result<usize> {
        if p.len() != self.dim {
            return Err(Error::PointOutsideModel(format!(
                "expected {} coordinates, got {}",
                self.dim,
                p.len()
            )));
        }
        if let Some(i) = p[..self.depth].iter().position(|x| x.is_negative()) {
            return Err(Error::PointOutsideModel(format!("coordinate {} is negative", i + 1)));
        }
        Ok(p[..self.depth].iter().filter(|x| x.is_zero()).count())
    }

    /// Model of the closed stratum cut out by `j` faces.
    pub fn stratum_model(&self, j: usize) -> ModelCorner {
        ModelCorner { dim: self.dim - j, depth: self.depth - j }
    }

    pub fn strata(&self, j: usize) -> Vec<(Label, ModelCorner)> {
        subsets(self.depth, j).into_iter().map(|a| (a, self.stratum_model(j))).collect()
    }

    pub fn boundary(&self) -> Vec<(usize, ModelCorner)> {
        self.faces().map(|i| (i, self.stratum_model(1))).collect()
    }

    /// Components of `∂^j` over the deepest point: ordered `j`-tuples of distinct faces.
    pub fn iterated_boundary_count(&self, j: usize) -> u128 {
        falling(self.depth, j)
    }

    pub fn corners_count(&self, j: usize) -> u128 {
        binomial(self.depth, j)
    }

    pub fn product(&self, other: &ModelCorner) -> (ModelCorner, ProductLayout) {
        let (k1, k2) = (self.depth, other.depth);
        let left = (0..self.dim).map(|i| if i < k1 { i } else { k2 + i }).collect();
        let right =
            (0..other.dim).map(|j| if j < k2 { k1 + j } else { self.dim + j }).collect();
        let m = ModelCorner { dim: self.dim + other.dim, depth: k1 + k2 };
        (m, ProductLayout { left, right, face_shift: k1 })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::qi;

    fn pt(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| qi(x)).collect()
    }

    #[test]
    fn depth_examples() {
        let m = ModelCorner::new(3, 2).unwrap();
        assert_eq!(m.depth_of_point(&pt(&[0, 1, 5])).unwrap(), 1);
        assert_eq!(ModelCorner::new(2, 2).unwrap().depth_of_point(&pt(&[0, 0])).unwrap(), 2);
        assert_eq!(ModelCorner::new(4, 0).unwrap().depth_of_point(&pt(&[0, -1, 0, 3])).unwrap(), 0);
        assert!(matches!(m.depth_of_point(&pt(&[-1, 0, 0])), Err(Error::PointOutsideModel(_))));
        assert!(ModelCorner::new(1, 2).is_err());
    }

    #[test]
    fn strata_examples() {
        let m = ModelCorner::new(3, 2).unwrap();
        let s = m.strata(1);
        assert_eq!(s.len(), 2);
        assert_eq!(s[0].0, Label::from([1]));
        assert_eq!(s[1].0, Label::from([2]));
        assert!(s.iter().all(|(_, mm)| *mm == ModelCorner { dim: 2, depth: 1 }));
        assert_eq!(m.strata(0), vec![(Label::empty(), m)]);
        assert!(m.strata(3).is_empty());
    }

    #[test]
    fn boundary_examples() {
        let q = ModelCorner::new(2, 2).unwrap();
        assert_eq!(q.boundary(), vec![(1, ModelCorner { dim: 1, depth: 1 }), (2, ModelCorner { dim: 1, depth: 1 })]);
        assert!(ModelCorner::new(1, 0).unwrap().boundary().is_empty());
        assert_eq!(ModelCorner::new(3, 1).unwrap().boundary(), vec![(1, ModelCorner { dim: 2, depth: 0 })]);
    }

    #[test]
    fn counts() {
        let q = ModelCorner::new(2, 2).unwrap();
        let c = ModelCorner::new(3, 3).unwrap();
        assert_eq!(q.iterated_boundary_count(2), 2);
        assert_eq!(c.iterated_boundary_count(2), 6);
        assert_eq!(c.iterated_boundary_count(0), 1);
        assert_eq!(q.corners_count(2), 1);
        assert_eq!(c.corners_count(2), 3);
        assert_eq!(c.corners_count(0), 1);
        assert_eq!(c.corners_count(4), 0);
    }

    #[test]
    fn product_examples() {
        let (p, lay) = ModelCorner::new(2, 2).unwrap().product(&ModelCorner::new(3, 1).unwrap());
        assert_eq!(p, ModelCorner { dim: 5, depth: 3 });
        assert_eq!(lay.left, vec![0, 1]);
        assert_eq!(lay.right, vec![2, 3, 4]);
        let x = ModelCorner::new(3, 1).unwrap();
        let (p, lay) = x.product(&ModelCorner::point());
        assert_eq!(p, x);
        assert_eq!(lay.left, vec![0, 1, 2]);
        let (p, lay) = ModelCorner::new(2, 1).unwrap().product(&ModelCorner::new(2, 1).unwrap());
        assert_eq!(p, ModelCorner { dim: 4, depth: 2 });
        assert_eq!(lay.left, vec![0, 2]);
        assert_eq!(lay.right, vec![1, 3]);
        assert_eq!(lay.face_shift, 1);
    }

    #[test]
    fn subset_order() {
        let s: Vec<String> = subsets(4, 2).iter().map(|l| l.to_string()).collect();
        assert_eq!(s, ["{1,2}", "{1,3}", "{1,4}", "{2,3}", "{2,4}", "{3,4}"]);
        assert_eq!(subsets(3, 0), vec![Label::empty()]);
        assert_eq!(all_subsets(3).len(), 8);
    }

    #[test]
    fn reindexing() {
        let r = Label::from([2, 4]);
        assert_eq!(surviving(5, &r), vec![1, 3, 5]);
        assert_eq!(reindex(5, &r), 3);
        assert_eq!(reindex(1, &r), 1);
    }
}
