//! How the target faces of a transverse pair are shared between the two sides.

use super::{check_cospan, is_transverse};
use crate::error::{Error, Result};
use crate::germ::CornerMapGerm;
use crate::model::Label;
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassKind {
    /// `|Π^f(E)| + |Π^g(E)| = |E| + 1`: contributes one boundary face.
    A,
    /// `|Π^f(E)| + |Π^g(E)| = |E|`: its coordinates vanish on the fibre product.
    B,
}

/// A connected component of the faces shared by both sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivClass {
    pub members: Label,
    pub kind: ClassKind,
    pub x_faces: Label,
    pub y_faces: Label,
    /// Some source face of the class also receives a face that is flat on the
    /// other side, so the class coordinates vanish identically. Only possible
    /// when condition (A) fails.
    pub forced_zero: bool,
}

impl EquivClass {
    pub fn contributes_face(&self) -> bool {
        self.kind == ClassKind::A && !self.forced_zero
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConditionVerdicts {
    pub a: bool,
    pub b: bool,
    pub c: bool,
    pub d: bool,
}

impl ConditionVerdicts {
    pub fn all(&self) -> bool {
        self.a && self.b && self.c && self.d
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransversalityInterface {
    pub p_f: Label,
    pub p_g: Label,
    pub pi_f: BTreeMap<usize, usize>,
    pub pi_g: BTreeMap<usize, usize>,
    pub verdicts: ConditionVerdicts,
    /// Ordered by smallest member.
    pub classes: Vec<EquivClass>,
    /// Smallest member of each class that contributes a face.
    pub q: Label,
}

impl TransversalityInterface {
    pub fn has_type_b(&self) -> bool {
        self.classes.iter().any(|e| e.kind == ClassKind::B)
    }
}

fn image(pi: &BTreeMap<usize, usize>, set: &Label) -> Label {
    set.iter().map(|j| pi[&j]).collect()
}

fn injective_on(pi: &BTreeMap<usize, usize>, set: &Label) -> bool {
    image(pi, set).len() == set.len()
}

/// Interface data with verdicts recorded rather than enforced.
pub(crate) fn interface_unchecked(f: &CornerMapGerm, g: &CornerMapGerm) -> TransversalityInterface {
    let c = f.target().depth;
    let (p_f, p_g) = (f.transfer_set(), g.transfer_set());
    let (pi_f, pi_g) = (f.transfer().clone(), g.transfer().clone());
    let both: Label = p_f.iter().filter(|j| p_g.contains(*j)).collect();
    let only_f: Label = p_f.iter().filter(|j| !p_g.contains(*j)).collect();
    let only_g: Label = p_g.iter().filter(|j| !p_f.contains(*j)).collect();

    let disjoint = |x: &Label, y: &Label| x.iter().all(|i| !y.contains(i));
    let cond_a = disjoint(&image(&pi_f, &both), &image(&pi_f, &only_f))
        && disjoint(&image(&pi_g, &both), &image(&pi_g, &only_g));
    let cond_b = injective_on(&pi_f, &only_f) && injective_on(&pi_g, &only_g);
    let cond_d = (1..=c).all(|j| p_f.contains(j) || p_g.contains(j));

    // connected components of `both` under sharing a source face on either side
    let members: Vec<usize> = both.to_vec();
    let mut parent: Vec<usize> = (0..members.len()).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        parent[x] = r;
        r
    }
    for s in 0..members.len() {
        for t in s + 1..members.len() {
            let (i, j) = (members[s], members[t]);
            if pi_f[&i] == pi_f[&j] || pi_g[&i] == pi_g[&j] {
                let (rs, rt) = (find(&mut parent, s), find(&mut parent, t));
                parent[rs.max(rt)] = rs.min(rt);
            }
        }
    }
    let mut groups: BTreeMap<usize, Label> = BTreeMap::new();
    for (s, &m) in members.iter().enumerate() {
        let r = find(&mut parent, s);
        groups.entry(r).or_default().insert(m);
    }
    let zero_x = image(&pi_f, &only_f);
    let zero_y = image(&pi_g, &only_g);
    let mut cond_c = true;
    let mut classes: Vec<EquivClass> = Vec::new();
    for e in groups.into_values() {
        let x_faces = image(&pi_f, &e);
        let y_faces = image(&pi_g, &e);
        let total = x_faces.len() + y_faces.len();
        let kind = if total == e.len() + 1 {
            ClassKind::A
        } else {
            if total != e.len() {
                cond_c = false;
            }
            ClassKind::B
        };
        let forced_zero = !disjoint(&x_faces, &zero_x) || !disjoint(&y_faces, &zero_y);
        classes.push(EquivClass { members: e, kind, x_faces, y_faces, forced_zero });
    }
    classes.sort_by_key(|e| e.members.iter().next());
    let q = classes.iter().filter(|e| e.contributes_face()).filter_map(|e| e.members.iter().next()).collect();
    TransversalityInterface {
        p_f,
        p_g,
        pi_f,
        pi_g,
        verdicts: ConditionVerdicts { a: cond_a, b: cond_b, c: cond_c, d: cond_d },
        classes,
        q,
    }
}

pub fn interface_data(f: &CornerMapGerm, g: &CornerMapGerm) -> Result<TransversalityInterface> {
    check_cospan(f, g)?;
    if !is_transverse(f, g)? {
        return Err(Error::NotTransverse);
    }
    let iface = interface_unchecked(f, g);
    let v = iface.verdicts;
    if !v.all() {
        return Err(Error::InternalInvariantViolation(format!(
            "transverse pair violates interface conditions: A={} B={} C={} D={}",
            v.a, v.b, v.c, v.d
        )));
    }
    Ok(iface)
}

#[cfg(test)]
mod tests {
    use super::super::tests::{germ, mc, skew_pair};
    use super::*;

    #[test]
    fn skew_pair_has_one_type_b_class() {
        let (f, g) = skew_pair();
        let i = interface_data(&f, &g).unwrap();
        assert_eq!(i.p_f, Label::from([1, 2]));
        assert_eq!(i.classes.len(), 1);
        assert_eq!(i.classes[0].members, Label::from([1, 2]));
        assert_eq!(i.classes[0].kind, ClassKind::B);
        assert!(i.q.is_empty());
    }

    #[test]
    fn identities_give_type_a() {
        let id = CornerMapGerm::identity(mc(1, 1));
        let i = interface_data(&id, &id).unwrap();
        assert_eq!(i.classes.len(), 1);
        assert_eq!(i.classes[0].kind, ClassKind::A);
        assert_eq!(i.q, Label::from([1]));
    }

    #[test]
    fn no_shared_faces() {
        let proj = germ((2, 2), (1, 1), &[(1, 1)], &[&[1, 0]]);
        let pt = germ((0, 0), (1, 1), &[], &[&[]]);
        let i = interface_data(&proj, &pt).unwrap();
        assert!(i.classes.is_empty());
        assert!(i.verdicts.all());
    }

    #[test]
    fn condition_a_can_fail_for_transverse_pairs() {
        // x -> (x, x) against (y1, y2) -> (y1, 0)
        let f = germ((1, 1), (2, 2), &[(1, 1), (2, 1)], &[&[1], &[1]]);
        let g = germ((2, 1), (2, 2), &[(1, 1)], &[&[1, 0], &[0, 0]]);
        assert!(is_transverse(&f, &g).unwrap());
        let i = interface_unchecked(&f, &g);
        assert!(!i.verdicts.a);
        assert!(i.verdicts.b && i.verdicts.c && i.verdicts.d);
        assert!(i.classes[0].forced_zero);
        assert!(matches!(interface_data(&f, &g), Err(Error::InternalInvariantViolation(_))));
    }
}
