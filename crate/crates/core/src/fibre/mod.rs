//! Transverse fibre products of germs.
//!
//! For `f: X -> Z` and `g: Y -> Z` the fibre product is cut out of `X x Y` by
//! `f = g`. At the origin its tangent space is the kernel of `[J_f | -J_g]`
//! and its boundary faces come from the source faces of `X` and `Y` that are
//! not forced to vanish by the shared target faces.

mod boundary;
mod construct;
mod corners;
mod interface;

pub use boundary::{boundary_formula_checks, check_boundary_formula, BoundaryFormula, BoundaryMatch, BoundaryReport, BoundaryTerm, Side};
pub use construct::{check_universal_property, fibre_product, FibreLedger, RegistryFace};
pub use corners::{corner_identity_check, CornerIdentityReport, CornerIdentityRow};
pub use interface::{interface_data, ClassKind, ConditionVerdicts, EquivClass, TransversalityInterface};

use crate::error::{Error, Result};
use crate::germ::CornerMapGerm;
use crate::model::{all_subsets, Label};

/// A matched corner triple: `C(f)(a) = C(g)(b) = l`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Triple {
    pub a: Label,
    pub b: Label,
    pub l: Label,
}

impl Triple {
    /// `|A| + |B| - |L|`, the corner depth this triple contributes to.
    pub fn index(&self) -> isize {
        self.a.len() as isize + self.b.len() as isize - self.l.len() as isize
    }

    pub fn is_trivial(&self) -> bool {
        self.a.is_empty() && self.b.is_empty() && self.l.is_empty()
    }
}

impl std::fmt::Display for Triple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(A={}, B={}, L={})", self.a, self.b, self.l)
    }
}

pub(crate) fn check_cospan(f: &CornerMapGerm, g: &CornerMapGerm) -> Result<()> {
    if f.target() != g.target() {
        return Err(Error::ModelMismatch(format!(
            "maps land in {} and {}",
            f.target(),
            g.target()
        )));
    }
    Ok(())
}

pub fn is_transverse(f: &CornerMapGerm, g: &CornerMapGerm) -> Result<bool> {
    check_cospan(f, g)?;
    let (m, a) = (f.source().dim, f.source().depth);
    let (n, b) = (g.source().dim, g.source().depth);
    let (p, c) = (f.target().dim, f.target().depth);
    if f.jacobian().hstack(g.jacobian()).rank() != p {
        return Ok(false);
    }
    let rows: Vec<usize> = (c..p).collect();
    let inner_f = f.jacobian().select(&rows, &(a..m).collect::<Vec<_>>());
    let inner_g = g.jacobian().select(&rows, &(b..n).collect::<Vec<_>>());
    Ok(inner_f.hstack(&inner_g).rank() == p - c)
}

/// Every pair of source strata landing on the same target stratum.
pub fn matched_triples(f: &CornerMapGerm, g: &CornerMapGerm) -> Result<Vec<Triple>> {
    check_cospan(f, g)?;
    let ys: Vec<(Label, Label)> =
        all_subsets(g.source().depth).into_iter().map(|b| (g.corner_label(&b), b)).collect();
    let mut out = Vec::new();
    for a in all_subsets(f.source().depth) {
        let l = f.corner_label(&a);
        for (lb, b) in &ys {
            if *lb == l {
                out.push(Triple { a: a.clone(), b: b.clone(), l: l.clone() });
            }
        }
    }
    Ok(out)
}

/// A matched triple with `|A| + |B| = |L|` other than the trivial one, if any.
pub fn strong_transversality_witness(f: &CornerMapGerm, g: &CornerMapGerm) -> Result<Option<Triple>> {
    Ok(matched_triples(f, g)?.into_iter().find(|t| t.index() == 0 && !t.is_trivial()))
}

pub fn is_strongly_transverse(f: &CornerMapGerm, g: &CornerMapGerm) -> Result<bool> {
    Ok(is_transverse(f, g)? && strong_transversality_witness(f, g)?.is_none())
}
