//! Explicit fibre product germ and its universal property.

use super::interface::{interface_unchecked, TransversalityInterface};
use super::{check_cospan, is_transverse};
use crate::error::{Error, Result};
use crate::germ::{compose, CornerMapGerm};
use crate::linalg::{Matrix, Q};
use crate::model::{Label, ModelCorner};
use num::{One, Zero};
use std::collections::BTreeMap;

/// Where a boundary face of the fibre product comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RegistryFace {
    /// A face of `X` that no target face transfers to.
    X(usize),
    /// A face of `Y` that no target face transfers to.
    Y(usize),
    /// A class of shared target faces, by index into the interface classes.
    Class(usize),
}

#[derive(Debug, Clone)]
pub struct FibreLedger {
    pub w_model: ModelCorner,
    pub registry: Vec<RegistryFace>,
    pub pi_x: CornerMapGerm,
    pub pi_y: CornerMapGerm,
    pub interface: TransversalityInterface,
    /// Columns span `ker [J_f | -J_g]`; column `r` is dual to W coordinate `r`.
    pub basis: Matrix,
    /// Functionals on `R^m ⊕ R^n` giving the W coordinates; `coords · basis = I`.
    pub coords: Matrix,
    /// Depth predicted by counting faces: `a + b - c`.
    pub expected_depth: usize,
}

impl FibreLedger {
    pub fn depth_matches_count(&self) -> bool {
        self.w_model.depth == self.expected_depth
    }

    /// Faces of `X` and of `Y` whose coordinates become W face `r` (1-based).
    pub fn face_sources(&self, r: usize) -> (Label, Label) {
        match &self.registry[r - 1] {
            RegistryFace::X(i) => (Label::from([*i]), Label::empty()),
            RegistryFace::Y(j) => (Label::empty(), Label::from([*j])),
            RegistryFace::Class(e) => {
                let e = &self.interface.classes[*e];
                (e.x_faces.clone(), e.y_faces.clone())
            }
        }
    }

    pub fn describe_face(&self, r: usize) -> String {
        match &self.registry[r - 1] {
            RegistryFace::X(i) => format!("x-face {i}"),
            RegistryFace::Y(j) => format!("y-face {j}"),
            RegistryFace::Class(e) => format!("class {}", self.interface.classes[*e].members),
        }
    }
}

fn unit_row(len: usize, k: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); len];
    v[k] = Q::one();
    v
}

pub fn fibre_product(f: &CornerMapGerm, g: &CornerMapGerm) -> Result<FibreLedger> {
    check_cospan(f, g)?;
    if !is_transverse(f, g)? {
        return Err(Error::NotTransverse);
    }
    let (x, y, z) = (f.source(), g.source(), f.target());
    let (m, n) = (x.dim, y.dim);
    let iface = interface_unchecked(f, g);
    let v = iface.verdicts;
    if !(v.b && v.c && v.d) {
        return Err(Error::InternalInvariantViolation(format!(
            "transverse pair violates interface conditions: B={} C={} D={}",
            v.b, v.c, v.d
        )));
    }

    let hit_x: Label = iface.pi_f.values().copied().collect();
    let hit_y: Label = iface.pi_g.values().copied().collect();
    let mut registry: Vec<RegistryFace> = Vec::new();
    registry.extend(x.faces().filter(|i| !hit_x.contains(*i)).map(RegistryFace::X));
    registry.extend(y.faces().filter(|j| !hit_y.contains(*j)).map(RegistryFace::Y));
    registry.extend(
        iface.classes.iter().enumerate().filter(|(_, e)| e.contributes_face()).map(|(k, _)| RegistryFace::Class(k)),
    );
    let d = registry.len();

    let width = m + n;
    let functionals: Vec<Vec<Q>> = registry
        .iter()
        .map(|r| match r {
            RegistryFace::X(i) => unit_row(width, i - 1),
            RegistryFace::Y(j) => unit_row(width, m + j - 1),
            RegistryFace::Class(k) => {
                let q = iface.classes[*k].members.iter().next().expect("class is nonempty");
                unit_row(width, iface.pi_f[&q] - 1)
            }
        })
        .collect();

    let kernel = f.jacobian().hstack(&g.jacobian().scale(&-Q::one())).kernel();
    let kdim = kernel.ncols();
    let mut coords = Matrix::from_rows(width, functionals);
    if coords.mul(&kernel).rank() != d {
        return Err(Error::InternalInvariantViolation(
            "boundary functionals are dependent on the fibre product".into(),
        ));
    }
    // complete with ambient coordinates, leftmost first
    for l in 0..width {
        if coords.nrows() == kdim {
            break;
        }
        let cand = coords.vstack(&Matrix::from_rows(width, vec![unit_row(width, l)]));
        if cand.mul(&kernel).rank() > cand.nrows() - 1 {
            coords = cand;
        }
    }
    let s = coords.mul(&kernel);
    let basis = kernel.mul(&s.inverse().ok_or_else(|| {
        Error::InternalInvariantViolation("coordinate completion is singular".into())
    })?);

    let w_model = ModelCorner::new(kdim, d)?;
    let rows_x: Vec<usize> = (0..m).collect();
    let rows_y: Vec<usize> = (m..width).collect();
    let cols: Vec<usize> = (0..kdim).collect();

    let mut tx = BTreeMap::new();
    let mut ty = BTreeMap::new();
    for (r, face) in registry.iter().enumerate() {
        match face {
            RegistryFace::X(i) => {
                tx.insert(*i, r + 1);
            }
            RegistryFace::Y(j) => {
                ty.insert(*j, r + 1);
            }
            RegistryFace::Class(k) => {
                let e = &iface.classes[*k];
                for i in e.x_faces.iter() {
                    tx.insert(i, r + 1);
                }
                for j in e.y_faces.iter() {
                    ty.insert(j, r + 1);
                }
            }
        }
    }
    let wrap = |e: Error| Error::InternalInvariantViolation(format!("projection germ: {e}"));
    let pi_x = CornerMapGerm::new(w_model, x, tx, basis.select(&rows_x, &cols)).map_err(wrap)?;
    let pi_y = CornerMapGerm::new(w_model, y, ty, basis.select(&rows_y, &cols)).map_err(wrap)?;
    if compose(f, &pi_x)? != compose(g, &pi_y)? {
        return Err(Error::InternalInvariantViolation("square does not commute".into()));
    }
    let expected_depth = x.depth + y.depth - z.depth;
    Ok(FibreLedger { w_model, registry, pi_x, pi_y, interface: iface, basis, coords, expected_depth })
}

/// The unique `h` with `π_X ∘ h = h1` and `π_Y ∘ h = h2`.
pub fn check_universal_property(
    f: &CornerMapGerm,
    g: &CornerMapGerm,
    ledger: &FibreLedger,
    h1: &CornerMapGerm,
    h2: &CornerMapGerm,
) -> Result<CornerMapGerm> {
    let src = h1.source();
    if h2.source() != src || h1.target() != f.source() || h2.target() != g.source() {
        return Err(Error::NoMediator("legs do not form a cone over the cospan".into()));
    }
    if compose(f, h1)? != compose(g, h2)? {
        return Err(Error::NoMediator("legs do not commute over the base".into()));
    }
    let stacked = h1.jacobian().vstack(h2.jacobian());
    let jac = ledger.coords.mul(&stacked);
    if ledger.basis.mul(&jac) != stacked {
        return Err(Error::NoMediator("legs leave the fibre product tangent space".into()));
    }
    if ledger.basis.rank() != ledger.basis.ncols() {
        return Err(Error::NoMediator("kernel identification is not injective".into()));
    }
    let mut transfer = BTreeMap::new();
    for (r, face) in ledger.registry.iter().enumerate() {
        let target = match face {
            RegistryFace::X(i) => h1.pi(*i),
            RegistryFace::Y(j) => h2.pi(*j),
            RegistryFace::Class(k) => {
                let e = &ledger.interface.classes[*k];
                let q = e.members.iter().next().expect("class is nonempty");
                h1.pi(ledger.interface.pi_f[&q])
            }
        };
        if let Some(s) = target {
            transfer.insert(r + 1, s);
        }
    }
    let h = CornerMapGerm::new(src, ledger.w_model, transfer, jac)
        .map_err(|e| Error::NoMediator(format!("mediator is not a valid germ: {e}")))?;
    if compose(&ledger.pi_x, &h)? != *h1 || compose(&ledger.pi_y, &h)? != *h2 {
        return Err(Error::NoMediator("mediator does not reproduce the legs".into()));
    }
    Ok(h)
}
