//! Action of a germ on corner strata and on boundary faces.

use super::CornerMapGerm;
use crate::error::Result;
use crate::model::Label;

/// Image of the stratum point labelled `source_label`, with the induced germ
/// between stratum models.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CornerPointMap {
    pub source_label: Label,
    pub target_label: Label,
    pub restricted: CornerMapGerm,
}

/// Target faces that pull back to zero (`plus`) and those that transfer,
/// paired with the receiving source face (`minus`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XiData {
    pub plus: Label,
    pub minus: Vec<(usize, usize)>,
}

/// Source faces split by whether some target face transfers onto them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryDecomposition {
    pub minus_faces: Label,
    pub plus_faces: Label,
}

impl CornerMapGerm {
    pub fn xi_data(&self) -> XiData {
        XiData {
            plus: self.flat_faces(),
            minus: self.transfer.iter().map(|(&j, &i)| (j, i)).collect(),
        }
    }

    pub fn boundary_decomposition(&self) -> BoundaryDecomposition {
        let minus_faces: Label = self.transfer.values().copied().collect();
        let plus_faces = self.source.faces().filter(|i| !minus_faces.contains(*i)).collect();
        BoundaryDecomposition { minus_faces, plus_faces }
    }

    /// Target faces transferred into `a`.
    pub fn corner_label(&self, a: &Label) -> Label {
        self.transfer.iter().filter(|(_, i)| a.contains(**i)).map(|(j, _)| *j).collect()
    }

    pub fn corner_map(&self, a: &Label) -> Result<CornerPointMap> {
        self.source.check_label(a)?;
        let b = self.corner_label(a);
        let restricted = self.restrict(a, &b)?;
        Ok(CornerPointMap { source_label: a.clone(), target_label: b, restricted })
    }

    /// Variant that also sends every stratum into the flat target faces.
    pub fn hat_corner_map(&self, a: &Label) -> Result<CornerPointMap> {
        self.source.check_label(a)?;
        let b = self.corner_label(a).union(&self.flat_faces());
        let restricted = self.restrict(a, &b)?;
        Ok(CornerPointMap { source_label: a.clone(), target_label: b, restricted })
    }
}

impl CornerPointMap {
    /// `next ∘ self`, where `next` starts at `self.target_label`.
    pub fn then(&self, next: &CornerPointMap) -> Result<CornerPointMap> {
        if next.source_label != self.target_label {
            return Err(crate::error::Error::BadLabel(format!(
                "{} does not continue from {}",
                next.source_label, self.target_label
            )));
        }
        Ok(CornerPointMap {
            source_label: self.source_label.clone(),
            target_label: next.target_label.clone(),
            restricted: super::compose(&next.restricted, &self.restricted)?,
        })
    }
}
