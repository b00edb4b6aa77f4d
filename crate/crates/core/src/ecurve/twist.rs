use std::collections::HashSet;

use crate::ffield::FieldElement;
use crate::models::ModelSpace;
use crate::rational::ExactRational;

use super::{CurveModel, TransformFamily};

/// One isomorphism class inside a family of models: a representative, the
/// number of transformations fixing it and the size of its orbit.
#[derive(Clone, Debug)]
pub struct OrbitClass<'f> {
    pub representative: CurveModel<'f>,
    pub aut_order: u64,
    pub orbit_size: u64,
}

impl OrbitClass<'_> {
    /// `1 / #Aut`.
    pub fn mass(&self) -> ExactRational {
        ExactRational::new(1, self.aut_order as i64)
    }
}

/// Partitions `models` into orbits under `family`, which must map the set
/// of models to itself. Classes appear in order of their first member.
pub fn orbit_classes<'f>(
    models: impl IntoIterator<Item = CurveModel<'f>>,
    family: TransformFamily,
) -> Vec<OrbitClass<'f>> {
    let mut seen: HashSet<[FieldElement; 5]> = HashSet::new();
    let mut group = None;
    let mut out = Vec::new();
    for e in models {
        if seen.contains(&e.coeffs()) {
            continue;
        }
        let group = group.get_or_insert_with(|| family.elements(e.field()));
        let mut aut = 0u64;
        let mut orbit = HashSet::new();
        for g in group.iter() {
            let img = e.transform(g).expect("transformations preserve smoothness");
            if img == e {
                aut += 1;
            }
            orbit.insert(img.coeffs());
        }
        debug_assert_eq!(aut * orbit.len() as u64, group.len() as u64);
        out.push(OrbitClass {
            representative: e,
            aut_order: aut,
            orbit_size: orbit.len() as u64,
        });
        seen.extend(orbit);
    }
    out
}

impl<'f> CurveModel<'f> {
    /// Classes of the canonical model space with the same `j`-invariant.
    pub fn twist_classes(&self) -> Vec<OrbitClass<'f>> {
        let space = ModelSpace::canonical(self.field());
        let j = self.j_invariant();
        orbit_classes(space.models().filter(|e| e.j_invariant() == j), space.family())
    }

    /// One representative per base-field class of curves with this `j`.
    pub fn twists(&self) -> Vec<CurveModel<'f>> {
        self.twist_classes().into_iter().map(|c| c.representative).collect()
    }
}
