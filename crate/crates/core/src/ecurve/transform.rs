use crate::ffield::{FieldElement, FieldSpec};

use super::{CurveError, CurveModel, CurvePoint};

/// The change of variables `x = u^2 x' + r`, `y = u^3 y' + u^2 s x' + t`.
///
/// Applying `g` to `E` gives the model `E'` in the primed coordinates; the
/// point map sends `(x, y)` on `E` to `(x', y')` on `E'`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Transformation {
    pub u: FieldElement,
    pub r: FieldElement,
    pub s: FieldElement,
    pub t: FieldElement,
}

impl Transformation {
    pub fn new(u: FieldElement, r: FieldElement, s: FieldElement, t: FieldElement) -> Result<Self, CurveError> {
        if u.is_zero() {
            return Err(CurveError::ZeroScaling);
        }
        Ok(Transformation { u, r, s, t })
    }

    pub fn identity(f: &FieldSpec) -> Self {
        Transformation {
            u: f.one(),
            r: f.zero(),
            s: f.zero(),
            t: f.zero(),
        }
    }

    pub fn scaling(f: &FieldSpec, u: FieldElement) -> Result<Self, CurveError> {
        Self::new(u, f.zero(), f.zero(), f.zero())
    }

    pub fn is_identity(&self, f: &FieldSpec) -> bool {
        *self == Self::identity(f)
    }

    /// `self` followed by `next`.
    pub fn compose(&self, next: &Transformation, f: &FieldSpec) -> Transformation {
        let (u1, r1, s1, t1) = (self.u, self.r, self.s, self.t);
        let (u2, r2, s2, t2) = (next.u, next.r, next.s, next.t);
        let u1sq = f.square(u1);
        Transformation {
            u: f.mul(u1, u2),
            r: f.add(r1, f.mul(u1sq, r2)),
            s: f.add(s1, f.mul(u1, s2)),
            t: f.add(
                f.add(t1, f.mul(u1sq, f.mul(s1, r2))),
                f.mul(f.mul(u1sq, u1), t2),
            ),
        }
    }

    pub fn inverse(&self, f: &FieldSpec) -> Transformation {
        let ui = f.inv(self.u).expect("u is nonzero");
        let ui2 = f.square(ui);
        Transformation {
            u: ui,
            r: f.neg(f.mul(self.r, ui2)),
            s: f.neg(f.mul(self.s, ui)),
            t: f.mul(f.sub(f.mul(self.r, self.s), self.t), f.mul(ui2, ui)),
        }
    }

    pub fn map_point(&self, f: &FieldSpec, p: CurvePoint) -> CurvePoint {
        match p {
            CurvePoint::Infinity => p,
            CurvePoint::Affine(x, y) => {
                let ui = f.inv(self.u).expect("u is nonzero");
                let ui2 = f.square(ui);
                let dx = f.sub(x, self.r);
                let xp = f.mul(dx, ui2);
                let yp = f.mul(f.sub(f.sub(y, f.mul(self.s, dx)), self.t), f.mul(ui2, ui));
                CurvePoint::Affine(xp, yp)
            }
        }
    }
}

/// Families of transformations searched for isomorphisms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TransformFamily {
    /// `(u, 0, 0, 0)`: the maps between short models when `p >= 5`.
    Scaling,
    /// `(u, r, 0, 0)`: the maps between models with `a1 = a3 = 0`, `p` odd.
    ScalingShift,
    /// Every `(u, r, s, t)`.
    Full,
}

impl TransformFamily {
    pub fn size(self, q: u64) -> u64 {
        match self {
            TransformFamily::Scaling => q - 1,
            TransformFamily::ScalingShift => q * (q - 1),
            TransformFamily::Full => q * q * q * (q - 1),
        }
    }

    /// Smallest family containing every isomorphism out of `e`.
    pub fn for_model(e: &CurveModel) -> Self {
        let f = e.field();
        let [a1, a2, a3, _, _] = e.coeffs();
        let p = f.characteristic();
        if p >= 5 && a1.is_zero() && a2.is_zero() && a3.is_zero() {
            TransformFamily::Scaling
        } else if p != 2 && a1.is_zero() && a3.is_zero() {
            TransformFamily::ScalingShift
        } else {
            TransformFamily::Full
        }
    }

    pub fn elements(self, f: &FieldSpec) -> Vec<Transformation> {
        let units: Vec<FieldElement> = f.elements().filter(|x| !x.is_zero()).collect();
        let all: Vec<FieldElement> = f.elements().collect();
        let zero = [f.zero()];
        let (rs, ss, ts): (&[FieldElement], &[FieldElement], &[FieldElement]) = match self {
            TransformFamily::Scaling => (&zero, &zero, &zero),
            TransformFamily::ScalingShift => (&all, &zero, &zero),
            TransformFamily::Full => (&all, &all, &all),
        };
        let mut out = Vec::with_capacity(self.size(f.order()) as usize);
        for &u in &units {
            for &r in rs {
                for &s in ss {
                    for &t in ts {
                        out.push(Transformation { u, r, s, t });
                    }
                }
            }
        }
        out
    }
}

impl<'f> CurveModel<'f> {
    /// The model obtained by the change of variables `g`.
    pub fn transform(&self, g: &Transformation) -> Result<CurveModel<'f>, CurveError> {
        let f = self.field();
        if g.u.is_zero() {
            return Err(CurveError::ZeroScaling);
        }
        let [a1, a2, a3, a4, a6] = self.coeffs();
        let (r, s, t) = (g.r, g.s, g.t);
        let ui = f.inv(g.u).unwrap();
        let ui2 = f.square(ui);
        let ui3 = f.mul(ui2, ui);
        let ui4 = f.square(ui2);
        let ui6 = f.square(ui3);
        let k = |n: i64| f.from_int(n);
        let na1 = f.mul(ui, f.add(a1, f.mul(k(2), s)));
        let na2 = f.mul(
            ui2,
            f.sub(f.add(f.sub(a2, f.mul(s, a1)), f.mul(k(3), r)), f.square(s)),
        );
        let na3 = f.mul(ui3, f.add(f.add(a3, f.mul(r, a1)), f.mul(k(2), t)));
        let na4 = {
            let terms = [
                a4,
                f.neg(f.mul(s, a3)),
                f.mul(k(2), f.mul(r, a2)),
                f.neg(f.mul(f.add(t, f.mul(r, s)), a1)),
                f.mul(k(3), f.square(r)),
                f.neg(f.mul(k(2), f.mul(s, t))),
            ];
            f.mul(ui4, terms.into_iter().fold(f.zero(), |acc, x| f.add(acc, x)))
        };
        let na6 = {
            let terms = [
                a6,
                f.mul(r, a4),
                f.mul(f.square(r), a2),
                f.pow(r, 3),
                f.neg(f.mul(t, a3)),
                f.neg(f.square(t)),
                f.neg(f.mul(r, f.mul(t, a1))),
            ];
            f.mul(ui6, terms.into_iter().fold(f.zero(), |acc, x| f.add(acc, x)))
        };
        CurveModel::new(f, [na1, na2, na3, na4, na6])
    }

    /// The transformed model together with the point map `E -> E'`.
    pub fn apply_transformation(
        &self,
        g: &Transformation,
    ) -> Result<(CurveModel<'f>, impl Fn(CurvePoint) -> CurvePoint + 'f), CurveError> {
        let image = self.transform(g)?;
        let f = self.field();
        let g = *g;
        Ok((image, move |p| g.map_point(f, p)))
    }

    /// Every transformation mapping this model to itself.
    pub fn automorphism_group(&self) -> Vec<Transformation> {
        let f = self.field();
        TransformFamily::for_model(self)
            .elements(f)
            .into_iter()
            .filter(|g| self.transform(g).as_ref() == Ok(self))
            .collect()
    }

    /// A transformation taking this model to `other`, if they are isomorphic
    /// over the base field.
    pub fn is_isomorphic(&self, other: &CurveModel<'f>) -> Option<Transformation> {
        if self.field() != other.field() || self.j_invariant() != other.j_invariant() {
            return None;
        }
        let fam = TransformFamily::for_model(self).max(TransformFamily::for_model(other));
        fam.elements(self.field())
            .into_iter()
            .find(|g| self.transform(g).as_ref() == Ok(other))
    }
}
