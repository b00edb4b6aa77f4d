//! Spaces of Weierstrass models over a fixed field.
//!
//! A model space is a set of coefficient vectors closed under a group of
//! transformations whose stabilizers are exactly the automorphism groups.
//! Dividing a count of models by the group size therefore gives the count of
//! isomorphism classes weighted by `1/#Aut`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ecurve::{CurveModel, TransformFamily};
use crate::ffield::{FieldElement, FieldSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelForm {
    /// `y^2 = x^3 + a4 x + a6`; characteristic at least 5.
    Short,
    /// `y^2 = x^3 + a2 x^2 + a4 x + a6`; odd characteristic.
    Reduced,
    /// All five coefficients free.
    Long,
}

impl ModelForm {
    /// Free coefficients as positions in `[a1, a2, a3, a4, a6]`.
    fn slots(self) -> &'static [usize] {
        match self {
            ModelForm::Short => &[3, 4],
            ModelForm::Reduced => &[1, 3, 4],
            ModelForm::Long => &[0, 1, 2, 3, 4],
        }
    }

    pub fn family(self) -> TransformFamily {
        match self {
            ModelForm::Short => TransformFamily::Scaling,
            ModelForm::Reduced => TransformFamily::ScalingShift,
            ModelForm::Long => TransformFamily::Full,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("{form:?} models are not complete in characteristic {p}")]
    FormUnavailable { form: ModelForm, p: u64 },
}

#[derive(Clone, Copy, Debug)]
pub struct ModelSpace<'f> {
    field: &'f FieldSpec,
    form: ModelForm,
}

impl<'f> ModelSpace<'f> {
    /// Short models for `p >= 5`, reduced models for `p = 3`, long models
    /// for `p = 2`.
    pub fn canonical(field: &'f FieldSpec) -> Self {
        let form = match field.characteristic() {
            2 => ModelForm::Long,
            3 => ModelForm::Reduced,
            _ => ModelForm::Short,
        };
        ModelSpace { field, form }
    }

    pub fn long(field: &'f FieldSpec) -> Self {
        ModelSpace {
            field,
            form: ModelForm::Long,
        }
    }

    pub fn with_form(field: &'f FieldSpec, form: ModelForm) -> Result<Self, ModelError> {
        let p = field.characteristic();
        let ok = match form {
            ModelForm::Short => p >= 5,
            ModelForm::Reduced => p != 2,
            ModelForm::Long => true,
        };
        if ok {
            Ok(ModelSpace { field, form })
        } else {
            Err(ModelError::FormUnavailable { form, p })
        }
    }

    pub fn field(&self) -> &'f FieldSpec {
        self.field
    }

    pub fn form(&self) -> ModelForm {
        self.form
    }

    pub fn family(&self) -> TransformFamily {
        self.form.family()
    }

    /// Size of the transformation group acting on the space.
    pub fn gamma(&self) -> u64 {
        self.family().size(self.field.order())
    }

    /// Number of coefficient vectors, singular ones included.
    pub fn raw_size(&self) -> u64 {
        self.field.order().pow(self.form.slots().len() as u32)
    }

    /// Coefficients of the vector at `index`; the first free coefficient is
    /// the most significant base-`q` digit.
    pub fn coeffs_at(&self, index: u64) -> [FieldElement; 5] {
        let q = self.field.order();
        let mut a = [self.field.zero(); 5];
        let mut k = index;
        for &slot in self.form.slots().iter().rev() {
            a[slot] = self.field.element_at((k % q) as u32).expect("digit below q");
            k /= q;
        }
        a
    }

    /// The model at `index`, or `None` if it is singular.
    pub fn model_at(&self, index: u64) -> Option<CurveModel<'f>> {
        CurveModel::new(self.field, self.coeffs_at(index)).ok()
    }

    /// Position of a model in this space, if it has the right shape.
    pub fn index_of(&self, e: &CurveModel) -> Option<u64> {
        let a = e.coeffs();
        let slots = self.form.slots();
        let fixed_zero = (0..5).filter(|i| !slots.contains(i)).all(|i| a[i].is_zero());
        if e.field() != self.field || !fixed_zero {
            return None;
        }
        let q = self.field.order();
        Some(slots.iter().fold(0, |acc, &s| acc * q + a[s].index() as u64))
    }

    /// Nonsingular models in index order.
    pub fn models(&self) -> impl Iterator<Item = CurveModel<'f>> + '_ {
        let s = *self;
        (0..self.raw_size()).filter_map(move |i| s.model_at(i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::make_field;

    #[test]
    fn model_counts() {
        let f5 = make_field(5, 1).unwrap();
        let short = ModelSpace::canonical(&f5);
        assert_eq!(short.form(), ModelForm::Short);
        assert_eq!(short.gamma(), 4);
        // Oracle: 4a^3 + 27b^2 = 0 over F_5.
        let singular = (0..5i64)
            .flat_map(|a| (0..5i64).map(move |b| (a, b)))
            .filter(|&(a, b)| (4 * a * a * a + 27 * b * b) % 5 == 0)
            .count();
        assert_eq!(short.models().count(), 25 - singular);

        let f2 = make_field(2, 1).unwrap();
        let long = ModelSpace::canonical(&f2);
        assert_eq!(long.raw_size(), 32);
        assert_eq!(long.gamma(), 8);
        let nonsingular = long.models().count();
        assert!(nonsingular > 0 && nonsingular < 32);

        let f3 = make_field(3, 1).unwrap();
        assert_eq!(ModelSpace::canonical(&f3).form(), ModelForm::Reduced);
        assert_eq!(ModelSpace::canonical(&f3).gamma(), 6);
        assert!(ModelSpace::with_form(&f3, ModelForm::Short).is_err());
        assert!(ModelSpace::with_form(&f2, ModelForm::Reduced).is_err());
    }

    #[test]
    fn index_round_trip() {
        for (p, e) in [(2, 2), (3, 1), (7, 1)] {
            let f = make_field(p, e).unwrap();
            for space in [ModelSpace::canonical(&f), ModelSpace::long(&f)] {
                for i in 0..space.raw_size() {
                    if let Some(m) = space.model_at(i) {
                        assert_eq!(space.index_of(&m), Some(i));
                    }
                }
            }
        }
    }

    /// Every model's orbit under the space's group stays inside the space.
    #[test]
    fn spaces_are_closed_under_their_family() {
        for (p, e) in [(3, 1), (3, 2), (5, 1), (7, 1), (2, 1)] {
            let f = make_field(p, e).unwrap();
            let space = ModelSpace::canonical(&f);
            let group = space.family().elements(&f);
            for m in space.models().step_by(5) {
                for g in &group {
                    assert!(space.index_of(&m.transform(g).unwrap()).is_some());
                }
            }
        }
    }
}
