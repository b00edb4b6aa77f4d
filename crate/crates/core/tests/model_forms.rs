//! Weighted counts do not depend on which complete model space is enumerated.

use std::collections::BTreeMap;

use curvecensus::census::{CensusOptions, CensusTable};
use curvecensus::models::{ModelForm, ModelSpace};
use curvecensus::{make_field, ExactRational};

fn weighted_structures(t: &CensusTable) -> BTreeMap<(u64, u64), ExactRational> {
    t.structures
        .iter()
        .map(|s| ((s.a, s.b), ExactRational::new(s.count as i64, t.gamma as i64)))
        .collect()
}

fn compare(p: u64, e: u32, forms: &[ModelForm], max_n: u64) {
    let f = make_field(p, e).unwrap();
    let opts = CensusOptions { max_n, ..Default::default() };
    let tables: Vec<CensusTable> = forms
        .iter()
        .map(|&form| CensusTable::compute(&ModelSpace::with_form(&f, form).unwrap(), &opts).unwrap())
        .collect();
    let base = &tables[0];
    for t in &tables[1..] {
        assert_eq!(weighted_structures(base), weighted_structures(t), "q={} {:?}", base.q, t.form);
        for n in 1..=2 * base.q + 2 {
            assert_eq!(base.v(n).unwrap(), t.v(n).unwrap());
        }
        for (m, n) in base.levels(max_n) {
            assert_eq!(base.w(m, n).unwrap(), t.w(m, n).unwrap());
            assert_eq!(base.y_all_roots(m, n).unwrap(), t.y_all_roots(m, n).unwrap(), "({m},{n})");
        }
    }
}

#[test]
fn char_three_reduced_matches_long() {
    compare(3, 1, &[ModelForm::Reduced, ModelForm::Long], 6);
    compare(3, 2, &[ModelForm::Reduced, ModelForm::Long], 0);
}

#[test]
fn short_reduced_and_long_agree_for_q5() {
    compare(5, 1, &[ModelForm::Short, ModelForm::Reduced, ModelForm::Long], 4);
}

#[test]
fn short_matches_reduced_for_q7() {
    compare(7, 1, &[ModelForm::Short, ModelForm::Reduced], 6);
}

#[test]
fn table_survives_json() {
    let f = make_field(2, 2).unwrap();
    let t = CensusTable::compute(&ModelSpace::canonical(&f), &CensusOptions { max_n: 6, ..Default::default() })
        .unwrap();
    let text = serde_json::to_string(&t).unwrap();
    let back: CensusTable = serde_json::from_str(&text).unwrap();
    assert_eq!(back, t);
}
