use std::time::Instant;

use anyhow::Result;
use serde_json::{json, Value};

use curvecensus::census::{hat_v, levels, twist_mass_check, Verdict};
use curvecensus::modbounds::{
    cusp_bound, cusp_reduction_bound, cusps_exact, genus_bound, genus_exact, ss_bound, ss_exact, LevelParams,
};
use curvecensus::models::ModelSpace;
use curvecensus::numtheory::{phi, r_closed_form};
use curvecensus::ExactRational;

use crate::config::Prepared;
use crate::report::{Exact, Outcome, Rows, Summary};

fn timing(start: Instant) -> Value {
    json!({ "total_seconds": start.elapsed().as_secs_f64() })
}

pub fn rtable(prep: &Prepared) -> Result<Outcome> {
    let start = Instant::now();
    let mut rows = Rows::default();
    let mut summary = Summary::default();
    let mut fields = Vec::new();
    for f in &prep.specs {
        let q = f.order();
        let mut table = Vec::new();
        for n in 1..=prep.config.max_big_n {
            let r = r_closed_form(n, q)?;
            let estimator = hat_v(q, n)? / ExactRational::from(q);
            let inv_n = ExactRational::new(1, n as i64);
            let inv_phi = ExactRational::new(1, phi(n)? as i64);
            let relation = match r.cmp(&inv_n) {
                std::cmp::Ordering::Greater => "greater",
                std::cmp::Ordering::Equal => "equal",
                std::cmp::Ordering::Less => "less",
            };
            let verdict = Verdict::from_bool(estimator == r && (r > inv_n || n == 1));
            summary.record(verdict, || format!("rtable q={q} N={n}: r = {r}, v-hat/q = {estimator}, 1/N = {inv_n}"));
            let key = format!("N={n}");
            rows.value("rtable", Some(q), key.clone(), "r", &r);
            rows.value("rtable", Some(q), key.clone(), "vhat_over_q", &estimator);
            rows.value("rtable", Some(q), key.clone(), "one_over_N", &inv_n);
            rows.value("rtable", Some(q), key.clone(), "one_over_phi", &inv_phi);
            rows.verdict("rtable", Some(q), key, verdict);
            table.push(json!({
                "N": n,
                "r": Exact::from(r),
                "vhat_over_q": Exact::from(estimator),
                "one_over_N": Exact::from(inv_n),
                "one_over_phi": Exact::from(inv_phi),
                "r_vs_one_over_N": relation,
                "verdict": verdict,
            }));
        }
        fields.push(json!({ "q": q, "rows": table }));
    }
    Ok(Outcome {
        command: "rtable",
        body: json!({ "fields": fields }),
        rows,
        summary: summary.finish(),
        timing: timing(start),
    })
}

fn pair(exact: Option<ExactRational>, bound: Option<ExactRational>) -> (Value, bool) {
    let ok = match (&exact, &bound) {
        (Some(e), Some(b)) => e <= b,
        _ => true,
    };
    let v = json!({
        "exact": exact.map(Exact::from),
        "bound": bound.map(Exact::from),
    });
    (v, ok)
}

/// Levels of `levels_arg` valid over `F_q`, or every level with `n <= max_n`.
pub fn levels_for(q: u64, levels_arg: &[(u64, u64)], max_n: u64) -> Vec<(u64, u64)> {
    if levels_arg.is_empty() {
        levels(q, max_n)
    } else {
        levels_arg
            .iter()
            .copied()
            .filter(|&(m, n)| LevelParams::new(q, m, n).is_ok())
            .collect()
    }
}

pub fn bounds(prep: &Prepared) -> Result<Outcome> {
    let start = Instant::now();
    let mut rows = Rows::default();
    let mut summary = Summary::default();
    let mut fields = Vec::new();
    for f in &prep.specs {
        let q = f.order();
        let mut table = Vec::new();
        for (m, n) in levels_for(q, &prep.config.levels, prep.config.max_n) {
            let l = LevelParams::new(q, m, n)?;
            let (genus, g_ok) = pair(genus_exact(&l).ok(), Some(genus_bound(&l)));
            let (cusps, c_ok) = pair(cusps_exact(&l).ok(), Some(cusp_bound(&l)));
            let (ss, s_ok) = pair(ss_exact(&l).ok(), ss_bound(&l).ok());
            let verdict = Verdict::from_bool(g_ok && c_ok && s_ok);
            let key = format!("m={m} n={n}");
            summary.record(verdict, || format!("bounds q={q} {key}: an exact value exceeds its bound"));
            let quantities = [
                ("genus_exact", genus_exact(&l).ok()),
                ("genus_bound", Some(genus_bound(&l))),
                ("cusps_exact", cusps_exact(&l).ok()),
                ("cusps_bound", Some(cusp_bound(&l))),
                ("cusps_reduction_bound", cusp_reduction_bound(&l).ok()),
                ("supersingular_exact", ss_exact(&l).ok()),
                ("supersingular_bound", ss_bound(&l).ok()),
            ];
            for (name, value) in &quantities {
                if let Some(x) = value {
                    rows.value("bounds", Some(q), key.clone(), name, x);
                }
            }
            rows.verdict("bounds", Some(q), key, verdict);
            let attained = cusps_exact(&l).ok() == Some(cusp_bound(&l));
            table.push(json!({
                "m": m,
                "n": n,
                "n_prime": l.n_prime,
                "r": l.r,
                "genus": genus,
                "cusps": cusps,
                "cusps_reduction_bound": cusp_reduction_bound(&l).ok().map(Exact::from),
                "cusps_attain_bound": attained,
                "supersingular": ss,
                "verdict": verdict,
            }));
        }
        fields.push(json!({ "q": q, "levels": table }));
    }
    Ok(Outcome {
        command: "bounds",
        body: json!({ "fields": fields }),
        rows,
        summary: summary.finish(),
        timing: timing(start),
    })
}

pub fn twists(prep: &Prepared) -> Result<Outcome> {
    let start = Instant::now();
    let mut rows = Rows::default();
    let mut summary = Summary::default();
    let mut fields = Vec::new();
    for f in &prep.specs {
        let q = f.order();
        let report = twist_mass_check(&ModelSpace::canonical(f));
        for t in &report.per_j {
            let key = format!("j={}", f.format(f.element(&t.j)?));
            rows.value("twists", Some(q), key.clone(), "mass", &t.mass);
            rows.verdict("twists", Some(q), key, t.verdict);
        }
        let total = report.total.clone();
        summary.record(report.verdict, || format!("twists q={q}: total mass {total}"));
        fields.push(serde_json::to_value(&report)?);
    }
    Ok(Outcome {
        command: "twists",
        body: json!({ "fields": fields }),
        rows,
        summary: summary.finish(),
        timing: timing(start),
    })
}
