use std::time::Instant;

use anyhow::Result;
use serde_json::{json, Value};

use curvecensus::census::{levels, CensusTable};
use curvecensus::ExactRational;

use crate::cache::table_for;
use crate::config::Prepared;
use crate::report::{Exact, Outcome, Rows, Summary};

/// Loads or computes the table of every field, recording per-field timing.
pub fn tables(prep: &Prepared, max_n: u64) -> Result<(Vec<CensusTable>, Vec<Value>)> {
    let mut tables = Vec::new();
    let mut timing = Vec::new();
    for f in &prep.specs {
        let start = Instant::now();
        let (t, status) = table_for(&prep.runtime.cache_dir, f, max_n)?;
        timing.push(json!({
            "q": f.order(),
            "seconds": start.elapsed().as_secs_f64(),
            "cache": status,
        }));
        tables.push(t);
    }
    Ok((tables, timing))
}

fn summarize(t: &CensusTable, max_big_n: u64, max_n: u64, rows: &mut Rows) -> Result<Value> {
    let q = Some(t.q);
    let gamma = ExactRational::from(t.gamma);
    let structures: Vec<Value> = t
        .structures
        .iter()
        .map(|s| {
            let weighted = ExactRational::from(s.count) / gamma.clone();
            rows.value("structure", q, format!("A={} B={}", s.a, s.b), "weighted", &weighted);
            json!({ "a": s.a, "b": s.b, "models": s.count, "weighted": Exact::from(weighted) })
        })
        .collect();
    let mut v = Vec::new();
    for n in 1..=max_big_n {
        let value = t.v(n)?;
        rows.value("v", q, format!("N={n}"), "value", &value);
        v.push(json!({ "N": n, "value": Exact::from(value) }));
    }
    let mut w = Vec::new();
    let mut y = Vec::new();
    for (m, n) in levels(t.q, max_n) {
        let key = format!("m={m} n={n}");
        let wv = t.w(m, n)?;
        rows.value("w", q, key.clone(), "value", &wv);
        w.push(json!({ "m": m, "n": n, "value": Exact::from(wv) }));
        let yv = t.y(m, n)?;
        rows.value("y", q, key, "value", &yv);
        y.push(json!({ "m": m, "n": n, "value": Exact::from(yv) }));
    }
    Ok(json!({
        "p": t.p,
        "e": t.e,
        "q": t.q,
        "modulus": t.modulus,
        "form": t.form,
        "gamma": t.gamma,
        "models": t.models,
        "structures": structures,
        "v": v,
        "w": w,
        "y": y,
    }))
}

pub fn run(prep: &Prepared) -> Result<Outcome> {
    let start = Instant::now();
    let max_n = prep.config.max_n;
    let (tables, field_timing) = tables(prep, max_n)?;
    let mut rows = Rows::default();
    let fields = tables
        .iter()
        .map(|t| summarize(t, prep.config.max_big_n, max_n, &mut rows))
        .collect::<Result<Vec<_>>>()?;
    Ok(Outcome {
        command: "census",
        body: json!({ "fields": fields }),
        rows,
        summary: Summary::default().finish(),
        timing: json!({ "total_seconds": start.elapsed().as_secs_f64(), "fields": field_timing }),
    })
}
