use std::time::Instant;

use anyhow::Result;
use serde::Serialize;
use serde_json::{json, Value};

use curvecensus::census::{
    lemma41_partition_check, levels, twist_mass_check, v_from_w, verify_theorem, verify_y_bound, w_from_y,
    y_from_w, CensusError, CensusTable, Verdict,
};
use curvecensus::modbounds::mass_check;
use curvecensus::models::ModelSpace;
use curvecensus::ExactRational;

use crate::census_cmd::tables;
use crate::config::{Check, Prepared};
use crate::report::{Exact, Outcome, Rows, Summary};

#[derive(Serialize)]
struct Identity {
    #[serde(skip_serializing_if = "Option::is_none")]
    m: Option<u64>,
    n: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    k: Option<u64>,
    lhs: Exact,
    rhs: Exact,
    slack: Exact,
    verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

#[derive(Serialize)]
struct Errored {
    key: String,
    error: String,
    verdict: Verdict,
}

struct Ctx<'a> {
    q: u64,
    rows: &'a mut Rows,
    summary: &'a mut Summary,
}

impl Ctx<'_> {
    fn identity(&mut self, check: Check, key: String, id: Identity) -> Value {
        let q = Some(self.q);
        let section = check.name();
        self.rows.value(section, q, key.clone(), "lhs", &id.lhs.value);
        self.rows.value(section, q, key.clone(), "rhs", &id.rhs.value);
        self.rows.value(section, q, key.clone(), "slack", &id.slack.value);
        self.rows.verdict(section, q, key.clone(), id.verdict);
        let qq = self.q;
        let note = id.note.clone();
        let (lhs, rhs, slack) = (&id.lhs.value, &id.rhs.value, &id.slack.value);
        self.summary.record(id.verdict, || {
            let extra = note.map(|n| format!(" ({n})")).unwrap_or_default();
            format!("{section} q={qq} {key}: lhs {lhs}, rhs {rhs}, slack {slack}{extra}")
        });
        serde_json::to_value(id).unwrap()
    }

    fn errored(&mut self, check: Check, key: String, err: CensusError) -> Value {
        let section = check.name();
        self.rows.verdict(section, Some(self.q), key.clone(), Verdict::Fail);
        let q = self.q;
        self.summary.record(Verdict::Fail, || format!("{section} q={q} {key}: {err}"));
        serde_json::to_value(Errored {
            key,
            error: err.to_string(),
            verdict: Verdict::Fail,
        })
        .unwrap()
    }
}

fn identity(m: Option<u64>, n: u64, k: Option<u64>, lhs: ExactRational, rhs: ExactRational, extra_ok: bool) -> Identity {
    let slack = &lhs - &rhs;
    let verdict = Verdict::from_bool(slack.is_zero() && extra_ok);
    Identity {
        m,
        n,
        k,
        lhs: lhs.into(),
        rhs: rhs.into(),
        slack: slack.into(),
        verdict,
        note: None,
    }
}

fn theorem(t: &CensusTable, prep: &Prepared, ctx: &mut Ctx) -> Vec<Value> {
    (1..=prep.config.max_big_n)
        .map(|n| {
            let key = format!("N={n}");
            match verify_theorem(t, n, &prep.theorem_constants) {
                Ok(v) => {
                    let q = Some(ctx.q);
                    ctx.rows.value("theorem", q, key.clone(), "v", &v.v);
                    ctx.rows.value("theorem", q, key.clone(), "r", &v.r);
                    ctx.rows.value("theorem", q, key.clone(), "slack", &v.check.slack);
                    ctx.rows.verdict("theorem", q, key.clone(), v.check.verdict);
                    let qq = ctx.q;
                    ctx.summary.record(v.check.verdict, || {
                        format!(
                            "theorem q={qq} {key}: |v/q - r| = {}, C N rho 2^nu = {}, slack {}",
                            v.check.lhs, v.check.scale, v.check.slack
                        )
                    });
                    serde_json::to_value(&v).unwrap()
                }
                Err(e) => ctx.errored(Check::Theorem, key, e),
            }
        })
        .collect()
}

fn ybound(t: &CensusTable, prep: &Prepared, ctx: &mut Ctx) -> Vec<Value> {
    levels(t.q, prep.config.max_n)
        .into_iter()
        .map(|(m, n)| {
            let key = format!("m={m} n={n}");
            match verify_y_bound(t, m, n, &prep.y_constants) {
                Ok(v) => {
                    let q = Some(ctx.q);
                    ctx.rows.value("ybound", q, key.clone(), "y", &v.y);
                    ctx.rows.value("ybound", q, key.clone(), "slack", &v.check.slack);
                    ctx.rows.verdict("ybound", q, key.clone(), v.check.verdict);
                    let qq = ctx.q;
                    ctx.summary.record(v.check.verdict, || {
                        format!(
                            "ybound q={qq} {key}: |y - q| = {}, C' m phi psi = {}, slack {}",
                            v.check.lhs, v.check.scale, v.check.slack
                        )
                    });
                    serde_json::to_value(&v).unwrap()
                }
                Err(e) => ctx.errored(Check::Ybound, key, e),
            }
        })
        .collect()
}

fn lemma41(t: &CensusTable, prep: &Prepared, ctx: &mut Ctx) -> Vec<Value> {
    (1..=prep.config.max_big_n)
        .map(|n| {
            let key = format!("N={n}");
            let res = (|| {
                let part = lemma41_partition_check(t, n)?;
                let mut id = identity(None, n, None, v_from_w(t, n)?, t.v(n)?, part.verdict == Verdict::Pass);
                if part.violations > 0 {
                    id.note = Some(format!("{} models outside the partition", part.violations));
                }
                Ok(id)
            })();
            match res {
                Ok(id) => ctx.identity(Check::Lemma41, key, id),
                Err(e) => ctx.errored(Check::Lemma41, key, e),
            }
        })
        .collect()
}

fn lemma42(t: &CensusTable, prep: &Prepared, ctx: &mut Ctx) -> Vec<Value> {
    let mut out = Vec::new();
    for (m, n) in levels(t.q, prep.config.max_n) {
        let res = (|| -> Result<Vec<Identity>, CensusError> {
            let expected = y_from_w(t, m, n)?;
            Ok(t.y_all_roots(m, n)?
                .into_iter()
                .map(|(k, y)| {
                    let integral = y.is_integer() && !y.is_negative();
                    let mut id = identity(Some(m), n, Some(k), expected.clone(), y, integral);
                    if !integral {
                        id.note = Some("pair count is not a nonnegative integer".into());
                    }
                    id
                })
                .collect())
        })();
        match res {
            Ok(ids) => {
                for id in ids {
                    let key = format!("m={m} n={n} k={}", id.k.unwrap());
                    out.push(ctx.identity(Check::Lemma42, key, id));
                }
            }
            Err(e) => out.push(ctx.errored(Check::Lemma42, format!("m={m} n={n}"), e)),
        }
    }
    out
}

fn lemma43(t: &CensusTable, prep: &Prepared, ctx: &mut Ctx) -> Vec<Value> {
    levels(t.q, prep.config.max_n)
        .into_iter()
        .map(|(m, n)| {
            let key = format!("m={m} n={n}");
            match w_from_y(t, m, n).and_then(|lhs| Ok(identity(Some(m), n, None, lhs, t.w(m, n)?, true))) {
                Ok(id) => ctx.identity(Check::Lemma43, key, id),
                Err(e) => ctx.errored(Check::Lemma43, key, e),
            }
        })
        .collect()
}

fn twists(space: &ModelSpace, ctx: &mut Ctx) -> Value {
    let report = twist_mass_check(space);
    let f = space.field();
    let q = Some(ctx.q);
    let mut failing = Vec::new();
    for t in &report.per_j {
        let key = format!("j={}", f.format(f.element(&t.j).unwrap()));
        ctx.rows.value("twists", q, key.clone(), "mass", &t.mass);
        ctx.rows.verdict("twists", q, key.clone(), t.verdict);
        if t.verdict != Verdict::Pass {
            failing.push(json!({ "j": t.j, "mass": t.mass }));
        }
    }
    let qq = ctx.q;
    let total = report.total.clone();
    let js = report.per_j.len();
    ctx.summary.record(report.verdict, || {
        format!("twists q={qq}: {js} j-invariants realized, total mass {total}")
    });
    json!({
        "j_invariants": report.per_j.len(),
        "classes": report.per_j.iter().map(|t| t.classes.len()).sum::<usize>(),
        "total": report.total,
        "failing": failing,
        "verdict": report.verdict,
    })
}

pub fn run(prep: &Prepared) -> Result<Outcome> {
    let start = Instant::now();
    let checks = &prep.config.checks;
    let wants = |c: Check| checks.contains(&c);
    let needs_pairs = [Check::Ybound, Check::Lemma42, Check::Lemma43].iter().any(|&c| wants(c));
    let needs_table = needs_pairs || wants(Check::Theorem) || wants(Check::Lemma41);
    let (tables, field_timing) = if needs_table {
        let max_n = if needs_pairs { prep.config.max_n } else { 0 };
        tables(prep, max_n)?
    } else {
        (Vec::new(), Vec::new())
    };

    let mut rows = Rows::default();
    let mut summary = Summary::default();
    let mut fields = Vec::new();
    for (i, f) in prep.specs.iter().enumerate() {
        let mut ctx = Ctx {
            q: f.order(),
            rows: &mut rows,
            summary: &mut summary,
        };
        let mut entry = serde_json::Map::new();
        entry.insert("q".into(), json!(f.order()));
        if let Some(t) = tables.get(i) {
            type Runner = fn(&CensusTable, &Prepared, &mut Ctx) -> Vec<Value>;
            let runners: [(Check, Runner); 5] = [
                (Check::Theorem, theorem),
                (Check::Ybound, ybound),
                (Check::Lemma41, lemma41),
                (Check::Lemma42, lemma42),
                (Check::Lemma43, lemma43),
            ];
            for (check, runner) in runners {
                if wants(check) {
                    entry.insert(check.name().into(), Value::Array(runner(t, prep, &mut ctx)));
                }
            }
        }
        if wants(Check::Twists) {
            entry.insert("twists".into(), twists(&ModelSpace::canonical(f), &mut ctx));
        }
        fields.push(Value::Object(entry));
    }

    let mut masses = Vec::new();
    if wants(Check::Mass) {
        for &p in &prep.config.mass_primes {
            let rep = mass_check(p)?;
            let key = format!("p={p}");
            rows.value("mass", None, key.clone(), "mass", &rep.mass);
            rows.value("mass", None, key.clone(), "expected", &rep.expected);
            rows.verdict("mass", None, key, rep.verdict);
            summary.record(rep.verdict, || format!("mass p={p}: {} vs {}", rep.mass, rep.expected));
            masses.push(json!({
                "p": p,
                "supersingular_j": rep.classes.len(),
                "mass": rep.mass,
                "expected": rep.expected,
                "verdict": rep.verdict,
            }));
        }
    }

    Ok(Outcome {
        command: "verify",
        body: json!({ "fields": fields, "mass": masses }),
        rows,
        summary: summary.finish(),
        timing: json!({ "total_seconds": start.elapsed().as_secs_f64(), "fields": field_timing }),
    })
}
