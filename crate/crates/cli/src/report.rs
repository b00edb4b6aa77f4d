use std::fs;
use std::io::{self, Write};
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::{json, Value};

use curvecensus::census::Verdict;
use curvecensus::ExactRational;

use crate::config::{Format, RunConfig};

pub const SCHEMA_VERSION: u32 = 1;
const DECIMAL_DIGITS: u32 = 6;

/// An exact value with a decimal rendering alongside.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Exact {
    #[serde(flatten)]
    pub value: ExactRational,
    pub decimal: String,
}

impl From<ExactRational> for Exact {
    fn from(value: ExactRational) -> Self {
        let decimal = value.to_decimal(DECIMAL_DIGITS);
        Exact { value, decimal }
    }
}

impl From<&ExactRational> for Exact {
    fn from(value: &ExactRational) -> Self {
        value.clone().into()
    }
}

/// One CSV line: a quantity attached to a key within a section for one `q`.
#[derive(Clone, Debug, Serialize)]
pub struct Row {
    pub section: &'static str,
    pub q: Option<u64>,
    pub key: String,
    pub quantity: &'static str,
    pub num: String,
    pub den: String,
    pub decimal: String,
    pub verdict: Option<Verdict>,
}

#[derive(Default)]
pub struct Rows(pub Vec<Row>);

impl Rows {
    pub fn value(&mut self, section: &'static str, q: Option<u64>, key: String, quantity: &'static str, x: &ExactRational) {
        self.0.push(Row {
            section,
            q,
            key,
            quantity,
            num: x.numer().to_string(),
            den: x.denom().to_string(),
            decimal: x.to_decimal(DECIMAL_DIGITS),
            verdict: None,
        });
    }

    pub fn verdict(&mut self, section: &'static str, q: Option<u64>, key: String, verdict: Verdict) {
        self.0.push(Row {
            section,
            q,
            key,
            quantity: "verdict",
            num: String::new(),
            den: String::new(),
            decimal: String::new(),
            verdict: Some(verdict),
        });
    }
}

/// Pass, fail and indeterminate tallies, with a line per non-passing check.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Summary {
    pub pass: u64,
    pub fail: u64,
    pub indeterminate: u64,
    pub verdict: Option<Verdict>,
    pub failures: Vec<String>,
    pub undecided: Vec<String>,
}

impl Summary {
    pub fn record(&mut self, verdict: Verdict, describe: impl FnOnce() -> String) {
        match verdict {
            Verdict::Pass => self.pass += 1,
            Verdict::Fail => {
                self.fail += 1;
                self.failures.push(describe());
            }
            Verdict::Indeterminate => {
                self.indeterminate += 1;
                self.undecided.push(describe());
            }
        }
    }

    pub fn overall(&self) -> Verdict {
        if self.fail > 0 {
            Verdict::Fail
        } else if self.indeterminate > 0 {
            Verdict::Indeterminate
        } else {
            Verdict::Pass
        }
    }

    pub fn finish(mut self) -> Self {
        self.verdict = Some(self.overall());
        self
    }
}

/// What a subcommand produces.
pub struct Outcome {
    pub command: &'static str,
    pub body: Value,
    pub rows: Rows,
    pub summary: Summary,
    pub timing: Value,
}

pub fn document(outcome: &Outcome, config: &RunConfig, runtime: Value) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "tool": "curvecensus",
        "tool_version": env!("CARGO_PKG_VERSION"),
        "command": outcome.command,
        "config": config,
        "results": outcome.body,
        "summary": outcome.summary,
        "runtime": runtime,
        "timing": outcome.timing,
    })
}

pub fn emit(outcome: &Outcome, config: &RunConfig, runtime: Value, format: Format, out: Option<&Path>) -> Result<()> {
    let mut bytes = Vec::new();
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut bytes, &document(outcome, config, runtime))?;
            bytes.push(b'\n');
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut bytes);
            for row in &outcome.rows.0 {
                w.serialize(row)?;
            }
            w.flush()?;
        }
    }
    match out {
        Some(path) => fs::write(path, &bytes).with_context(|| format!("writing {}", path.display()))?,
        None => io::stdout().lock().write_all(&bytes)?,
    }
    Ok(())
}
