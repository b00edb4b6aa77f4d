//! `curvecensus`: runs censuses, checks them and writes reports.
//!
//! Exit codes: 0 when every verdict passes, 1 when any fails, 2 for usage
//! errors and 3 when a verdict could not be decided at the given precision.

mod cache;
mod census_cmd;
mod config;
mod report;
mod tables_cmd;
mod verify_cmd;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser};
use serde_json::json;

use curvecensus::census::Verdict;
use curvecensus::exec::with_threads;
use curvecensus::ffield::MAX_FIELD_ORDER;
use curvecensus::numtheory::is_prime;

use config::{Check, Cli, Command, Prepared};
use report::Outcome;

fn usage_error(msg: String) -> ! {
    Cli::command().error(ErrorKind::ValueValidation, msg).exit()
}

fn prepare(cmd: &Command) -> Result<Prepared, String> {
    match cmd {
        Command::Census(a) | Command::Rtable(a) | Command::Twists(a) => a.prepare(),
        Command::Verify(v) => {
            let mut prep = v.common.prepare()?;
            for &p in &v.mass_primes {
                if !is_prime(p) || p < 5 || p.checked_mul(p).is_none_or(|q| q > MAX_FIELD_ORDER) {
                    return Err(format!("--mass-prime {p}: need a prime p >= 5 with p^2 <= {MAX_FIELD_ORDER}"));
                }
            }
            let mut checks = if v.only.is_empty() { Check::ALL.to_vec() } else { v.only.clone() };
            checks.sort();
            checks.dedup();
            if checks.contains(&Check::Mass) {
                prep.config.mass_primes = v.mass_primes.clone();
            }
            prep.config.checks = checks;
            Ok(prep)
        }
        Command::Bounds(b) => {
            let mut prep = b.common.prepare()?;
            for &(m, n) in &b.levels {
                if !prep.specs.iter().any(|f| tables_cmd::levels_for(f.order(), &[(m, n)], 0).len() == 1) {
                    return Err(format!("level ({m}, {n}) needs m | gcd(n, q - 1) for some requested q"));
                }
            }
            prep.config.levels = b.levels.clone();
            Ok(prep)
        }
    }
}

fn run(cmd: &Command, prep: &Prepared) -> anyhow::Result<Outcome> {
    match cmd {
        Command::Census(_) => census_cmd::run(prep),
        Command::Verify(_) => verify_cmd::run(prep),
        Command::Rtable(_) => tables_cmd::rtable(prep),
        Command::Bounds(_) => tables_cmd::bounds(prep),
        Command::Twists(_) => tables_cmd::twists(prep),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let prep = prepare(&cli.command).unwrap_or_else(|msg| usage_error(msg));
    let rt = &prep.runtime;
    let outcome = match with_threads(rt.jobs, || run(&cli.command, &prep)) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(1);
        }
    };
    let runtime = json!({
        "jobs": rt.jobs,
        "cache_dir": rt.cache_dir,
    });
    if let Err(e) = report::emit(&outcome, &prep.config, runtime, rt.format, rt.out.as_deref()) {
        eprintln!("error: {e:#}");
        return ExitCode::from(1);
    }
    let s = &outcome.summary;
    for line in &s.failures {
        eprintln!("FAIL {line}");
    }
    for line in &s.undecided {
        eprintln!("INDETERMINATE {line}; tighten the rational constants to decide");
    }
    eprintln!("{}: {} pass, {} fail, {} indeterminate", outcome.command, s.pass, s.fail, s.indeterminate);
    match s.overall() {
        Verdict::Pass => ExitCode::SUCCESS,
        Verdict::Fail => ExitCode::from(1),
        Verdict::Indeterminate => ExitCode::from(3),
    }
}
