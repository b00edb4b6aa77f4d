use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use curvecensus::census::BoundConstants;
use curvecensus::ffield::MAX_FIELD_ORDER;
use curvecensus::numtheory::is_prime;
use curvecensus::{make_field, ExactRational, FieldSpec};

pub const CACHE_ENV: &str = "CURVECENSUS_CACHE_DIR";
pub const DEFAULT_CACHE_DIR: &str = "curvecensus-cache";

#[derive(Parser, Debug)]
#[command(name = "curvecensus", version, about = "Exhaustive censuses of elliptic curves over small finite fields")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Tabulate v, w and y for each field and write the cache.
    Census(CommonArgs),
    /// Check the bounds and identities against the tables.
    Verify(VerifyArgs),
    /// Tabulate r(N) against v-hat(N)/q, 1/N and 1/phi(N).
    Rtable(CommonArgs),
    /// Genus, cusp and supersingular counts of X(m, n) with their bounds.
    Bounds(BoundsArgs),
    /// Total 1/#Aut over the twists of each j-invariant.
    Twists(CommonArgs),
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// Field F_{p^e}; may be repeated. Defaults to the standard grid.
    #[arg(long = "field", value_name = "P,E", value_parser = parse_field)]
    pub fields: Vec<(u64, u32)>,
    /// Largest N for v(N) and r(N).
    #[arg(long = "max-N", value_name = "N", default_value_t = 30, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_big_n: u64,
    /// Largest n for w(m, n) and y(m, n).
    #[arg(long = "max-n", value_name = "N", default_value_t = 12)]
    pub max_n: u64,
    /// Worker threads; 0 uses one per core.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Directory for cached census tables.
    #[arg(long = "cache-dir", env = CACHE_ENV, value_name = "DIR")]
    pub cache_dir: Option<PathBuf>,
    /// Write the report here instead of standard output.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Lower rational bound for the constant in the v(N) estimate.
    #[arg(long = "c-low", value_name = "A/B", default_value = "126184/100000")]
    pub c_low: ExactRational,
    #[arg(long = "c-up", value_name = "A/B", default_value = "126185/100000")]
    pub c_up: ExactRational,
    /// Lower rational bound for the constant in the y(m, n) estimate.
    #[arg(long = "cy-low", value_name = "A/B", default_value = "126184/100000")]
    pub cy_low: ExactRational,
    #[arg(long = "cy-up", value_name = "A/B", default_value = "126185/100000")]
    pub cy_up: ExactRational,
}

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Run only this check; may be repeated.
    #[arg(long, value_enum)]
    pub only: Vec<Check>,
    /// Prime p for the supersingular mass over F_{p^2}; may be repeated.
    #[arg(long = "mass-prime", value_name = "P", default_values_t = [5u64, 7, 11, 13])]
    pub mass_primes: Vec<u64>,
}

#[derive(Args, Debug, Clone)]
pub struct BoundsArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Level (m, n) to tabulate; may be repeated. Defaults to every valid
    /// level with n up to --max-n.
    #[arg(long = "level", value_name = "M,N", value_parser = parse_level)]
    pub levels: Vec<(u64, u64)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    Theorem,
    Ybound,
    Twists,
    Lemma41,
    Lemma42,
    Lemma43,
    Mass,
}

impl Check {
    pub const ALL: [Check; 7] = [
        Check::Theorem,
        Check::Ybound,
        Check::Twists,
        Check::Lemma41,
        Check::Lemma42,
        Check::Lemma43,
        Check::Mass,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Theorem => "theorem",
            Check::Ybound => "ybound",
            Check::Twists => "twists",
            Check::Lemma41 => "lemma41",
            Check::Lemma42 => "lemma42",
            Check::Lemma43 => "lemma43",
            Check::Mass => "mass",
        }
    }
}

fn parse_pair(s: &str) -> Result<(u64, u64), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected two comma-separated integers, got {s:?}"))?;
    let parse = |t: &str| t.trim().parse::<u64>().map_err(|e| format!("{t:?}: {e}"));
    Ok((parse(a)?, parse(b)?))
}

fn parse_field(s: &str) -> Result<(u64, u32), String> {
    let (p, e) = parse_pair(s)?;
    if !is_prime(p) {
        return Err(format!("characteristic {p} is not prime"));
    }
    if e == 0 {
        return Err("extension degree must be positive".into());
    }
    let too_big = || format!("field of order {p}^{e} exceeds {MAX_FIELD_ORDER}");
    let e = u32::try_from(e).map_err(|_| too_big())?;
    match p.checked_pow(e) {
        Some(q) if q <= MAX_FIELD_ORDER => Ok((p, e)),
        _ => Err(too_big()),
    }
}

fn parse_level(s: &str) -> Result<(u64, u64), String> {
    let (m, n) = parse_pair(s)?;
    if m == 0 || n == 0 || n % m != 0 {
        return Err(format!("m = {m} must be a positive divisor of n = {n}"));
    }
    Ok((m, n))
}

/// Fields used when none are given: characteristic at least 5 up to
/// `q = 101`, together with a few small fields of characteristic 2 and 3.
pub fn default_fields() -> Vec<(u64, u32)> {
    let mut fields: Vec<(u64, u32, u64)> = [(2u64, 1u32), (3, 1), (2, 2), (2, 3), (3, 2), (2, 4), (3, 3)]
        .into_iter()
        .map(|(p, e)| (p, e, p.pow(e)))
        .collect();
    for p in (5..=101).filter(|&p| is_prime(p)) {
        let mut q = p;
        let mut e = 1;
        while q <= 101 {
            fields.push((p, e, q));
            q *= p;
            e += 1;
        }
    }
    fields.sort_by_key(|&(_, _, q)| q);
    fields.into_iter().map(|(p, e, _)| (p, e)).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct FieldParams {
    pub p: u64,
    pub e: u32,
    pub q: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Constants {
    pub c_low: ExactRational,
    pub c_up: ExactRational,
    pub cy_low: ExactRational,
    pub cy_up: ExactRational,
}

/// The mathematical parameters of a run, echoed into the report.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub fields: Vec<FieldParams>,
    #[serde(rename = "max_N")]
    pub max_big_n: u64,
    pub max_n: u64,
    pub constants: Constants,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub mass_primes: Vec<u64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub levels: Vec<(u64, u64)>,
}

/// Settings that affect how a run executes but not what it reports.
#[derive(Clone, Debug)]
pub struct Runtime {
    pub jobs: usize,
    pub format: Format,
    pub cache_dir: PathBuf,
    pub out: Option<PathBuf>,
}

pub struct Prepared {
    pub config: RunConfig,
    pub runtime: Runtime,
    pub specs: Vec<FieldSpec>,
    pub theorem_constants: BoundConstants,
    pub y_constants: BoundConstants,
}

impl CommonArgs {
    /// Validates everything and builds the fields. Errors are usage errors.
    pub fn prepare(&self) -> Result<Prepared, String> {
        let pairs = if self.fields.is_empty() { default_fields() } else { self.fields.clone() };
        let theorem_constants = BoundConstants::new(self.c_low.clone(), self.c_up.clone())
            .map_err(|e| format!("--c-low/--c-up: {e}"))?;
        let y_constants = BoundConstants::new(self.cy_low.clone(), self.cy_up.clone())
            .map_err(|e| format!("--cy-low/--cy-up: {e}"))?;
        let specs = pairs
            .iter()
            .map(|&(p, e)| make_field(p, e).map_err(|err| format!("field {p},{e}: {err}")))
            .collect::<Result<Vec<_>, _>>()?;
        let fields = specs
            .iter()
            .map(|f| FieldParams {
                p: f.characteristic(),
                e: f.degree(),
                q: f.order(),
            })
            .collect();
        Ok(Prepared {
            config: RunConfig {
                fields,
                max_big_n: self.max_big_n,
                max_n: self.max_n,
                constants: Constants {
                    c_low: self.c_low.clone(),
                    c_up: self.c_up.clone(),
                    cy_low: self.cy_low.clone(),
                    cy_up: self.cy_up.clone(),
                },
                checks: Vec::new(),
                mass_primes: Vec::new(),
                levels: Vec::new(),
            },
            runtime: Runtime {
                jobs: self.jobs,
                format: self.format,
                cache_dir: self.cache_dir.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR)),
                out: self.out.clone(),
            },
            specs,
            theorem_constants,
            y_constants,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_arguments() {
        assert_eq!(parse_field("5,1"), Ok((5, 1)));
        assert_eq!(parse_field(" 2, 4"), Ok((2, 4)));
        assert!(parse_field("4,1").is_err());
        assert!(parse_field("5,0").is_err());
        assert!(parse_field("5").is_err());
        assert!(parse_field("2,21").is_err());
        assert!(parse_field("2,99999999999").is_err());
    }

    #[test]
    fn level_arguments() {
        assert_eq!(parse_level("7,7"), Ok((7, 7)));
        assert!(parse_level("2,3").is_err());
        assert!(parse_level("0,3").is_err());
    }

    #[test]
    fn default_grid() {
        let qs: Vec<u64> = default_fields().iter().map(|&(p, e)| p.pow(e)).collect();
        assert_eq!(&qs[..8], &[2, 3, 4, 5, 7, 8, 9, 11]);
        assert!(qs.contains(&25) && qs.contains(&49) && qs.contains(&101));
        assert!(!qs.contains(&32) && !qs.contains(&81) && !qs.contains(&121));
        assert!(qs.windows(2).all(|w| w[0] < w[1]));
    }
}
