//! Weighted censuses of model spaces and the identities relating them.
//!
//! For a field `F_q` the census records, for every nonsingular model in a
//! [`ModelSpace`], the structure `Z/A x Z/B` of its rational points and the
//! number of pairs `(P, Q)` with `ord P = m`, `ord Q = n` and
//! `e_m(P, (n/m) Q) = zeta_m^k`. Dividing by the size of the transformation
//! group turns these counts into sums of `1/#Aut` over isomorphism classes:
//!
//! * `v(N)`: classes with `N | #E(F_q)`;
//! * `w(m, n)`: classes with `E[n](F_q) = Z/m x Z/n`;
//! * `y(m, n)`: the pair count for `zeta = zeta_m`.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ecurve::{orbit_classes, CurveError, CurveModel, CurvePoint};
use crate::exec::Execution;
use crate::ffield::FieldElement;
use crate::models::{ModelForm, ModelSpace};
use crate::numtheory::{self, divisors, gcd, mobius, phi, psi, rho, t_func, u_func, NumError};
use crate::rational::ExactRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CensusError {
    #[error("argument must be positive")]
    ZeroArgument,
    #[error("{m} does not divide {n}")]
    NotDivisible { m: u64, n: u64 },
    #[error("{m} does not divide gcd({n}, q - 1)")]
    InvalidLevel { m: u64, n: u64 },
    #[error("n = {n} exceeds the tabulated maximum {max_n}")]
    NotComputed { n: u64, max_n: u64 },
    #[error("{0} is not an element of exact order m")]
    BadRoot(String),
    #[error("weighted pair count {0} is not an integer")]
    NonIntegral(ExactRational),
    #[error("bound constants do not bracket 1/12 + 5 sqrt(2)/6")]
    BadConstants,
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Num(#[from] NumError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StructureCount {
    pub a: u64,
    pub b: u64,
    pub count: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TripleCount {
    pub m: u64,
    pub n: u64,
    /// The pairing value is `zeta_m^k`, with `zeta_m` the field's canonical
    /// primitive `m`-th root of unity.
    pub k: u64,
    pub count: u64,
}

#[derive(Clone, Copy, Debug)]
pub struct CensusOptions {
    /// Largest `n` for which pair counts are tabulated; 0 skips them.
    pub max_n: u64,
    pub execution: Execution,
    /// Models per work unit.
    pub chunk: u64,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions {
            max_n: 12,
            execution: Execution::default(),
            chunk: 256,
        }
    }
}

/// Raw counts of one census.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusTable {
    pub p: u64,
    pub e: u32,
    pub q: u64,
    pub modulus: Vec<u32>,
    pub form: ModelForm,
    pub gamma: u64,
    pub models: u64,
    pub max_n: u64,
    pub structures: Vec<StructureCount>,
    pub triples: Vec<TripleCount>,
}

#[derive(Default)]
struct Counters {
    models: u64,
    structures: BTreeMap<(u64, u64), u64>,
    triples: BTreeMap<(u64, u64, u64), u64>,
}

impl Counters {
    fn merge(mut self, other: Counters) -> Counters {
        self.models += other.models;
        for (k, v) in other.structures {
            *self.structures.entry(k).or_default() += v;
        }
        for (k, v) in other.triples {
            *self.triples.entry(k).or_default() += v;
        }
        self
    }
}

/// `zeta_m^k -> k` for `k` coprime to `m`.
fn primitive_lut(space: &ModelSpace, m: u64) -> HashMap<FieldElement, u64> {
    let f = space.field();
    let z = f.root_of_unity(m).expect("m divides q - 1");
    (1..=m)
        .filter(|&k| gcd(k, m) == 1)
        .map(|k| (f.pow(z, k), k))
        .collect()
}

fn model_seed(index: u64) -> u64 {
    index.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ 0x5EED
}

fn census_model(
    e: &CurveModel,
    seed: u64,
    max_n: u64,
    luts: &BTreeMap<u64, HashMap<FieldElement, u64>>,
    c: &mut Counters,
) -> Result<(), CensusError> {
    let order = e.order();
    let gs = e.group_structure_with_order(order)?;
    c.models += 1;
    *c.structures.entry((gs.m, gs.n)).or_default() += 1;
    if max_n == 0 {
        return Ok(());
    }
    *c.triples.entry((1, 1, 1)).or_default() += 1;
    let ns: Vec<u64> = (2..=max_n).filter(|n| gs.n % n == 0).collect();
    if ns.is_empty() {
        return Ok(());
    }
    let pts = e.points();
    let orders: Vec<u64> = pts.iter().map(|&x| e.point_order(x, gs.n)).collect();
    for &n in &ns {
        let cnt = orders.iter().filter(|&&o| o == n).count() as u64;
        if cnt > 0 {
            *c.triples.entry((1, n, 1)).or_default() += cnt;
        }
    }
    for m in divisors(gs.m)?.into_iter().filter(|&m| m > 1 && m <= max_n) {
        let ns_m: Vec<u64> = ns.iter().copied().filter(|n| n % m == 0).collect();
        if ns_m.is_empty() {
            continue;
        }
        let basis = e.pairing_on_basis(m, seed ^ m)?;
        let lut = &luts[&m];
        let full: Vec<(u64, u64)> = basis.points_of_full_order().map(|(_, c)| c).collect();
        let f = e.field();
        for n in ns_m {
            let mut by_coords: HashMap<(u64, u64), u64> = HashMap::new();
            for (&x, _) in pts.iter().zip(&orders).filter(|(_, &o)| o == n) {
                let reduced = e.scalar_mul((n / m) as i64, x);
                let cd = basis.coordinates(reduced).expect("(n/m)Q lies in E[m]");
                *by_coords.entry(cd).or_default() += 1;
            }
            for ((cc, d), cnt) in by_coords {
                for &(a, b) in &full {
                    let k = (a * d % m + m - b * cc % m) % m;
                    if let Some(&kk) = lut.get(&f.pow(basis.zeta, k)) {
                        *c.triples.entry((m, n, kk)).or_default() += cnt;
                    }
                }
            }
        }
    }
    Ok(())
}

impl CensusTable {
    /// Enumerates every model of `space`.
    pub fn compute(space: &ModelSpace, opts: &CensusOptions) -> Result<CensusTable, CensusError> {
        let f = space.field();
        let q = f.order();
        let luts: BTreeMap<u64, HashMap<FieldElement, u64>> = divisors(q - 1)?
            .into_iter()
            .filter(|&m| m > 1 && m <= opts.max_n)
            .map(|m| (m, primitive_lut(space, m)))
            .collect();
        let counters = opts.execution.fold_chunks(
            space.raw_size(),
            opts.chunk,
            || Ok(Counters::default()),
            |range| -> Result<Counters, CensusError> {
                let mut c = Counters::default();
                for i in range {
                    if let Some(e) = space.model_at(i) {
                        census_model(&e, model_seed(i), opts.max_n, &luts, &mut c)?;
                    }
                }
                Ok(c)
            },
            |a, b| Ok(a?.merge(b?)),
        );
        let counters = counters?;
        Ok(CensusTable {
            p: f.characteristic(),
            e: f.degree(),
            q,
            modulus: f.modulus().to_vec(),
            form: space.form(),
            gamma: space.gamma(),
            models: counters.models,
            max_n: opts.max_n,
            structures: counters
                .structures
                .into_iter()
                .map(|((a, b), count)| StructureCount { a, b, count })
                .collect(),
            triples: counters
                .triples
                .into_iter()
                .map(|((m, n, k), count)| TripleCount { m, n, k, count })
                .collect(),
        })
    }

    fn weighted(&self, count: u64) -> ExactRational {
        ExactRational::new(count as i64, self.gamma as i64)
    }

    /// `v(N)`.
    pub fn v(&self, n: u64) -> Result<ExactRational, CensusError> {
        if n == 0 {
            return Err(CensusError::ZeroArgument);
        }
        let count = self
            .structures
            .iter()
            .filter(|s| (s.a * s.b) % n == 0)
            .map(|s| s.count)
            .sum();
        Ok(self.weighted(count))
    }

    /// `w(m, n)`; zero when `m` does not divide `q - 1`.
    pub fn w(&self, m: u64, n: u64) -> Result<ExactRational, CensusError> {
        if m == 0 || n == 0 {
            return Err(CensusError::ZeroArgument);
        }
        if !n.is_multiple_of(m) {
            return Err(CensusError::NotDivisible { m, n });
        }
        let count = self
            .structures
            .iter()
            .filter(|s| gcd(s.a, n) == m && s.b % n == 0)
            .map(|s| s.count)
            .sum();
        Ok(self.weighted(count))
    }

    fn check_level(&self, m: u64, n: u64) -> Result<(), CensusError> {
        if m == 0 || n == 0 {
            return Err(CensusError::ZeroArgument);
        }
        if !gcd(n, self.q - 1).is_multiple_of(m) {
            return Err(CensusError::InvalidLevel { m, n });
        }
        if n > self.max_n {
            return Err(CensusError::NotComputed { n, max_n: self.max_n });
        }
        Ok(())
    }

    /// `y(m, n)` for `zeta = zeta_m^k`; the weighted count must be an integer.
    pub fn y_for_root(&self, m: u64, n: u64, k: u64) -> Result<ExactRational, CensusError> {
        self.check_level(m, n)?;
        let count = self
            .triples
            .iter()
            .find(|t| (t.m, t.n, t.k) == (m, n, k))
            .map_or(0, |t| t.count);
        let y = self.weighted(count);
        if !y.is_integer() {
            return Err(CensusError::NonIntegral(y));
        }
        Ok(y)
    }

    /// `y(m, n)` for the canonical root `zeta_m`.
    pub fn y(&self, m: u64, n: u64) -> Result<ExactRational, CensusError> {
        self.y_for_root(m, n, 1)
    }

    /// `(k, y)` for every primitive root `zeta_m^k`.
    pub fn y_all_roots(&self, m: u64, n: u64) -> Result<Vec<(u64, ExactRational)>, CensusError> {
        (1..=m.max(1))
            .filter(|&k| gcd(k, m) == 1)
            .map(|k| Ok((k, self.y_for_root(m, n, k)?)))
            .collect()
    }

    /// All `(m, n)` with `n <= max_n` and `m | gcd(n, q - 1)`.
    pub fn levels(&self, max_n: u64) -> Vec<(u64, u64)> {
        levels(self.q, max_n)
    }

    /// Largest `N` for which `v(N)` can be nonzero: `(sqrt(q) + 1)^2`.
    pub fn hasse_max(&self) -> u64 {
        let q = self.q;
        (0..).take_while(|&k: &u64| k * k <= 4 * q).last().unwrap_or(0) + q + 1
    }
}

/// All `(m, n)` with `n <= max_n` and `m | gcd(n, q - 1)`.
pub fn levels(q: u64, max_n: u64) -> Vec<(u64, u64)> {
    (1..=max_n)
        .flat_map(|n| {
            divisors(gcd(n, q - 1))
                .expect("positive")
                .into_iter()
                .map(move |m| (m, n))
        })
        .collect()
}

/// `v(N)` by a fresh enumeration of `space`.
pub fn weighted_v(space: &ModelSpace, n: u64, exec: Execution) -> Result<ExactRational, CensusError> {
    let opts = CensusOptions {
        max_n: 0,
        execution: exec,
        ..Default::default()
    };
    CensusTable::compute(space, &opts)?.v(n)
}

/// `w(m, n)` by a fresh enumeration of `space`.
pub fn weighted_w(space: &ModelSpace, m: u64, n: u64, exec: Execution) -> Result<ExactRational, CensusError> {
    let opts = CensusOptions {
        max_n: 0,
        execution: exec,
        ..Default::default()
    };
    CensusTable::compute(space, &opts)?.w(m, n)
}

/// `y(m, n)` for a given primitive `m`-th root of unity, counting pairs
/// model by model with a direct Miller evaluation of every pairing.
pub fn weighted_y_direct(
    space: &ModelSpace,
    m: u64,
    n: u64,
    zeta: FieldElement,
    exec: Execution,
) -> Result<ExactRational, CensusError> {
    let f = space.field();
    let q = f.order();
    if m == 0 || n == 0 {
        return Err(CensusError::ZeroArgument);
    }
    if !gcd(n, q - 1).is_multiple_of(m) {
        return Err(CensusError::InvalidLevel { m, n });
    }
    if f.multiplicative_order(zeta).ok() != Some(m) {
        return Err(CensusError::BadRoot(f.format(zeta)));
    }
    let count = exec.fold_chunks(
        space.raw_size(),
        64,
        || Ok(0),
        |range| -> Result<u64, CensusError> {
            let mut total = 0u64;
            for i in range {
                let Some(e) = space.model_at(i) else { continue };
                let order = e.order();
                if order % n != 0 {
                    continue;
                }
                let pts = e.points();
                let ords: Vec<u64> = pts.iter().map(|&x| e.point_order(x, order)).collect();
                let ps: Vec<CurvePoint> = pts.iter().zip(&ords).filter(|(_, &o)| o == m).map(|(&x, _)| x).collect();
                let mut cache: HashMap<(CurvePoint, CurvePoint), FieldElement> = HashMap::new();
                for (&qq, _) in pts.iter().zip(&ords).filter(|(_, &o)| o == n) {
                    let reduced = e.scalar_mul((n / m) as i64, qq);
                    for &p in &ps {
                        let value = match cache.get(&(p, reduced)) {
                            Some(&v) => v,
                            None => {
                                let v = e.weil_pairing(p, reduced, m, model_seed(i))?;
                                cache.insert((p, reduced), v);
                                v
                            }
                        };
                        total += (value == zeta) as u64;
                    }
                }
            }
            Ok(total)
        },
        |a, b| Ok(a? + b?),
    )?;
    let y = ExactRational::new(count as i64, space.gamma() as i64);
    if !y.is_integer() {
        return Err(CensusError::NonIntegral(y));
    }
    Ok(y)
}

/// `sum_{d | gcd(u(N), q-1)} w(d, N / gcd(d, t(N)))`.
pub fn v_from_w(table: &CensusTable, n: u64) -> Result<ExactRational, CensusError> {
    if n == 0 {
        return Err(CensusError::ZeroArgument);
    }
    let t = t_func(n)?;
    divisors(gcd(u_func(n)?, table.q - 1))?
        .into_iter()
        .map(|d| table.w(d, n / gcd(d, t)))
        .sum()
}

/// `m phi(n) psi(n) sum_{m | d | gcd(n, q-1)} w(d, n) / psi(n/d)`.
pub fn y_from_w(table: &CensusTable, m: u64, n: u64) -> Result<ExactRational, CensusError> {
    if m == 0 || n == 0 {
        return Err(CensusError::ZeroArgument);
    }
    let g = gcd(n, table.q - 1);
    if !g.is_multiple_of(m) {
        return Err(CensusError::InvalidLevel { m, n });
    }
    let mut sum = ExactRational::zero();
    for d in divisors(g)?.into_iter().filter(|d| d % m == 0) {
        sum = sum + table.w(d, n)? / ExactRational::from(psi(n / d)?);
    }
    Ok(sum * ExactRational::from(m * phi(n)? * psi(n)?))
}

/// `psi(n/m) / (m phi(n) psi(n)) sum_{j | gcd(n, q-1)/m} mu(j)/j y(mj, n)`.
pub fn w_from_y(table: &CensusTable, m: u64, n: u64) -> Result<ExactRational, CensusError> {
    if m == 0 || n == 0 {
        return Err(CensusError::ZeroArgument);
    }
    let g = gcd(n, table.q - 1);
    if !g.is_multiple_of(m) {
        return Err(CensusError::InvalidLevel { m, n });
    }
    let mut sum = ExactRational::zero();
    for j in divisors(g / m)? {
        let mu = mobius(j)? as i64;
        if mu != 0 {
            sum = sum + ExactRational::new(mu, j as i64) * table.y(m * j, n)?;
        }
    }
    Ok(sum * ExactRational::new(psi(n / m)? as i64, (m * phi(n)? * psi(n)?) as i64))
}

/// The estimate `q psi(n/m) / (m phi(n) psi(n)) prod_{l | gcd(n, q-1)/m} (1 - 1/l)`
/// of `w(m, n)`; zero when `m` does not divide `q - 1`.
pub fn hat_w(q: u64, m: u64, n: u64) -> Result<ExactRational, CensusError> {
    if m == 0 || n == 0 {
        return Err(CensusError::ZeroArgument);
    }
    if !n.is_multiple_of(m) {
        return Err(CensusError::NotDivisible { m, n });
    }
    if !(q - 1).is_multiple_of(m) {
        return Ok(ExactRational::zero());
    }
    let g = gcd(n, q - 1) / m;
    let prod = numtheory::factorize(g)?
        .primes()
        .map(|l| ExactRational::new(l as i64 - 1, l as i64))
        .fold(ExactRational::one(), |a, b| a * b);
    let lead = ExactRational::new((q * psi(n / m)?) as i64, (m * phi(n)? * psi(n)?) as i64);
    Ok(lead * prod)
}

/// `sum_{d | gcd(u(N), q-1)} hat_w(d, N / gcd(d, t(N)))`.
pub fn hat_v(q: u64, n: u64) -> Result<ExactRational, CensusError> {
    if n == 0 {
        return Err(CensusError::ZeroArgument);
    }
    let t = t_func(n)?;
    divisors(gcd(u_func(n)?, q - 1))?
        .into_iter()
        .map(|d| hat_w(q, d, n / gcd(d, t)))
        .sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Indeterminate,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

/// Rational lower and upper bounds for the constant `1/12 + 5 sqrt(2)/6`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundConstants {
    pub low: ExactRational,
    pub up: ExactRational,
}

impl Default for BoundConstants {
    fn default() -> Self {
        BoundConstants {
            low: ExactRational::new(126184, 100000),
            up: ExactRational::new(126185, 100000),
        }
    }
}

impl BoundConstants {
    pub fn new(low: ExactRational, up: ExactRational) -> Result<Self, CensusError> {
        let c = BoundConstants { low, up };
        c.validate()?;
        Ok(c)
    }

    /// Checks `low <= 1/12 + 5 sqrt(2)/6 <= up` exactly.
    pub fn validate(&self) -> Result<(), CensusError> {
        let twelfth = ExactRational::new(1, 12);
        let target = ExactRational::new(50, 36);
        let below = |c: &ExactRational| {
            let d = c - &twelfth;
            d.is_negative() || d.square() < target
        };
        if below(&self.low) && !below(&self.up) && self.low <= self.up {
            Ok(())
        } else {
            Err(CensusError::BadConstants)
        }
    }
}

/// Outcome of comparing `|lhs| * sqrt(q)` with `C * scale`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub lhs: ExactRational,
    pub scale: ExactRational,
    pub verdict: Verdict,
    /// `C_low^2 scale^2 - lhs^2 q`; nonnegative exactly when the check passes.
    pub slack: ExactRational,
    /// `lhs sqrt(q) / scale` rounded to a float, for reporting only.
    pub normalized: f64,
}

fn bound_check(lhs: ExactRational, scale: ExactRational, q: u64, c: &BoundConstants) -> BoundCheck {
    let lhs2q = lhs.square() * ExactRational::from(q);
    let s2 = scale.square();
    let low = c.low.square() * s2.clone();
    let up = c.up.square() * s2;
    let verdict = if lhs2q <= low {
        Verdict::Pass
    } else if lhs2q > up {
        Verdict::Fail
    } else {
        Verdict::Indeterminate
    };
    let normalized = if scale.is_zero() {
        0.0
    } else {
        lhs.to_f64() * (q as f64).sqrt() / scale.to_f64()
    };
    BoundCheck {
        slack: low - lhs2q,
        lhs,
        scale,
        verdict,
        normalized,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoremVerdict {
    pub q: u64,
    pub n: u64,
    pub v: ExactRational,
    pub r: ExactRational,
    #[serde(flatten)]
    pub check: BoundCheck,
}

/// `|v(N)/q - r(N)| <= C N rho(N) 2^nu(N) / sqrt(q)`, compared after squaring.
pub fn verify_theorem(table: &CensusTable, n: u64, c: &BoundConstants) -> Result<TheoremVerdict, CensusError> {
    c.validate()?;
    let q = table.q;
    let v = table.v(n)?;
    let r = numtheory::r_closed_form(n, q)?;
    let lhs = (&v / &ExactRational::from(q) - r.clone()).abs();
    let scale = ExactRational::from(n * 2u64.pow(numtheory::nu(n)?)) * rho(n)?;
    Ok(TheoremVerdict {
        q,
        n,
        v,
        r,
        check: bound_check(lhs, scale, q, c),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct YBoundVerdict {
    pub q: u64,
    pub m: u64,
    pub n: u64,
    pub y: ExactRational,
    #[serde(flatten)]
    pub check: BoundCheck,
}

/// `|y(m, n) - q| <= C' m phi(n) psi(n) sqrt(q)`, compared after squaring.
pub fn verify_y_bound(table: &CensusTable, m: u64, n: u64, c: &BoundConstants) -> Result<YBoundVerdict, CensusError> {
    c.validate()?;
    let q = table.q;
    let y = table.y(m, n)?;
    let lhs = (&y - &ExactRational::from(q)).abs();
    let scale = ExactRational::from(m * phi(n)? * psi(n)?);
    // |y - q| <= C' s sqrt(q)  <=>  (|y - q| / q) sqrt(q) <= C' s.
    let check = bound_check(lhs.clone() / ExactRational::from(q), scale, q, c);
    Ok(YBoundVerdict {
        q,
        m,
        n,
        y,
        check: BoundCheck { lhs, ..check },
    })
}

/// Largest `|v/q - r| sqrt(q) / (N rho(N) 2^nu(N))` among the verdicts.
pub fn max_normalized_slack(verdicts: &[TheoremVerdict]) -> f64 {
    verdicts.iter().map(|v| v.check.normalized).fold(0.0, f64::max)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionVerdict {
    pub n: u64,
    pub models_in_v: u64,
    pub violations: u64,
    pub verdict: Verdict,
}

/// Checks that each model with `N | #E` lies in exactly one of the sets
/// `W(d, N / gcd(d, t(N)))`, `d | gcd(u(N), q - 1)`, namely the one with
/// `d = gcd(u(N), A)`, and that no other model lies in any of them.
pub fn lemma41_partition_check(table: &CensusTable, n: u64) -> Result<PartitionVerdict, CensusError> {
    if n == 0 {
        return Err(CensusError::ZeroArgument);
    }
    let t = t_func(n)?;
    let u = u_func(n)?;
    let ds = divisors(gcd(u, table.q - 1))?;
    let mut in_v = 0;
    let mut violations = 0;
    for s in &table.structures {
        let hits: Vec<u64> = ds
            .iter()
            .copied()
            .filter(|&d| {
                let nd = n / gcd(d, t);
                gcd(s.a, nd) == d && s.b % nd == 0
            })
            .collect();
        let ok = if (s.a * s.b) % n == 0 {
            in_v += s.count;
            hits == [gcd(u, s.a)]
        } else {
            hits.is_empty()
        };
        if !ok {
            violations += s.count;
        }
    }
    Ok(PartitionVerdict {
        n,
        models_in_v: in_v,
        violations,
        verdict: Verdict::from_bool(violations == 0),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistClassInfo {
    /// Coefficient vectors of `[a1, a2, a3, a4, a6]`, each low degree first.
    pub representative: Vec<Vec<u32>>,
    pub aut_order: u64,
    pub orbit_size: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistMass {
    pub j: Vec<u32>,
    pub classes: Vec<TwistClassInfo>,
    pub mass: ExactRational,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistMassReport {
    pub q: u64,
    pub per_j: Vec<TwistMass>,
    /// Sum of all class masses; equals `q`.
    pub total: ExactRational,
    pub verdict: Verdict,
}

/// Partitions the whole model space into classes and checks that the
/// classes with a given `j` have total mass `sum 1/#Aut = 1`.
pub fn twist_mass_check(space: &ModelSpace) -> TwistMassReport {
    let f = space.field();
    let classes = orbit_classes(space.models(), space.family());
    let mut by_j: BTreeMap<FieldElement, Vec<TwistClassInfo>> = BTreeMap::new();
    let mut total = ExactRational::zero();
    for c in &classes {
        total = total + c.mass();
        by_j.entry(c.representative.j_invariant())
            .or_default()
            .push(TwistClassInfo {
                representative: c.representative.coeffs().iter().map(|&x| f.coeffs(x)).collect(),
                aut_order: c.aut_order,
                orbit_size: c.orbit_size,
            });
    }
    let per_j: Vec<TwistMass> = by_j
        .into_iter()
        .map(|(j, classes)| {
            let mass: ExactRational = classes
                .iter()
                .map(|c| ExactRational::new(1, c.aut_order as i64))
                .sum();
            let verdict = Verdict::from_bool(mass == ExactRational::one());
            TwistMass {
                j: f.coeffs(j),
                classes,
                mass,
                verdict,
            }
        })
        .collect();
    let ok = per_j.iter().all(|t| t.verdict == Verdict::Pass)
        && per_j.len() as u64 == f.order()
        && total == ExactRational::from(f.order());
    TwistMassReport {
        q: f.order(),
        per_j,
        total,
        verdict: Verdict::from_bool(ok),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::make_field;

    fn r(a: i64, b: i64) -> ExactRational {
        ExactRational::new(a, b)
    }

    fn table(p: u64, e: u32, max_n: u64) -> CensusTable {
        let f = make_field(p, e).unwrap();
        let space = ModelSpace::canonical(&f);
        CensusTable::compute(
            &space,
            &CensusOptions {
                max_n,
                ..Default::default()
            },
        )
        .unwrap()
    }

    #[test]
    fn estimator_examples() {
        assert_eq!(hat_v(5, 1).unwrap(), r(5, 1));
        assert_eq!(hat_v(9, 4).unwrap() / r(9, 1), r(5, 12));
        assert_eq!(
            hat_v(7, 6).unwrap() / r(7, 1),
            (hat_v(7, 2).unwrap() / r(7, 1)) * (hat_v(7, 3).unwrap() / r(7, 1))
        );
        assert_eq!(hat_w(7, 4, 4).unwrap(), ExactRational::zero());
        assert_eq!(hat_w(7, 2, 3), Err(CensusError::NotDivisible { m: 2, n: 3 }));
    }

    #[test]
    fn constants() {
        assert!(BoundConstants::default().validate().is_ok());
        assert!(BoundConstants::new(r(126186, 100000), r(2, 1)).is_err());
        assert!(BoundConstants::new(r(1, 1), r(126184, 100000)).is_err());
        assert!(BoundConstants::new(r(-1, 1), r(3, 2)).is_ok());
    }

    /// Weighted counts from the orbit-stabilizer division agree with the sum
    /// of 1/#Aut over explicitly partitioned classes.
    #[test]
    fn v_matches_class_partition() {
        for (p, e) in [(5, 1), (7, 1), (3, 1), (2, 1), (2, 2), (3, 2)] {
            let f = make_field(p, e).unwrap();
            let space = ModelSpace::canonical(&f);
            let t = CensusTable::compute(&space, &CensusOptions { max_n: 0, ..Default::default() }).unwrap();
            let classes = orbit_classes(space.models(), space.family());
            for n in 1..=12 {
                let oracle: ExactRational = classes
                    .iter()
                    .filter(|c| c.representative.order() % n == 0)
                    .map(|c| c.mass())
                    .sum();
                assert_eq!(t.v(n).unwrap(), oracle, "q={} N={n}", f.order());
            }
            assert_eq!(t.v(1).unwrap(), ExactRational::from(f.order()));
        }
    }

    #[test]
    fn small_table_examples() {
        let t = table(5, 1, 10);
        assert_eq!(t.w(1, 1).unwrap(), r(5, 1));
        assert_eq!(t.y(1, 1).unwrap(), r(5, 1));
        assert_eq!(t.w(3, 6).unwrap(), ExactRational::zero());
        assert_eq!(t.w(2, 3), Err(CensusError::NotDivisible { m: 2, n: 3 }));
        assert_eq!(t.v(0), Err(CensusError::ZeroArgument));
        assert_eq!(v_from_w(&t, 4).unwrap(), t.w(1, 4).unwrap() + t.w(2, 2).unwrap());
        assert_eq!(v_from_w(&t, 4).unwrap(), t.v(4).unwrap());
        assert_eq!(t.v(t.hasse_max() + 1).unwrap(), ExactRational::zero());
        assert!(t.y(3, 3).is_err());
        assert!(matches!(t.y(1, 11), Err(CensusError::NotComputed { .. })));

        let t7 = table(7, 1, 4);
        assert_eq!(w_from_y(&t7, 2, 2).unwrap(), t7.y(2, 2).unwrap() / r(6, 1));
        assert_eq!(w_from_y(&t7, 2, 2).unwrap(), t7.w(2, 2).unwrap());
    }

    #[test]
    fn identities_small_fields() {
        for (p, e) in [(5, 1), (7, 1), (3, 2), (2, 2), (3, 1)] {
            let t = table(p, e, 8);
            for n in 1..=20 {
                assert_eq!(v_from_w(&t, n).unwrap(), t.v(n).unwrap(), "q={} N={n}", t.q);
                assert_eq!(lemma41_partition_check(&t, n).unwrap().verdict, Verdict::Pass);
            }
            for (m, n) in t.levels(8) {
                let y = t.y(m, n).unwrap();
                assert_eq!(y_from_w(&t, m, n).unwrap(), y, "q={} m={m} n={n}", t.q);
                assert_eq!(w_from_y(&t, m, n).unwrap(), t.w(m, n).unwrap());
                for (_, other) in t.y_all_roots(m, n).unwrap() {
                    assert_eq!(other, y);
                }
            }
        }
    }

    #[test]
    fn direct_pairing_count_matches_table() {
        let f = make_field(7, 1).unwrap();
        let space = ModelSpace::canonical(&f);
        let t = CensusTable::compute(&space, &CensusOptions { max_n: 6, ..Default::default() }).unwrap();
        for (m, n) in t.levels(6) {
            let z = f.root_of_unity(m).unwrap();
            let direct = weighted_y_direct(&space, m, n, z, Execution::Sequential).unwrap();
            assert_eq!(direct, t.y(m, n).unwrap(), "m={m} n={n}");
        }
        assert!(weighted_y_direct(&space, 2, 2, f.one(), Execution::Sequential).is_err());
    }

    #[test]
    fn parallel_and_sequential_agree() {
        let f = make_field(11, 1).unwrap();
        let space = ModelSpace::canonical(&f);
        let seq = CensusTable::compute(
            &space,
            &CensusOptions { max_n: 10, execution: Execution::Sequential, chunk: 7 },
        )
        .unwrap();
        for threads in [1, 2, 4] {
            let par = crate::exec::with_threads(threads, || {
                CensusTable::compute(&space, &CensusOptions { max_n: 10, execution: Execution::Parallel, chunk: 5 })
            })
            .unwrap();
            assert_eq!(par, seq);
        }
    }

    #[test]
    fn twist_mass_small() {
        let f = make_field(5, 1).unwrap();
        let report = twist_mass_check(&ModelSpace::canonical(&f));
        assert_eq!(report.verdict, Verdict::Pass);
        assert_eq!(report.total, r(5, 1));
        let j1728 = report.per_j.iter().find(|t| t.j == vec![1728 % 5]).unwrap();
        assert_eq!(j1728.classes.len(), 4);
    }

    #[test]
    fn theorem_trivial_cases() {
        let t = table(5, 1, 0);
        let c = BoundConstants::default();
        let v1 = verify_theorem(&t, 1, &c).unwrap();
        assert_eq!(v1.check.lhs, ExactRational::zero());
        assert_eq!(v1.check.verdict, Verdict::Pass);
        let big = verify_theorem(&t, 50, &c).unwrap();
        assert_eq!(big.v, ExactRational::zero());
        assert_eq!(big.check.verdict, Verdict::Pass);
        let t = table(5, 1, 4);
        let yb = verify_y_bound(&t, 1, 1, &c).unwrap();
        assert_eq!(yb.check.lhs, ExactRational::zero());
        assert_eq!(yb.check.verdict, Verdict::Pass);
    }
}
