//! Genus, cusp and supersingular-point counts of the modular curves
//! `X(m, n)` over `F_q`, their general bounds, and the supersingular mass.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::census::Verdict;
use crate::ecurve::CurveModel;
use crate::ffield::{make_field, FieldError};
use crate::numtheory::{gcd, is_prime, phi, prime_power, psi};
use crate::rational::ExactRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModError {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("m = {m} must divide gcd(n, q - 1) = {g}")]
    InvalidLevel { m: u64, g: u64 },
    #[error("no closed formula for (m, n) = ({m}, {n}) over F_{q}")]
    OutOfDomain { m: u64, n: u64, q: u64 },
    #[error("{0} must be a prime at least 5")]
    BadMassPrime(u64),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Level data `(q, m, n)` with `n = n' p^r`, `gcd(n', p) = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelParams {
    pub q: u64,
    pub p: u64,
    pub m: u64,
    pub n: u64,
    pub n_prime: u64,
    pub r: u32,
}

impl LevelParams {
    pub fn new(q: u64, m: u64, n: u64) -> Result<Self, ModError> {
        let (p, _) = prime_power(q).ok_or(ModError::NotPrimePower(q))?;
        let g = gcd(n, q - 1);
        if m == 0 || n == 0 || !g.is_multiple_of(m) {
            return Err(ModError::InvalidLevel { m, g });
        }
        let mut n_prime = n;
        let mut r = 0;
        while n_prime.is_multiple_of(p) {
            n_prime /= p;
            r += 1;
        }
        Ok(LevelParams { q, p, m, n, n_prime, r })
    }

    fn out_of_domain(&self) -> ModError {
        ModError::OutOfDomain {
            m: self.m,
            n: self.n,
            q: self.q,
        }
    }

    fn phi_psi(&self) -> (u64, u64) {
        (phi(self.n).unwrap(), psi(self.n).unwrap())
    }
}

/// Genus for `m = n' > 2`.
pub fn genus_exact(l: &LevelParams) -> Result<ExactRational, ModError> {
    if l.m != l.n_prime || l.n_prime <= 2 {
        return Err(l.out_of_domain());
    }
    let (ph, ps) = l.phi_psi();
    let n = l.n as i64;
    let value = if l.n_prime == l.n {
        ExactRational::new((n - 6) * (ph * ps) as i64, 24)
    } else {
        ExactRational::new((n - 12) * (ph * psi(l.n_prime).unwrap()) as i64, 48)
    };
    Ok(ExactRational::one() + value)
}

/// Number of cusps for `m = n' > 2`, and the small cases
/// `c(1, 1) = 1`, `c(1, 2) = 2`, `c(2, 2) = 3` when `p` does not divide `n`.
pub fn cusps_exact(l: &LevelParams) -> Result<ExactRational, ModError> {
    if l.m == l.n_prime && l.n_prime > 2 {
        let (ph, _) = l.phi_psi();
        return Ok(ExactRational::new((ph * psi(l.n_prime).unwrap()) as i64, 2));
    }
    if l.r == 0 {
        let small = match (l.m, l.n) {
            (1, 1) => Some(1),
            (1, 2) => Some(2),
            (2, 2) => Some(3),
            _ => None,
        };
        if let Some(c) = small {
            return Ok(ExactRational::from_integer(c));
        }
    }
    Err(l.out_of_domain())
}

/// `phi(p^r) c(m, n')` for `n' <= 2`, an upper bound for the cusp count.
pub fn cusp_reduction_bound(l: &LevelParams) -> Result<ExactRational, ModError> {
    if l.n_prime > 2 {
        return Err(l.out_of_domain());
    }
    let base = LevelParams::new(l.q, l.m, l.n_prime)?;
    let c = cusps_exact(&base)?;
    Ok(c * ExactRational::from(phi(l.p.pow(l.r)).unwrap()))
}

/// Supersingular count `(p - 1)/24 n' phi(n') psi(n')` for `m = n'`, `r > 0`.
pub fn ss_exact(l: &LevelParams) -> Result<ExactRational, ModError> {
    if l.m != l.n_prime || l.r == 0 {
        return Err(l.out_of_domain());
    }
    let np = l.n_prime;
    Ok(ExactRational::new(
        ((l.p - 1) * np * phi(np).unwrap() * psi(np).unwrap()) as i64,
        24,
    ))
}

pub fn genus_bound(l: &LevelParams) -> ExactRational {
    let (ph, ps) = l.phi_psi();
    ExactRational::new((l.m * ph * ps) as i64, 24)
}

pub fn cusp_bound(l: &LevelParams) -> ExactRational {
    let (ph, ps) = l.phi_psi();
    ExactRational::from(ph * ps)
}

pub fn ss_bound(l: &LevelParams) -> Result<ExactRational, ModError> {
    if l.r == 0 {
        return Err(l.out_of_domain());
    }
    let (ph, ps) = l.phi_psi();
    Ok(ExactRational::new((l.m * ph * ps) as i64, 3))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupersingularClass {
    /// `j` as a coefficient vector over `F_{p^2}`.
    pub j: Vec<u32>,
    pub aut_order: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MassReport {
    pub p: u64,
    pub classes: Vec<SupersingularClass>,
    pub mass: ExactRational,
    pub expected: ExactRational,
    pub verdict: Verdict,
}

/// Sums `1/#Aut` over the supersingular `j`-invariants in `F_{p^2}` and
/// compares the result with `(p - 1)/24`.
pub fn mass_check(p: u64) -> Result<MassReport, ModError> {
    if !is_prime(p) || p < 5 {
        return Err(ModError::BadMassPrime(p));
    }
    let f = make_field(p, 2)?;
    let j1728 = f.from_int(1728);
    let mut classes = Vec::new();
    let mut mass = ExactRational::zero();
    for j in f.elements() {
        let e = if j.is_zero() {
            CurveModel::short(&f, f.zero(), f.one())
        } else if j == j1728 {
            CurveModel::short(&f, f.one(), f.zero())
        } else {
            let k = f.sub(j1728, j);
            let a = f.mul_int(3, f.mul(j, k));
            let b = f.mul_int(2, f.mul(j, f.square(k)));
            CurveModel::short(&f, a, b)
        }
        .expect("the j-model is nonsingular");
        debug_assert_eq!(e.j_invariant(), j);
        if e.is_supersingular() {
            let aut = e.automorphism_group().len() as u64;
            mass = mass + ExactRational::new(1, aut as i64);
            classes.push(SupersingularClass {
                j: f.coeffs(j),
                aut_order: aut,
            });
        }
    }
    let expected = ExactRational::new(p as i64 - 1, 24);
    let verdict = Verdict::from_bool(mass == expected);
    Ok(MassReport {
        p,
        classes,
        mass,
        expected,
        verdict,
    })
}
