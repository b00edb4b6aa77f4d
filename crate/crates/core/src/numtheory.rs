//! Multiplicative arithmetic functions and the divisibility estimator `r(N)`.

use thiserror::Error;

use crate::rational::ExactRational;

pub use num_integer::{gcd, lcm};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NumError {
    #[error("argument must be a positive integer")]
    NonPositive,
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
}

/// Prime factorization: `(prime, exponent)` pairs in ascending prime order.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Factorization(Vec<(u64, u32)>);

impl Factorization {
    pub fn pairs(&self) -> &[(u64, u32)] {
        &self.0
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.iter().map(|&(l, _)| l)
    }

    pub fn value(&self) -> u64 {
        self.0.iter().map(|&(l, a)| l.pow(a)).product()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

pub fn factorize(n: u64) -> Result<Factorization, NumError> {
    if n == 0 {
        return Err(NumError::NonPositive);
    }
    let mut out = Vec::new();
    let mut n = n;
    let mut l = 2u64;
    while l * l <= n {
        if n.is_multiple_of(l) {
            let mut a = 0;
            while n.is_multiple_of(l) {
                n /= l;
                a += 1;
            }
            out.push((l, a));
        }
        l += if l == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    Ok(Factorization(out))
}

fn fact(n: u64) -> Factorization {
    factorize(n).expect("positive argument")
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && fact(n).0 == [(n, 1)]
}

/// `(p, e)` with `q = p^e`, if `q` is a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    match fact(q).0.as_slice() {
        [(p, e)] => Some((*p, *e)),
        _ => None,
    }
}

fn check(n: u64) -> Result<Factorization, NumError> {
    factorize(n)
}

pub fn mobius(n: u64) -> Result<i8, NumError> {
    let f = check(n)?;
    if f.0.iter().any(|&(_, a)| a > 1) {
        Ok(0)
    } else if f.0.len() % 2 == 0 {
        Ok(1)
    } else {
        Ok(-1)
    }
}

/// Number of distinct prime divisors.
pub fn nu(n: u64) -> Result<u32, NumError> {
    Ok(check(n)?.0.len() as u32)
}

pub fn phi(n: u64) -> Result<u64, NumError> {
    Ok(check(n)?
        .0
        .iter()
        .map(|&(l, a)| l.pow(a - 1) * (l - 1))
        .product())
}

/// Dedekind's `psi(n) = n * prod_{l | n} (1 + 1/l)`.
pub fn psi(n: u64) -> Result<u64, NumError> {
    Ok(check(n)?
        .0
        .iter()
        .map(|&(l, a)| l.pow(a - 1) * (l + 1))
        .product())
}

/// `rho(n) = prod_{l | n} (l + 1) / (l - 1)`.
pub fn rho(n: u64) -> Result<ExactRational, NumError> {
    Ok(check(n)?
        .primes()
        .map(|l| ExactRational::new(l as i64 + 1, l as i64 - 1))
        .fold(ExactRational::one(), |acc, x| acc * x))
}

/// `t(l^a) = l^floor(a/2)`, extended multiplicatively.
pub fn t_func(n: u64) -> Result<u64, NumError> {
    Ok(check(n)?.0.iter().map(|&(l, a)| l.pow(a / 2)).product())
}

/// `u(l^a) = l^ceil(a/2)`, extended multiplicatively; `t(n) u(n) = n`.
pub fn u_func(n: u64) -> Result<u64, NumError> {
    Ok(check(n)?.0.iter().map(|&(l, a)| l.pow(a.div_ceil(2))).product())
}

/// Largest power of `l` dividing `n`.
pub fn part_at_prime(n: u64, l: u64) -> Result<u64, NumError> {
    if n == 0 {
        return Err(NumError::NonPositive);
    }
    if l < 2 {
        return Ok(1);
    }
    let mut part = 1;
    let mut n = n;
    while n.is_multiple_of(l) {
        n /= l;
        part *= l;
    }
    Ok(part)
}

/// Divisors in ascending order.
pub fn divisors(n: u64) -> Result<Vec<u64>, NumError> {
    let f = check(n)?;
    let mut out = vec![1u64];
    for &(l, a) in f.pairs() {
        let base = out.clone();
        let mut pw = 1;
        for _ in 0..a {
            pw *= l;
            out.extend(base.iter().map(|d| d * pw));
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// The estimator `r(N)` for the probability that `N` divides the order of a
/// random elliptic curve over `F_q`.
pub fn r_closed_form(n: u64, q: u64) -> Result<ExactRational, NumError> {
    let f = check(n)?;
    if prime_power(q).is_none() {
        return Err(NumError::NotPrimePower(q));
    }
    let mut acc = ExactRational::one();
    for &(l, a) in f.pairs() {
        let b = a / 2;
        let c = a.div_ceil(2);
        let li = l as i64;
        let local = if !(q - 1).is_multiple_of(l.pow(c)) {
            ExactRational::new(1, li.pow(a - 1) * (li - 1))
        } else {
            ExactRational::new(
                li.pow(b + 1) + li.pow(b) - 1,
                li.pow(a + b - 1) * (li * li - 1),
            )
        };
        acc = acc * local;
    }
    Ok(acc)
}
