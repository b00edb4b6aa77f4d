//! Explicit arithmetic in `F_{p^e}`.
//!
//! An element is a polynomial in `t` of degree `< e` over `Z/p`, reduced
//! modulo a fixed monic irreducible polynomial. Every element is addressed by
//! an index in `0..q`. Index order is the lexicographic order of the
//! coefficient vector `[c_0, c_1, ..., c_{e-1}]` (constant term first), so
//! the constant term is the most significant base-`p` digit of the index.
//!
//! Construction is exhaustive and deterministic: the modulus is the
//! lexicographically smallest monic irreducible polynomial (found by trial
//! division), and the primitive root is the first element in index order
//! whose multiplicative order is `q - 1`. Multiplication, inversion and
//! powering go through discrete-log tables built from that primitive root;
//! inversion is therefore `x^{q-2}` evaluated in the exponent.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

use crate::numtheory::is_prime;

/// Largest field order this module will build tables for.
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

/// Fields up to this order get a full addition table.
const ADD_TABLE_LIMIT: u32 = 1024;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {0} exceeds the supported maximum")]
    TooLarge(u64),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("zero has no multiplicative order")]
    ZeroOrder,
    #[error("{m} does not divide q - 1 = {q_minus_one}")]
    NoRootOfUnity { m: u64, q_minus_one: u64 },
    #[error("coefficient vector must have length {expected} with entries below {p}")]
    BadCoefficients { expected: usize, p: u32 },
    #[error("F_{small} is not a subfield of F_{big}")]
    NotSubfield { small: u64, big: u64 },
}

/// An element of some [`FieldSpec`].
///
/// The element carries the order of its field as a tag; arithmetic on
/// elements of different fields panics.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct FieldElement {
    q: u32,
    idx: u32,
}

impl FieldElement {
    /// Position of the element in enumeration order.
    pub fn index(self) -> u32 {
        self.idx
    }

    /// Order of the field this element belongs to.
    pub fn field_order(self) -> u32 {
        self.q
    }

    pub fn is_zero(self) -> bool {
        self.idx == 0
    }
}

#[derive(Debug)]
enum Adder {
    Prime,
    Table(Vec<u32>),
    Digits,
}

struct Extension {
    field: FieldSpec,
    image: Vec<u32>,
}

/// A finite field `F_{p^e}` together with its arithmetic tables.
pub struct FieldSpec {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    /// `pow_p[i] = p^(e-1-i)`: place value of coefficient `i` in an index.
    place: Vec<u32>,
    generator: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    adder: Adder,
    neg: Vec<u32>,
    one: u32,
    /// Characteristic 2 only: for each `c`, some `z` with `z^2 + z = c`, or
    /// `u32::MAX` when there is none.
    artin_schreier: Vec<u32>,
    quadratic: OnceLock<Box<Extension>>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.p)
            .field("e", &self.e)
            .field("q", &self.q)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

/// Builds `F_{p^e}` with the lexicographically smallest irreducible modulus.
pub fn make_field(p: u64, e: u32) -> Result<FieldSpec, FieldError> {
    FieldSpec::new(p, e)
}

/// Polynomial helpers over `Z/p`, coefficient vectors low degree first.
mod poly {
    pub fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let p = p as u64;
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u64 * y as u64) % p;
            }
        }
        out.into_iter().map(|c| c as u32).collect()
    }

    /// Remainder of `a` modulo a monic polynomial.
    pub fn rem_monic(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let dm = m.len() - 1;
        let mut r: Vec<u64> = a.iter().map(|&c| c as u64).collect();
        let p = p as u64;
        while r.len() > dm {
            let lead = r.pop().unwrap() % p;
            if lead == 0 {
                continue;
            }
            let off = r.len() - dm;
            for (k, &mc) in m[..dm].iter().enumerate() {
                r[off + k] = (r[off + k] + (p - lead) * mc as u64) % p;
            }
        }
        r.into_iter().map(|c| (c % p) as u32).collect()
    }

    pub fn is_zero(a: &[u32]) -> bool {
        a.iter().all(|&c| c == 0)
    }
}

fn digits_of(mut k: u64, p: u64, len: usize) -> Vec<u32> {
    // Most significant digit first.
    let mut d = vec![0u32; len];
    for slot in d.iter_mut().rev() {
        *slot = (k % p) as u32;
        k /= p;
    }
    d
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
fn is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for k in 0..count {
            let mut g = digits_of(k, p as u64, d);
            g.push(1);
            if poly::is_zero(&poly::rem_monic(f, &g, p)) {
                return false;
            }
        }
    }
    true
}

impl FieldSpec {
    pub fn new(p: u64, e: u32) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if e == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let q = p
            .checked_pow(e)
            .filter(|&q| q <= MAX_FIELD_ORDER)
            .ok_or(FieldError::TooLarge(p.saturating_pow(e)))?;
        let p32 = p as u32;
        let e_us = e as usize;

        let modulus = (0..q)
            .map(|k| {
                let mut f = digits_of(k, p, e_us);
                f.push(1);
                f
            })
            .find(|f| is_irreducible(f, p32))
            .expect("an irreducible polynomial of every degree exists");

        let place: Vec<u32> = (0..e).map(|i| p.pow(e - 1 - i) as u32).collect();
        let q32 = q as u32;
        let mut field = FieldSpec {
            p: p32,
            e,
            q: q32,
            modulus,
            one: place[0],
            place,
            generator: 0,
            exp: Vec::new(),
            log: Vec::new(),
            adder: Adder::Digits,
            neg: Vec::new(),
            artin_schreier: Vec::new(),
            quadratic: OnceLock::new(),
        };
        field.build_tables();
        Ok(field)
    }

    fn encode(&self, coeffs: &[u32]) -> u32 {
        coeffs
            .iter()
            .zip(&self.place)
            .map(|(&c, &w)| c * w)
            .sum()
    }

    fn decode(&self, idx: u32) -> Vec<u32> {
        self.place.iter().map(|&w| (idx / w) % self.p).collect()
    }

    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let prod = poly::mul(&self.decode(a), &self.decode(b), self.p);
        let mut r = poly::rem_monic(&prod, &self.modulus, self.p);
        r.resize(self.e as usize, 0);
        self.encode(&r)
    }

    fn digit_add(&self, a: u32, b: u32) -> u32 {
        let p = self.p;
        self.place
            .iter()
            .map(|&w| ((a / w % p + b / w % p) % p) * w)
            .sum()
    }

    fn build_tables(&mut self) {
        let q = self.q;
        let p = self.p;

        self.neg = (0..q)
            .map(|a| {
                let c: Vec<u32> = self.decode(a).iter().map(|&d| (p - d) % p).collect();
                self.encode(&c)
            })
            .collect();

        // Primitive root: first element whose order, found by repeated
        // multiplication, is q - 1.
        let one = self.one;
        self.generator = if q == 2 {
            one
        } else {
            (1..q)
                .find(|&g| {
                    let mut x = g;
                    let mut k = 1u32;
                    while x != one {
                        x = self.slow_mul(x, g);
                        k += 1;
                    }
                    k == q - 1
                })
                .expect("the multiplicative group of a finite field is cyclic")
        };

        let n = (q - 1) as usize;
        let mut exp = Vec::with_capacity(2 * n);
        let mut log = vec![0u32; q as usize];
        let mut x = one;
        for i in 0..n {
            exp.push(x);
            log[x as usize] = i as u32;
            x = self.slow_mul(x, self.generator);
        }
        debug_assert_eq!(x, one);
        exp.extend_from_within(..);
        self.exp = exp;
        self.log = log;

        self.adder = if self.e == 1 {
            Adder::Prime
        } else if q <= ADD_TABLE_LIMIT {
            let mut t = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = self.digit_add(a, b);
                }
            }
            Adder::Table(t)
        } else {
            Adder::Digits
        };

        if p == 2 {
            let mut table = vec![u32::MAX; q as usize];
            for z in self.elements() {
                let c = self.add(self.square(z), z);
                let slot = &mut table[c.idx as usize];
                if *slot == u32::MAX {
                    *slot = z.idx;
                }
            }
            self.artin_schreier = table;
        }
    }

    pub fn characteristic(&self) -> u64 {
        self.p as u64
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    pub fn order(&self) -> u64 {
        self.q as u64
    }

    /// Modulus coefficients, low degree first, monic (length `e + 1`).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    #[inline]
    fn check(&self, x: FieldElement) {
        assert_eq!(x.q, self.q, "element of F_{} used in F_{}", x.q, self.q);
    }

    #[inline]
    fn wrap(&self, idx: u32) -> FieldElement {
        FieldElement { q: self.q, idx }
    }

    pub fn zero(&self) -> FieldElement {
        self.wrap(0)
    }

    pub fn one(&self) -> FieldElement {
        self.wrap(self.one)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, k: i64) -> FieldElement {
        let c = k.rem_euclid(self.p as i64) as u32;
        self.wrap(c * self.place[0])
    }

    /// Element with the given coefficients (low degree first).
    pub fn element(&self, coeffs: &[u32]) -> Result<FieldElement, FieldError> {
        if coeffs.len() != self.e as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(FieldError::BadCoefficients {
                expected: self.e as usize,
                p: self.p,
            });
        }
        Ok(self.wrap(self.encode(coeffs)))
    }

    /// Element at a position in enumeration order.
    pub fn element_at(&self, index: u32) -> Option<FieldElement> {
        (index < self.q).then(|| self.wrap(index))
    }

    pub fn coeffs(&self, x: FieldElement) -> Vec<u32> {
        self.check(x);
        self.decode(x.idx)
    }

    /// All `q` elements in enumeration order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q).map(move |i| self.wrap(i))
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.check(a);
        self.check(b);
        let idx = match &self.adder {
            Adder::Prime => {
                let s = a.idx + b.idx;
                if s >= self.p {
                    s - self.p
                } else {
                    s
                }
            }
            Adder::Table(t) => t[(a.idx * self.q + b.idx) as usize],
            Adder::Digits => self.digit_add(a.idx, b.idx),
        };
        self.wrap(idx)
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        self.check(a);
        self.wrap(self.neg[a.idx as usize])
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.check(a);
        self.check(b);
        if a.idx == 0 || b.idx == 0 {
            return self.zero();
        }
        let l = self.log[a.idx as usize] + self.log[b.idx as usize];
        self.wrap(self.exp[l as usize])
    }

    #[inline]
    pub fn square(&self, a: FieldElement) -> FieldElement {
        self.mul(a, a)
    }

    /// `k * a` for an integer `k`.
    pub fn mul_int(&self, k: i64, a: FieldElement) -> FieldElement {
        self.mul(self.from_int(k), a)
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        self.check(a);
        if a.idx == 0 {
            return Err(FieldError::ZeroInverse);
        }
        let n = self.q - 1;
        let l = (n - self.log[a.idx as usize]) % n;
        Ok(self.wrap(self.exp[l as usize]))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElement, k: u64) -> FieldElement {
        self.check(a);
        if k == 0 {
            return self.one();
        }
        if a.idx == 0 {
            return self.zero();
        }
        let n = (self.q - 1) as u64;
        let l = (self.log[a.idx as usize] as u64 * (k % n)) % n;
        self.wrap(self.exp[l as usize])
    }

    /// `x^(p^r)`.
    pub fn frobenius(&self, x: FieldElement, r: u32) -> FieldElement {
        let n = (self.q - 1) as u64;
        let mut k = 1u64;
        for _ in 0..r {
            k = k * self.p as u64 % n.max(1);
        }
        if n == 1 {
            // F_2: the identity.
            return x;
        }
        self.pow(x, if k == 0 { n } else { k })
    }

    pub fn multiplicative_order(&self, x: FieldElement) -> Result<u64, FieldError> {
        self.check(x);
        if x.idx == 0 {
            return Err(FieldError::ZeroOrder);
        }
        let n = (self.q - 1) as u64;
        let l = self.log[x.idx as usize] as u64;
        Ok(n / num_integer::gcd(n, l))
    }

    /// The primitive root used by the discrete-log tables.
    pub fn primitive_root(&self) -> FieldElement {
        self.wrap(self.generator)
    }

    /// `g^((q-1)/m)` for the primitive root `g`; an element of order `m`.
    pub fn root_of_unity(&self, m: u64) -> Result<FieldElement, FieldError> {
        let n = (self.q - 1) as u64;
        if m == 0 || !n.is_multiple_of(m) {
            return Err(FieldError::NoRootOfUnity { m, q_minus_one: n });
        }
        Ok(self.pow(self.primitive_root(), n / m))
    }

    /// Quadratic character `x^((q-1)/2)` as `-1, 0, 1`; odd characteristic.
    pub fn quadratic_character(&self, x: FieldElement) -> i8 {
        debug_assert!(self.p != 2);
        if x.idx == 0 {
            return 0;
        }
        let h = self.pow(x, ((self.q - 1) / 2) as u64);
        if h.idx == self.one {
            1
        } else {
            -1
        }
    }

    /// A square root of `x`, if one exists.
    pub fn sqrt(&self, x: FieldElement) -> Option<FieldElement> {
        self.check(x);
        if x.idx == 0 {
            return Some(x);
        }
        if self.p == 2 {
            return Some(self.pow(x, (self.q / 2) as u64));
        }
        let l = self.log[x.idx as usize];
        l.is_multiple_of(2).then(|| self.wrap(self.exp[(l / 2) as usize]))
    }

    /// Characteristic 2: the solutions `z` of `z^2 + z = c`.
    pub fn artin_schreier_roots(&self, c: FieldElement) -> Option<[FieldElement; 2]> {
        assert_eq!(self.p, 2, "Artin-Schreier roots need characteristic 2");
        self.check(c);
        let z = self.artin_schreier[c.idx as usize];
        (z != u32::MAX).then(|| {
            let z = self.wrap(z);
            [z, self.add(z, self.one())]
        })
    }

    /// Human-readable polynomial form in `t`, e.g. `2t+1`.
    pub fn format(&self, x: FieldElement) -> String {
        let c = self.coeffs(x);
        let terms: Vec<String> = c
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &k)| k != 0)
            .map(|(i, &k)| match (i, k) {
                (0, k) => k.to_string(),
                (1, 1) => "t".to_string(),
                (1, k) => format!("{k}t"),
                (i, 1) => format!("t^{i}"),
                (i, k) => format!("{k}t^{i}"),
            })
            .collect();
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join("+")
        }
    }

    /// `F_{q^2}` with the canonical embedding of this field, built on first use.
    pub fn quadratic_extension(&self) -> Embedding<'_, '_> {
        let ext = self.quadratic.get_or_init(|| {
            let field = FieldSpec::new(self.p as u64, 2 * self.e)
                .expect("quadratic extension of a supported field");
            let image = embedding_image(self, &field);
            Box::new(Extension { field, image })
        });
        Embedding::from_image(self, &ext.field, ext.image.clone())
    }
}

/// Image of `t` is the first root of the small modulus in the big field;
/// returns the index of the image of each small-field element.
fn embedding_image(small: &FieldSpec, big: &FieldSpec) -> Vec<u32> {
    let eval = |beta: FieldElement| {
        small
            .modulus
            .iter()
            .rev()
            .fold(big.zero(), |acc, &c| big.add(big.mul(acc, beta), big.from_int(c as i64)))
    };
    let root = big
        .elements()
        .find(|&b| eval(b).is_zero())
        .expect("the small modulus splits in the big field");
    let powers: Vec<FieldElement> = (0..small.e)
        .scan(big.one(), |acc, _| {
            let cur = *acc;
            *acc = big.mul(*acc, root);
            Some(cur)
        })
        .collect();
    small
        .elements()
        .map(|x| {
            small
                .decode(x.idx)
                .iter()
                .zip(&powers)
                .fold(big.zero(), |acc, (&c, &pw)| big.add(acc, big.mul_int(c as i64, pw)))
                .idx
        })
        .collect()
}

/// The canonical embedding of `F_{p^e}` into `F_{p^{ek}}`.
#[derive(Debug, Clone)]
pub struct Embedding<'s, 'b> {
    small: &'s FieldSpec,
    big: &'b FieldSpec,
    image: Vec<u32>,
    preimage: HashMap<u32, u32>,
}

impl<'s, 'b> Embedding<'s, 'b> {
    pub fn new(small: &'s FieldSpec, big: &'b FieldSpec) -> Result<Self, FieldError> {
        if small.p != big.p || !big.e.is_multiple_of(small.e) {
            return Err(FieldError::NotSubfield {
                small: small.order(),
                big: big.order(),
            });
        }
        Ok(Self::from_image(small, big, embedding_image(small, big)))
    }

    fn from_image(small: &'s FieldSpec, big: &'b FieldSpec, image: Vec<u32>) -> Self {
        let preimage = image
            .iter()
            .enumerate()
            .map(|(i, &b)| (b, i as u32))
            .collect();
        Embedding {
            small,
            big,
            image,
            preimage,
        }
    }

    pub fn small(&self) -> &'s FieldSpec {
        self.small
    }

    pub fn big(&self) -> &'b FieldSpec {
        self.big
    }

    pub fn map(&self, x: FieldElement) -> FieldElement {
        self.small.check(x);
        self.big.wrap(self.image[x.idx as usize])
    }

    /// The small-field element mapping to `y`, if `y` lies in the image.
    pub fn preimage(&self, y: FieldElement) -> Option<FieldElement> {
        self.big.check(y);
        self.preimage.get(&y.idx).map(|&i| self.small.wrap(i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn test_fields() -> Vec<FieldSpec> {
        [(2, 1), (3, 1), (5, 1), (7, 1), (2, 2), (2, 3), (3, 2), (2, 4), (5, 2), (3, 3)]
            .iter()
            .map(|&(p, e)| make_field(p, e).unwrap())
            .collect()
    }

    #[test]
    fn prime_field_modulus_is_x() {
        let f = make_field(5, 1).unwrap();
        assert_eq!(f.modulus(), &[0, 1]);
        assert_eq!(f.order(), 5);
    }

    #[test]
    fn f9_modulus_is_x2_plus_1() {
        let f = make_field(3, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 0, 1]);
        assert_eq!(f.order(), 9);
    }

    /// Independent oracle: all monic polynomials of degree e over Z/p that
    /// are products of two monic factors of positive degree.
    fn reducible_set(p: u32, e: usize) -> std::collections::HashSet<Vec<u32>> {
        let monics = |d: usize| -> Vec<Vec<u32>> {
            (0..(p as u64).pow(d as u32))
                .map(|k| {
                    let mut v: Vec<u32> = (0..d)
                        .map(|i| ((k / (p as u64).pow(i as u32)) % p as u64) as u32)
                        .collect();
                    v.push(1);
                    v
                })
                .collect()
        };
        let mut out = std::collections::HashSet::new();
        for d in 1..e {
            for a in monics(d) {
                for b in monics(e - d) {
                    out.insert(poly::mul(&a, &b, p));
                }
            }
        }
        out
    }

    #[test]
    fn moduli_are_first_irreducible_in_lex_order() {
        for (p, e) in [(2u32, 2usize), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2), (7, 2)] {
            let reducible = reducible_set(p, e);
            // Candidates ordered by (c0, c1, ..., c_{e-1}).
            let expected = (0..(p as u64).pow(e as u32))
                .map(|k| {
                    let mut f = digits_of(k, p as u64, e);
                    f.push(1);
                    f
                })
                .find(|f| !reducible.contains(f))
                .unwrap();
            let field = make_field(p as u64, e as u32).unwrap();
            assert_eq!(field.modulus(), expected.as_slice(), "p={p} e={e}");
        }
        // x^4 + x^3 + 1 precedes x^4 + x + 1 when c0 is compared first.
        assert_eq!(make_field(2, 4).unwrap().modulus(), &[1, 0, 0, 1, 1]);
    }

    #[test]
    fn make_field_rejects_bad_input() {
        assert_eq!(make_field(4, 1).unwrap_err(), FieldError::NotPrime(4));
        assert_eq!(make_field(1, 1).unwrap_err(), FieldError::NotPrime(1));
        assert_eq!(make_field(5, 0).unwrap_err(), FieldError::ZeroDegree);
        assert!(matches!(make_field(2, 40), Err(FieldError::TooLarge(_))));
    }

    #[test]
    fn make_field_is_deterministic() {
        for f in test_fields() {
            let g = make_field(f.characteristic(), f.degree()).unwrap();
            assert_eq!(f.modulus(), g.modulus());
            assert_eq!(f.primitive_root(), g.primitive_root());
        }
    }

    #[test]
    fn small_examples() {
        let f5 = make_field(5, 1).unwrap();
        assert_eq!(f5.inv(f5.from_int(2)).unwrap(), f5.from_int(3));
        assert_eq!(f5.inv(f5.zero()), Err(FieldError::ZeroInverse));
        assert_eq!(f5.multiplicative_order(f5.from_int(4)).unwrap(), 2);
        assert_eq!(f5.multiplicative_order(f5.one()).unwrap(), 1);
        assert_eq!(f5.multiplicative_order(f5.zero()), Err(FieldError::ZeroOrder));
        assert_eq!(f5.root_of_unity(1).unwrap(), f5.one());
        assert_eq!(f5.root_of_unity(2).unwrap(), f5.from_int(4));
        assert!(f5.root_of_unity(3).is_err());
        let elems: Vec<u32> = f5.elements().map(|x| f5.coeffs(x)[0]).collect();
        assert_eq!(elems, vec![0, 1, 2, 3, 4]);

        let f7 = make_field(7, 1).unwrap();
        assert_eq!(f7.multiplicative_order(f7.from_int(3)).unwrap(), 6);
        let z3 = f7.root_of_unity(3).unwrap();
        assert_eq!(f7.pow(z3, 3), f7.one());
        assert_ne!(z3, f7.one());

        let f9 = make_field(3, 2).unwrap();
        let t = f9.element(&[0, 1]).unwrap();
        assert_eq!(f9.mul(t, t), f9.from_int(2));
        assert_eq!(f9.frobenius(t, 1), f9.mul_int(2, t));
        assert_eq!(f9.format(f9.frobenius(t, 1)), "2t");
        assert_eq!(f9.elements().count(), 9);
        assert_eq!(make_field(2, 2).unwrap().elements().count(), 4);
    }

    #[test]
    fn elements_are_distinct_and_ordered_by_coefficients() {
        for f in test_fields() {
            let coeffs: Vec<Vec<u32>> = f.elements().map(|x| f.coeffs(x)).collect();
            assert_eq!(coeffs.len() as u64, f.order());
            assert!(coeffs.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn tables_agree_with_polynomial_multiplication() {
        for f in test_fields() {
            for a in f.elements() {
                for b in f.elements() {
                    let slow = poly::rem_monic(
                        &poly::mul(&f.coeffs(a), &f.coeffs(b), f.p),
                        f.modulus(),
                        f.p,
                    );
                    let mut slow = slow;
                    slow.resize(f.e as usize, 0);
                    assert_eq!(f.coeffs(f.mul(a, b)), slow);
                }
            }
        }
    }

    #[test]
    fn fermat_and_frobenius() {
        for f in test_fields() {
            for x in f.elements() {
                assert_eq!(f.pow(x, f.order()), x);
                assert_eq!(f.frobenius(x, f.degree()), x);
                if f.coeffs(x)[1..].iter().all(|&c| c == 0) {
                    assert_eq!(f.frobenius(x, 1), x);
                }
                if !x.is_zero() {
                    let ord = f.multiplicative_order(x).unwrap();
                    assert_eq!((f.order() - 1) % ord, 0);
                    assert_eq!(f.pow(x, ord), f.one());
                    // Fermat inversion agrees with the table inverse.
                    assert_eq!(f.inv(x).unwrap(), f.pow(x, f.order() - 2));
                }
            }
        }
    }

    #[test]
    fn roots_of_unity_have_exact_order() {
        for f in test_fields() {
            let n = f.order() - 1;
            let full = f.root_of_unity(n).unwrap();
            assert_eq!(full, f.primitive_root());
            for m in (1..=n).filter(|m| n % m == 0) {
                let z = f.root_of_unity(m).unwrap();
                assert_eq!(f.multiplicative_order(z).unwrap(), m);
                assert_eq!(z, f.pow(full, n / m));
            }
            // The primitive root is the first generator in enumeration order.
            let first = f
                .elements()
                .find(|&x| !x.is_zero() && f.multiplicative_order(x).unwrap() == n)
                .unwrap();
            assert_eq!(first, f.primitive_root());
        }
    }

    #[test]
    fn square_roots_and_characters() {
        for f in test_fields() {
            for x in f.elements() {
                let sq = f.elements().any(|y| f.square(y) == x);
                match f.sqrt(x) {
                    Some(r) => assert_eq!(f.square(r), x),
                    None => assert!(!sq),
                }
                if f.characteristic() != 2 {
                    let chi = f.quadratic_character(x);
                    assert_eq!(chi, if x.is_zero() { 0 } else if sq { 1 } else { -1 });
                } else {
                    let brute: Vec<_> =
                        f.elements().filter(|&z| f.add(f.square(z), z) == x).collect();
                    match f.artin_schreier_roots(x) {
                        Some([a, b]) => {
                            assert_eq!(brute.len(), 2);
                            assert!(brute.contains(&a) && brute.contains(&b));
                        }
                        None => assert!(brute.is_empty()),
                    }
                }
            }
        }
    }

    #[test]
    #[should_panic(expected = "used in")]
    fn mixed_fields_panic() {
        let f5 = make_field(5, 1).unwrap();
        let f7 = make_field(7, 1).unwrap();
        f5.add(f5.one(), f7.one());
    }

    #[test]
    fn embeddings_are_ring_homomorphisms() {
        for (p, e, k) in [(2, 1, 2), (2, 2, 2), (3, 1, 2), (3, 2, 2), (5, 1, 2), (2, 1, 3)] {
            let small = make_field(p, e).unwrap();
            let big = make_field(p, e * k).unwrap();
            let emb = Embedding::new(&small, &big).unwrap();
            for a in small.elements() {
                assert_eq!(emb.preimage(emb.map(a)), Some(a));
                for b in small.elements() {
                    assert_eq!(emb.map(small.add(a, b)), big.add(emb.map(a), emb.map(b)));
                    assert_eq!(emb.map(small.mul(a, b)), big.mul(emb.map(a), emb.map(b)));
                }
            }
            let image_count = big.elements().filter(|&y| emb.preimage(y).is_some()).count();
            assert_eq!(image_count as u64, small.order());
        }
        let f4 = make_field(2, 2).unwrap();
        let f8 = make_field(2, 3).unwrap();
        assert!(Embedding::new(&f4, &f8).is_err());
        let q = f4.quadratic_extension();
        assert_eq!(q.big().order(), 16);
    }

    proptest! {
        #[test]
        fn field_axioms(fi in 0usize..10, a in 0u32..10_000, b in 0u32..10_000, c in 0u32..10_000) {
            let fields = test_fields();
            let f = &fields[fi];
            let q = f.order() as u32;
            let (a, b, c) = (
                f.element_at(a % q).unwrap(),
                f.element_at(b % q).unwrap(),
                f.element_at(c % q).unwrap(),
            );
            prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
            prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
            prop_assert_eq!(f.add(a, b), f.add(b, a));
            prop_assert_eq!(f.mul(a, b), f.mul(b, a));
            prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            prop_assert_eq!(f.add(a, f.neg(a)), f.zero());
            prop_assert_eq!(f.sub(a, b), f.add(a, f.neg(b)));
            prop_assert_eq!(f.mul(a, f.one()), a);
            if !a.is_zero() {
                prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
            }
            prop_assert_eq!(f.frobenius(f.add(a, b), 1), f.add(f.frobenius(a, 1), f.frobenius(b, 1)));
            prop_assert_eq!(f.frobenius(f.mul(a, b), 1), f.mul(f.frobenius(a, 1), f.frobenius(b, 1)));
        }
    }
}
