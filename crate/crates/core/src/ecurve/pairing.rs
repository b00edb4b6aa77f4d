//! The Weil pairing by Miller's algorithm.
//!
//! Convention: for `P, Q` in `E[m]`,
//! `e_m(P, Q) = [f_P(Q + S) / f_P(S)] / [f_Q(P - S) / f_Q(-S)]`,
//! where `div f_X = m(X) - m(O)` and `S` is an auxiliary point. This is the
//! quotient `f_{D_P}(D_Q) / f_{D_Q}(D_P)` for `D_P = (P) - (O)` and
//! `D_Q = (Q + S) - (S)`.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ffield::FieldElement;
use crate::numtheory::gcd;

use super::{extend_point, CurveError, CurveModel, CurvePoint};

const MAX_EXTENSION_DEPTH: u32 = 4;

/// Running numerator and denominator of a Miller function at one point.
#[derive(Clone, Copy)]
struct Acc {
    num: FieldElement,
    den: FieldElement,
}

impl<'f> CurveModel<'f> {
    /// Multiplies `acc` by `l_{T,U}(R) / v_{T+U}(R)`, the function with
    /// divisor `(T) + (U) - (T + U) - (O)`.
    fn miller_step(&self, acc: &mut Acc, t: CurvePoint, u: CurvePoint, r: (FieldElement, FieldElement)) {
        let f = self.field();
        let (CurvePoint::Affine(xt, yt), CurvePoint::Affine(xu, yu)) = (t, u) else {
            return;
        };
        let (xr, yr) = (r.0, r.1);
        match self.slope((xt, yt), (xu, yu)) {
            None => {
                acc.num = f.mul(acc.num, f.sub(xr, xt));
            }
            Some(lambda) => {
                let line = f.sub(f.sub(yr, yt), f.mul(lambda, f.sub(xr, xt)));
                acc.num = f.mul(acc.num, line);
                let CurvePoint::Affine(xs, _) = self.add(t, u) else {
                    unreachable!("non-vertical line meets a third affine point")
                };
                acc.den = f.mul(acc.den, f.sub(xr, xs));
            }
        }
    }

    /// Values at `at` of the Miller function with divisor `m(P) - m(O)`, or
    /// `None` if some evaluation point meets a zero or pole of an
    /// intermediate factor.
    fn miller(&self, p: CurvePoint, m: u64, at: &[CurvePoint]) -> Option<Vec<FieldElement>> {
        let f = self.field();
        let coords: Vec<(FieldElement, FieldElement)> = at
            .iter()
            .map(|&r| match r {
                CurvePoint::Affine(x, y) => Some((x, y)),
                CurvePoint::Infinity => None,
            })
            .collect::<Option<_>>()?;
        let mut accs = vec![Acc { num: f.one(), den: f.one() }; coords.len()];
        let mut t = p;
        let bits = 64 - m.leading_zeros();
        for i in (0..bits - 1).rev() {
            for (acc, &r) in accs.iter_mut().zip(&coords) {
                acc.num = f.square(acc.num);
                acc.den = f.square(acc.den);
                self.miller_step(acc, t, t, r);
            }
            t = self.add(t, t);
            if (m >> i) & 1 == 1 {
                for (acc, &r) in accs.iter_mut().zip(&coords) {
                    self.miller_step(acc, t, p, r);
                }
                t = self.add(t, p);
            }
        }
        debug_assert!(t.is_infinity());
        accs.into_iter()
            .map(|a| (!a.num.is_zero() && !a.den.is_zero()).then(|| f.div(a.num, a.den).unwrap()))
            .collect()
    }

    fn pairing_with_aux(&self, p: CurvePoint, q: CurvePoint, s: CurvePoint, m: u64) -> Option<FieldElement> {
        let f = self.field();
        if s.is_infinity() || s == p || s == self.negate(q) || s == self.sub(p, q) {
            return None;
        }
        let neg_s = self.negate(s);
        let fp = self.miller(p, m, &[self.add(q, s), s])?;
        let fq = self.miller(q, m, &[self.sub(p, s), neg_s])?;
        let top = f.div(fp[0], fp[1]).ok()?;
        let bottom = f.div(fq[0], fq[1]).ok()?;
        f.div(top, bottom).ok()
    }

    /// `e_m(P, Q)`. The auxiliary point is drawn from the rational points in
    /// an order fixed by `seed`; if every rational candidate collides, the
    /// computation moves to the quadratic extension and maps back.
    pub fn weil_pairing(&self, p: CurvePoint, q: CurvePoint, m: u64, seed: u64) -> Result<FieldElement, CurveError> {
        if m == 0 {
            return Err(CurveError::ZeroPairingOrder);
        }
        if m.is_multiple_of(self.field().characteristic()) {
            return Err(CurveError::WildPairingOrder { m });
        }
        self.check_point(p)?;
        self.check_point(q)?;
        for x in [p, q] {
            if !self.scalar_mul(m as i64, x).is_infinity() {
                return Err(CurveError::NotTorsion { m });
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.pairing_inner(p, q, m, &mut rng, 0)
    }

    fn pairing_inner(
        &self,
        p: CurvePoint,
        q: CurvePoint,
        m: u64,
        rng: &mut ChaCha8Rng,
        depth: u32,
    ) -> Result<FieldElement, CurveError> {
        let f = self.field();
        if m == 1 || p.is_infinity() || q.is_infinity() || p == q {
            return Ok(f.one());
        }
        let mut candidates: Vec<CurvePoint> = self.points().into_iter().skip(1).collect();
        candidates.shuffle(rng);
        if let Some(v) = candidates
            .into_iter()
            .find_map(|s| self.pairing_with_aux(p, q, s, m))
        {
            return Ok(v);
        }
        if depth >= MAX_EXTENSION_DEPTH {
            return Err(CurveError::PairingFailed("no auxiliary point avoids the supports".into()));
        }
        let emb = f.quadratic_extension();
        let big = self.base_extend(&emb);
        let mut sub = ChaCha8Rng::seed_from_u64(rng.next_u64());
        let value = big.pairing_inner(extend_point(&emb, p), extend_point(&emb, q), m, &mut sub, depth + 1)?;
        emb.preimage(value)
            .ok_or_else(|| CurveError::PairingFailed("value outside the base field".into()))
    }

    /// A basis `(B1, B2)` of `E[m]` with `zeta = e_m(B1, B2)`.
    ///
    /// `B1` is the first point of order `m` in enumeration order and `B2` the
    /// first point of order `m` generating a subgroup that meets `<B1>`
    /// trivially.
    pub fn pairing_on_basis(&self, m: u64, seed: u64) -> Result<TorsionBasis, CurveError> {
        let f = self.field();
        if m == 0 {
            return Err(CurveError::ZeroPairingOrder);
        }
        let torsion: Vec<CurvePoint> = self
            .points()
            .into_iter()
            .filter(|&x| self.scalar_mul(m as i64, x).is_infinity())
            .collect();
        if torsion.len() as u64 != m * m {
            return Err(CurveError::NotFullTorsion { m });
        }
        let of_order_m: Vec<CurvePoint> = torsion
            .iter()
            .copied()
            .filter(|&x| self.point_order(x, m) == m)
            .collect();
        let b1 = of_order_m.first().copied().unwrap_or(CurvePoint::Infinity);
        let multiples = |x: CurvePoint| -> Vec<CurvePoint> {
            let mut out = vec![CurvePoint::Infinity];
            let mut cur = x;
            while !cur.is_infinity() {
                out.push(cur);
                cur = self.add(cur, x);
            }
            out
        };
        let span1 = multiples(b1);
        let b2 = of_order_m
            .iter()
            .copied()
            .find(|&x| multiples(x).iter().skip(1).all(|y| !span1.contains(y)))
            .unwrap_or(CurvePoint::Infinity);
        let mut coords = HashMap::with_capacity((m * m) as usize);
        let mut row = CurvePoint::Infinity;
        for a in 0..m {
            let mut cur = row;
            for b in 0..m {
                coords.insert(cur, (a, b));
                cur = self.add(cur, b2);
            }
            row = self.add(row, b1);
        }
        if coords.len() as u64 != m * m {
            return Err(CurveError::Inconsistent(format!("basis of E[{m}] does not span")));
        }
        let zeta = self.weil_pairing(b1, b2, m, seed)?;
        if f.multiplicative_order(zeta).ok() != Some(m) {
            return Err(CurveError::PairingFailed(format!("e_{m}(B1, B2) is not primitive")));
        }
        Ok(TorsionBasis {
            m,
            b1,
            b2,
            zeta,
            coords,
        })
    }
}

/// A basis of a fully rational `E[m]` with discrete logarithms for all of
/// its points.
#[derive(Clone, Debug)]
pub struct TorsionBasis {
    pub m: u64,
    pub b1: CurvePoint,
    pub b2: CurvePoint,
    pub zeta: FieldElement,
    coords: HashMap<CurvePoint, (u64, u64)>,
}

impl TorsionBasis {
    /// `(a, b)` with `P = a B1 + b B2`.
    pub fn coordinates(&self, p: CurvePoint) -> Option<(u64, u64)> {
        self.coords.get(&p).copied()
    }

    /// Exponent `k` with `e_m(P, Q) = zeta^k`, from `ad - bc`.
    pub fn pairing_exponent(&self, p: CurvePoint, q: CurvePoint) -> Option<u64> {
        let (a, b) = self.coordinates(p)?;
        let (c, d) = self.coordinates(q)?;
        let m = self.m;
        Some((a * d % m + m - b * c % m) % m)
    }

    pub fn pairing(&self, f: &crate::ffield::FieldSpec, p: CurvePoint, q: CurvePoint) -> Option<FieldElement> {
        self.pairing_exponent(p, q).map(|k| f.pow(self.zeta, k))
    }

    /// Points of exact order `m`.
    pub fn points_of_full_order(&self) -> impl Iterator<Item = (CurvePoint, (u64, u64))> + '_ {
        let m = self.m;
        self.coords
            .iter()
            .filter(move |(_, &(a, b))| gcd(gcd(a, b), m) == 1)
            .map(|(&p, &c)| (p, c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::{make_field, FieldSpec};

    fn models_with_full_torsion(f: &FieldSpec, m: u64, limit: usize) -> Vec<CurveModel<'_>> {
        let q = f.order() as u32;
        let mut out = vec![];
        for k in 0..q.pow(5) {
            let mut k = k;
            let a = [0; 5].map(|_| {
                let c = f.element_at(k % q).unwrap();
                k /= q;
                c
            });
            if let Ok(e) = CurveModel::new(f, a) {
                if e.group_structure().unwrap().m % m == 0 {
                    out.push(e);
                    if out.len() == limit {
                        break;
                    }
                }
            }
        }
        out
    }

    #[test]
    fn two_torsion_over_f5() {
        let f = make_field(5, 1).unwrap();
        let e = CurveModel::from_ints(&f, [0, 0, 0, 1, 0]).unwrap();
        let p = CurvePoint::Affine(f.from_int(0), f.zero());
        let q = CurvePoint::Affine(f.from_int(2), f.zero());
        assert_eq!(e.weil_pairing(p, q, 2, 1).unwrap(), f.from_int(4));
        assert_eq!(e.weil_pairing(p, p, 2, 1).unwrap(), f.one());
        let basis = e.pairing_on_basis(2, 7).unwrap();
        assert_eq!(basis.zeta, f.from_int(4));
        let trivial = e.pairing_on_basis(1, 0).unwrap();
        assert_eq!(trivial.zeta, f.one());
        assert!(e.pairing_on_basis(3, 0).is_err());
    }

    #[test]
    fn errors() {
        let f = make_field(5, 1).unwrap();
        let e = CurveModel::from_ints(&f, [0, 0, 0, 0, 1]).unwrap();
        let pts = e.points();
        let p6 = pts.iter().copied().find(|&x| e.point_order(x, 6) == 6).unwrap();
        assert_eq!(e.weil_pairing(p6, p6, 0, 0), Err(CurveError::ZeroPairingOrder));
        assert_eq!(e.weil_pairing(p6, p6, 5, 0), Err(CurveError::WildPairingOrder { m: 5 }));
        assert_eq!(e.weil_pairing(p6, p6, 2, 0), Err(CurveError::NotTorsion { m: 2 }));
    }

    /// Bilinearity, alternation, agreement with the determinant rule and
    /// independence from the auxiliary point, on every full-torsion model
    /// found in a few small fields.
    #[test]
    fn pairing_laws() {
        for (p, e, m) in [(5, 1, 2), (7, 1, 2), (7, 1, 3), (3, 2, 2), (3, 2, 4), (2, 2, 3), (13, 1, 3), (13, 1, 4)] {
            let f = make_field(p, e).unwrap();
            for c in models_with_full_torsion(&f, m, 6) {
                let basis = c.pairing_on_basis(m, 11).unwrap();
                let tors: Vec<CurvePoint> = c
                    .points()
                    .into_iter()
                    .filter(|&x| c.scalar_mul(m as i64, x).is_infinity())
                    .collect();
                for (i, &x) in tors.iter().enumerate() {
                    assert_eq!(c.weil_pairing(x, x, m, 3).unwrap(), f.one());
                    for &y in tors.iter().skip(i % 3).step_by(3) {
                        let direct = c.weil_pairing(x, y, m, 5).unwrap();
                        assert_eq!(direct, c.weil_pairing(x, y, m, 99).unwrap());
                        assert_eq!(f.pow(direct, m), f.one());
                        assert_eq!(Some(direct), basis.pairing(&f, x, y));
                        assert_eq!(c.weil_pairing(y, x, m, 5).unwrap(), f.inv(direct).unwrap());
                        let z = tors[(i * 5 + 2) % tors.len()];
                        let lhs = c.weil_pairing(c.add(x, z), y, m, 17).unwrap();
                        let rhs = f.mul(direct, c.weil_pairing(z, y, m, 23).unwrap());
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn extension_fallback_on_tiny_groups() {
        // Every rational auxiliary point collides when E(F_q) = E[2].
        let f = make_field(3, 1).unwrap();
        for c in models_with_full_torsion(&f, 2, 10) {
            let basis = c.pairing_on_basis(2, 0).unwrap();
            assert_eq!(basis.zeta, f.from_int(-1));
        }
    }
}
