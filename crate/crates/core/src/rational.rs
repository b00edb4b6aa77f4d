//! Exact rationals for weighted counts and formula values.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// An arbitrary-precision rational number in lowest terms with positive
/// denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ExactRational(BigRational);

impl ExactRational {
    /// `num / den`; panics if `den` is zero.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        ExactRational(BigRational::new(num.into(), den.into()))
    }

    pub fn from_big(num: BigInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        ExactRational(BigRational::new(num, den))
    }

    pub fn from_integer(n: i64) -> Self {
        ExactRational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        ExactRational(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactRational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        ExactRational(self.0.abs())
    }

    pub fn recip(&self) -> Self {
        ExactRational(self.0.recip())
    }

    pub fn pow(&self, k: i32) -> Self {
        ExactRational(num_traits::Pow::pow(&self.0, k))
    }

    pub fn square(&self) -> Self {
        self * self
    }

    /// The value as an integer, if it is one and fits.
    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.numer().to_i64()
        } else {
            None
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Decimal rendering with `digits` places after the point, truncated toward zero.
    pub fn to_decimal(&self, digits: u32) -> String {
        let scale = BigInt::from(10u32).pow(digits);
        let scaled = (self.numer() * &scale) / self.denom();
        let neg = scaled.is_negative() || (scaled.is_zero() && self.is_negative());
        let mag = scaled.abs().to_string();
        let d = digits as usize;
        let mag = format!("{:0>width$}", mag, width = d + 1);
        let (int, frac) = mag.split_at(mag.len() - d);
        let sign = if neg { "-" } else { "" };
        if d == 0 {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{frac}")
        }
    }
}

impl Default for ExactRational {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for ExactRational {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

impl From<u64> for ExactRational {
    fn from(n: u64) -> Self {
        ExactRational(BigRational::from_integer(n.into()))
    }
}

impl From<BigInt> for ExactRational {
    fn from(n: BigInt) -> Self {
        ExactRational(BigRational::from_integer(n))
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("cannot parse {0:?} as a rational")]
pub struct ParseRationalError(String);

impl FromStr for ExactRational {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseRationalError(s.to_string());
        let (n, d) = match s.trim().split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let n: BigInt = n.parse().map_err(|_| err())?;
        let d: BigInt = d.parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        Ok(ExactRational::from_big(n, d))
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr for ExactRational {
            type Output = ExactRational;
            fn $m(self, rhs: ExactRational) -> ExactRational {
                ExactRational(self.0.$m(rhs.0))
            }
        }
        impl<'a> $tr<&'a ExactRational> for &'a ExactRational {
            type Output = ExactRational;
            fn $m(self, rhs: &'a ExactRational) -> ExactRational {
                ExactRational((&self.0).$m(&rhs.0))
            }
        }
        impl<'a> $tr<&'a ExactRational> for ExactRational {
            type Output = ExactRational;
            fn $m(self, rhs: &'a ExactRational) -> ExactRational {
                ExactRational(self.0.$m(&rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-self.0)
    }
}

impl Sum for ExactRational {
    fn sum<I: Iterator<Item = ExactRational>>(iter: I) -> Self {
        iter.fold(ExactRational::zero(), |a, b| a + b)
    }
}

impl<'a> Sum<&'a ExactRational> for ExactRational {
    fn sum<I: Iterator<Item = &'a ExactRational>>(iter: I) -> Self {
        iter.fold(ExactRational::zero(), |a, b| a + b)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum IntRepr {
    Small(i64),
    Big(String),
}

impl IntRepr {
    fn of(n: &BigInt) -> Self {
        n.to_i64()
            .map(IntRepr::Small)
            .unwrap_or_else(|| IntRepr::Big(n.to_string()))
    }

    fn value(self) -> Result<BigInt, String> {
        match self {
            IntRepr::Small(n) => Ok(n.into()),
            IntRepr::Big(s) => s.parse().map_err(|_| format!("bad integer {s:?}")),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct Pair {
    num: IntRepr,
    den: IntRepr,
}

impl Serialize for ExactRational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        Pair {
            num: IntRepr::of(self.numer()),
            den: IntRepr::of(self.denom()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExactRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let pair = Pair::deserialize(d)?;
        let num = pair.num.value().map_err(D::Error::custom)?;
        let den = pair.den.value().map_err(D::Error::custom)?;
        if den.is_zero() {
            return Err(D::Error::custom("zero denominator"));
        }
        Ok(ExactRational::from_big(num, den))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn normalizes() {
        let r = ExactRational::new(6, -4);
        assert_eq!(r.to_string(), "-3/2");
        assert_eq!(*r.denom(), BigInt::from(2));
        assert_eq!(ExactRational::new(10, 5).to_string(), "2");
        assert!(ExactRational::new(10, 5).is_integer());
    }

    #[test]
    fn parse_and_decimal() {
        let r: ExactRational = "5/12".parse().unwrap();
        assert_eq!(r, ExactRational::new(5, 12));
        assert_eq!(r.to_decimal(4), "0.4166");
        assert_eq!(ExactRational::new(-1, 3).to_decimal(2), "-0.33");
        assert_eq!(ExactRational::new(7, 1).to_decimal(0), "7");
        assert!("1/0".parse::<ExactRational>().is_err());
        assert!("x".parse::<ExactRational>().is_err());
    }

    #[test]
    fn serde_shape() {
        let r = ExactRational::new(-5, 12);
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(s, r#"{"num":-5,"den":12}"#);
        let big = ExactRational::from_big(BigInt::from(10).pow(30), BigInt::from(7));
        let s = serde_json::to_string(&big).unwrap();
        assert!(s.contains("\"1000000000000000000000000000000\""));
        let back: ExactRational = serde_json::from_str(&s).unwrap();
        assert_eq!(back, big);
        assert!(serde_json::from_str::<ExactRational>(r#"{"num":1,"den":0}"#).is_err());
    }

    proptest! {
        #[test]
        fn field_laws(a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000, d in 1i64..1000) {
            let x = ExactRational::new(a, b);
            let y = ExactRational::new(c, d);
            prop_assert_eq!(&x + &y, &y + &x);
            prop_assert_eq!(&(&x + &y) - &y, x.clone());
            if !y.is_zero() {
                prop_assert_eq!(&(&x * &y) / &y, x.clone());
            }
            let back: ExactRational = x.to_string().parse().unwrap();
            prop_assert_eq!(back, x.clone());
            let json = serde_json::to_string(&x).unwrap();
            prop_assert_eq!(serde_json::from_str::<ExactRational>(&json).unwrap(), x);
        }
    }
}
