//! Arbitrary-precision rationals.
//!
//! `Rat` is `num_rational::BigRational`: always reduced, denominator positive.
//! Its `Display` already prints `p/q`, or `p` when `q = 1`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rat = num_rational::BigRational;

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn frac(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

pub fn zero() -> Rat {
    Rat::zero()
}

pub fn one() -> Rat {
    Rat::one()
}

/// Parses `"p"` or `"p/q"` (whitespace tolerated around the parts).
pub fn parse(s: &str) -> Result<Rat> {
    let bad = || Error::ParseRational(s.to_string());
    let t = s.trim();
    let (p, q) = match t.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (t, "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(Rat::new(p, q))
}

pub fn to_string(r: &Rat) -> String {
    r.to_string()
}

/// Returns `Some(n)` when `r` is an integer that fits in `i64`.
pub fn to_i64(r: &Rat) -> Option<i64> {
    if !r.is_integer() {
        return None;
    }
    i64::try_from(r.to_integer()).ok()
}

pub fn pow(r: &Rat, e: u32) -> Rat {
    let mut acc = one();
    for _ in 0..e {
        acc *= r;
    }
    acc
}

/// Shifted factorial `(a)_m = a (a+1) ... (a+m-1)`, `(a)_0 = 1`.
pub fn pochhammer(a: &Rat, m: u32) -> Rat {
    let mut acc = one();
    let mut x = a.clone();
    for _ in 0..m {
        acc *= &x;
        x += one();
    }
    acc
}

pub fn factorial(m: u32) -> Rat {
    pochhammer(&one(), m)
}

pub fn binomial(n: u32, r: u32) -> Rat {
    if r > n {
        return zero();
    }
    factorial(n) / (factorial(r) * factorial(n - r))
}

pub fn is_negative(r: &Rat) -> bool {
    r.is_negative()
}

/// Serde adapter storing a rational as its canonical string.
pub mod serde_str {
    use super::Rat;
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        super::parse(&s).map_err(D::Error::custom)
    }
}

/// Serde adapter for `Vec<Rat>`.
pub mod serde_vec {
    use super::Rat;
    use serde::{de::Error as _, ser::SerializeSeq, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rat], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&r.to_string())?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rat>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| super::parse(s).map_err(D::Error::custom))
            .collect()
    }
}
