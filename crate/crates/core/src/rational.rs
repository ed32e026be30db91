//! Exact rational time values.
//!
//! All slot and event arithmetic runs on `Ratio<i64>`. The textual form is
//! always `p/q` in lowest terms (including `q = 1`), so JSON documents
//! round-trip byte for byte.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = Ratio<i64>;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(v)
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(p, q)
}

/// Parses `p/q` or a bare integer `p`.
pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Rational(s.to_string());
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (
            p.trim().parse::<i64>().map_err(|_| bad())?,
            q.trim().parse::<i64>().map_err(|_| bad())?,
        ),
        None => (s.parse::<i64>().map_err(|_| bad())?, 1),
    };
    if q == 0 {
        return Err(bad());
    }
    Ok(Rational::new(p, q))
}

/// Canonical `p/q` text, always with a denominator.
pub fn format(v: &Rational) -> String {
    format!("{}/{}", v.numer(), v.denom())
}

/// Lossy, for plotting.
pub fn to_f64(v: &Rational) -> f64 {
    *v.numer() as f64 / *v.denom() as f64
}

/// Smallest integer `>= v`.
pub fn ceil(v: &Rational) -> i64 {
    Integer::div_ceil(v.numer(), v.denom())
}

/// `ceil(a / b)` for a non-negative integer `a` and positive rational `b`.
pub fn ceil_div(a: i64, b: &Rational) -> i64 {
    // a / (p/q) = a*q / p
    Integer::div_ceil(&(a * b.denom()), b.numer())
}

pub fn is_positive(v: &Rational) -> bool {
    v.is_positive()
}

pub fn at_least_one(v: &Rational) -> bool {
    *v >= Rational::one()
}

pub fn zero() -> Rational {
    Rational::zero()
}

/// Serde adapter storing a rational as its canonical `p/q` string.
pub mod serde_text {
    use super::Rational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::format(v))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        super::parse(&text).map_err(serde::de::Error::custom)
    }
}
