//! Exact rational scalars and their textual forms.
//!
//! Scalars are [`num_rational::BigRational`], which keeps the denominator
//! positive and the fraction reduced. The textual form is `p/q`, with `/q`
//! omitted when `q = 1`; this is the form used in JSON documents and in the
//! spec grammar.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serializer};

pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational `{text}`: {reason}")]
pub struct ParseRationalError {
    pub text: String,
    pub reason: &'static str,
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// `2^{-k}`.
pub fn pow2_neg(k: u64) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << k)
}

/// Integer power with a possibly negative exponent. `base` must be nonzero
/// when `exp < 0`.
pub fn pow(base: &Rational, exp: i64) -> Rational {
    let mut acc = Rational::one();
    let mut b = if exp < 0 { base.recip() } else { base.clone() };
    let mut e = exp.unsigned_abs();
    while e > 0 {
        if e & 1 == 1 {
            acc *= &b;
        }
        b = &b * &b;
        e >>= 1;
    }
    acc
}

pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let err = |reason| ParseRationalError {
        text: text.to_string(),
        reason,
    };
    let t = text.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (t, None),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| err("numerator is not an integer"))?;
    let den: BigInt = match den {
        Some(d) => d
            .parse()
            .map_err(|_| err("denominator is not an integer"))?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(err("zero denominator"));
    }
    Ok(Rational::new(num, den))
}

/// Short decimal rendering for human-readable columns. Not used for any check.
pub fn approx(r: &Rational) -> String {
    let v = r.to_f64().unwrap_or(f64::NAN);
    if v == 0.0 {
        "0".to_string()
    } else if v.abs() >= 1e-4 && v.abs() < 1e9 {
        let s = format!("{v:.6}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        s.to_string()
    } else {
        format!("{v:.6e}")
    }
}

/// `p/q (≈ decimal)`, or just `p` for integers.
pub fn display_with_approx(r: &Rational) -> String {
    if r.is_integer() {
        r.to_string()
    } else {
        format!("{} (≈ {})", r, approx(r))
    }
}

/// Serde adapter: a rational as its `p/q` string. Integers are also accepted
/// on input.
pub mod as_string {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        from_json_value(&v).map_err(serde::de::Error::custom)
    }

    pub(crate) fn from_json_value(v: &serde_json::Value) -> Result<Rational, String> {
        match v {
            serde_json::Value::String(s) => parse_rational(s).map_err(|e| e.to_string()),
            serde_json::Value::Number(n) => match n.as_i64() {
                Some(i) => Ok(int(i)),
                None => Err(format!(
                    "number {n} is not an integer; write rationals as \"p/q\""
                )),
            },
            other => Err(format!("expected a rational string, found {other}")),
        }
    }
}

/// Serde adapter for `Vec<Rational>`.
pub mod vec_as_string {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&r.to_string())?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let raw = Vec::<serde_json::Value>::deserialize(d)?;
        raw.iter()
            .map(|v| as_string::from_json_value(v).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Serde adapter for a dense matrix of rationals.
pub mod matrix_as_string {
    use super::*;

    pub fn serialize<S: Serializer>(m: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = m
            .iter()
            .map(|row| row.iter().map(|r| r.to_string()).collect())
            .collect();
        serde::Serialize::serialize(&rows, s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Rational>>, D::Error> {
        let raw = Vec::<Vec<serde_json::Value>>::deserialize(d)?;
        raw.iter()
            .map(|row| {
                row.iter()
                    .map(|v| as_string::from_json_value(v).map_err(serde::de::Error::custom))
                    .collect()
            })
            .collect()
    }
}
