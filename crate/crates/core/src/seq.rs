//! Finitely supported rational sequences, indexed from 1.
//!
//! Invariants:
//! - every stored index is >= 1
//! - no stored value is zero
//!
//! Every constructor and operation maintains both, so equality of
//! `SparseSeq` values is equality of sequences.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::de::{self, MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeqError {
    #[error("sequence indices start at 1, got {0}")]
    ZeroIndex(usize),
    #[error("index {0} given more than once")]
    DuplicateIndex(usize),
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct SparseSeq {
    entries: BTreeMap<usize, Rational>,
}

impl SparseSeq {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Builds a sequence from `(index, value)` pairs. Zero values are dropped.
    pub fn from_pairs<I>(pairs: I) -> Result<Self, SeqError>
    where
        I: IntoIterator<Item = (usize, Rational)>,
    {
        let mut seen = std::collections::BTreeSet::new();
        let mut entries = BTreeMap::new();
        for (i, v) in pairs {
            if i < 1 {
                return Err(SeqError::ZeroIndex(i));
            }
            if !seen.insert(i) {
                return Err(SeqError::DuplicateIndex(i));
            }
            if !v.is_zero() {
                entries.insert(i, v);
            }
        }
        Ok(Self { entries })
    }

    /// `(x_1, x_2, ..., x_k, 0, ...)` from a dense prefix.
    pub fn from_dense<I: IntoIterator<Item = Rational>>(values: I) -> Self {
        let entries = values
            .into_iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, v)| (i + 1, v))
            .collect();
        Self { entries }
    }

    /// The canonical basis vector `e_n`.
    pub fn basis(n: usize) -> Result<Self, SeqError> {
        if n < 1 {
            return Err(SeqError::ZeroIndex(n));
        }
        let mut entries = BTreeMap::new();
        entries.insert(n, Rational::one());
        Ok(Self { entries })
    }

    pub fn coord(&self, i: usize) -> Rational {
        self.entries.get(&i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.keys().copied()
    }

    /// Largest index in the support, or 0 for the zero sequence.
    pub fn max_index(&self) -> usize {
        self.entries.keys().next_back().copied().unwrap_or(0)
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// Nonzero entries in increasing index order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &Rational)> + '_ {
        self.entries.iter().map(|(&i, v)| (i, v))
    }

    pub fn scale(&self, a: &Rational) -> Self {
        if a.is_zero() {
            return Self::zero();
        }
        let entries = self.entries.iter().map(|(&i, v)| (i, v * a)).collect();
        Self { entries }
    }

    /// `L(x) = (x_2, x_3, ...)`.
    pub fn shift_left(&self) -> Self {
        let entries = self
            .entries
            .iter()
            .filter(|(&i, _)| i > 1)
            .map(|(&i, v)| (i - 1, v.clone()))
            .collect();
        Self { entries }
    }

    /// `R(x) = (0, x_1, x_2, ...)`.
    pub fn shift_right(&self) -> Self {
        let entries = self
            .entries
            .iter()
            .map(|(&i, v)| (i + 1, v.clone()))
            .collect();
        Self { entries }
    }

    /// `T(x) = (x_1, 0, 0, ...)`.
    pub fn truncate_first(&self) -> Self {
        let entries = self
            .entries
            .get(&1)
            .map(|v| (1, v.clone()))
            .into_iter()
            .collect();
        Self { entries }
    }

    /// Adds `a * other` into `self`.
    pub fn add_scaled(&mut self, a: &Rational, other: &SparseSeq) {
        if a.is_zero() {
            return;
        }
        for (&i, v) in &other.entries {
            let slot = self.entries.entry(i).or_insert_with(Rational::zero);
            *slot += a * v;
            if slot.is_zero() {
                self.entries.remove(&i);
            }
        }
    }

    /// Sequence with each entry replaced by `f(index, value)`; zeros dropped.
    pub fn map_entries<F>(&self, mut f: F) -> Self
    where
        F: FnMut(usize, &Rational) -> Rational,
    {
        let entries = self
            .entries
            .iter()
            .map(|(&i, v)| (i, f(i, v)))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        Self { entries }
    }

    /// Parses the grammar form, e.g. `e1+e2`, `3*e1-1/2*e4`, `(3,4,5)`, `0`.
    pub fn parse(text: &str) -> Result<Self, crate::grammar::ParseError> {
        crate::grammar::parse_seq(text)
    }
}

impl Add for &SparseSeq {
    type Output = SparseSeq;
    fn add(self, rhs: &SparseSeq) -> SparseSeq {
        let mut out = self.clone();
        out.add_scaled(&Rational::one(), rhs);
        out
    }
}

impl Sub for &SparseSeq {
    type Output = SparseSeq;
    fn sub(self, rhs: &SparseSeq) -> SparseSeq {
        let mut out = self.clone();
        out.add_scaled(&-Rational::one(), rhs);
        out
    }
}

impl Neg for &SparseSeq {
    type Output = SparseSeq;
    fn neg(self) -> SparseSeq {
        self.scale(&-Rational::one())
    }
}

impl Add for SparseSeq {
    type Output = SparseSeq;
    fn add(self, rhs: SparseSeq) -> SparseSeq {
        &self + &rhs
    }
}

impl Sub for SparseSeq {
    type Output = SparseSeq;
    fn sub(self, rhs: SparseSeq) -> SparseSeq {
        &self - &rhs
    }
}

/// Grammar form: `e1-1/2*e3`, `0` for the zero sequence.
impl fmt::Display for SparseSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return f.write_str("0");
        }
        for (k, (i, v)) in self.entries.iter().enumerate() {
            let mag = v.abs();
            if v.is_negative() {
                f.write_str("-")?;
            } else if k > 0 {
                f.write_str("+")?;
            }
            if mag.is_one() {
                write!(f, "e{i}")?;
            } else {
                write!(f, "{mag}*e{i}")?;
            }
        }
        Ok(())
    }
}

/// JSON object `{"index": "p/q", ...}` with decimal-string indices.
impl Serialize for SparseSeq {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.entries.len()))?;
        for (i, v) in &self.entries {
            map.serialize_entry(&i.to_string(), &v.to_string())?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for SparseSeq {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct SeqVisitor;

        impl<'de> Visitor<'de> for SeqVisitor {
            type Value = SparseSeq;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an object mapping decimal indices to \"p/q\" strings")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> Result<SparseSeq, A::Error> {
                let mut pairs = Vec::new();
                while let Some((k, v)) = access.next_entry::<String, serde_json::Value>()? {
                    let idx: usize = k.parse().map_err(|_| {
                        de::Error::custom(format!("index `{k}` is not a decimal integer"))
                    })?;
                    let val =
                        rational::as_string::from_json_value(&v).map_err(de::Error::custom)?;
                    pairs.push((idx, val));
                }
                SparseSeq::from_pairs(pairs).map_err(de::Error::custom)
            }
        }

        d.deserialize_map(SeqVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn seq(vals: &[i64]) -> SparseSeq {
        SparseSeq::from_dense(vals.iter().map(|&v| int(v)))
    }

    #[test]
    fn make_seq_drops_zeros() {
        let x = SparseSeq::from_pairs([(1, frac(1, 2)), (2, int(0)), (3, frac(1, 4))]).unwrap();
        assert_eq!(x.support().collect::<Vec<_>>(), vec![1, 3]);
        assert!(SparseSeq::from_pairs([]).unwrap().is_zero());
        let e5 = SparseSeq::from_pairs([(5, int(3))]).unwrap();
        assert_eq!(e5, SparseSeq::basis(5).unwrap().scale(&int(3)));
    }

    #[test]
    fn make_seq_rejects_bad_indices() {
        assert_eq!(
            SparseSeq::from_pairs([(0, int(1))]),
            Err(SeqError::ZeroIndex(0))
        );
        assert_eq!(
            SparseSeq::from_pairs([(2, int(1)), (2, int(0))]),
            Err(SeqError::DuplicateIndex(2))
        );
        assert!(SparseSeq::basis(0).is_err());
    }

    #[test]
    fn vector_space_basics() {
        let e1 = SparseSeq::basis(1).unwrap();
        assert_eq!(&e1 + &e1, e1.scale(&int(2)));
        assert!(seq(&[3, 4, 5]).scale(&int(0)).is_zero());
        assert_eq!(SparseSeq::basis(3).unwrap().coord(7), int(0));
        assert!((&seq(&[1, 2]) - &seq(&[1, 2])).is_zero());
    }

    #[test]
    fn shifts_and_truncation() {
        let e1 = SparseSeq::basis(1).unwrap();
        let e2 = SparseSeq::basis(2).unwrap();
        assert!(e1.shift_left().is_zero());
        assert_eq!(e2.shift_left(), e1);
        assert_eq!(seq(&[3, 4, 5]).shift_left(), seq(&[4, 5]));
        assert_eq!(e1.shift_right(), e2);
        assert!(SparseSeq::zero().shift_right().is_zero());
        assert_eq!(seq(&[3, 4, 5]).truncate_first(), seq(&[3]));
        assert!(e2.truncate_first().is_zero());
        let g5 = SparseSeq::basis(5).unwrap().scale(&frac(1, 5));
        assert_eq!(g5.coord(5), frac(1, 5));
    }

    #[test]
    fn display_and_json() {
        let x = SparseSeq::from_pairs([(1, int(1)), (3, frac(-1, 2)), (4, int(3))]).unwrap();
        assert_eq!(x.to_string(), "e1-1/2*e3+3*e4");
        assert_eq!(SparseSeq::zero().to_string(), "0");
        let json = serde_json::to_string(&x).unwrap();
        assert_eq!(json, r#"{"1":"1","3":"-1/2","4":"3"}"#);
        let back: SparseSeq = serde_json::from_str(&json).unwrap();
        assert_eq!(back, x);
        assert!(serde_json::from_str::<SparseSeq>(r#"{"0":"1"}"#).is_err());
        assert!(serde_json::from_str::<SparseSeq>(r#"{"a":"1"}"#).is_err());
    }
}
