//! A small algebra of linear operators on finitely supported sequences.

use std::collections::{BTreeMap, BTreeSet};

use crate::linalg;
use crate::rational::Rational;
use crate::rule::Rule;
use crate::seq::SparseSeq;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LinearMapSpec {
    Identity,
    ShiftLeft,
    ShiftRight,
    TruncateFirst,
    /// `x_i -> rule(i) * x_i`.
    Diagonal(Rule),
    /// `e_i -> images[i]` for listed `i`, `e_i -> e_i` otherwise.
    FiniteTable(BTreeMap<usize, SparseSeq>),
    /// `outer(inner(x))`.
    Compose {
        outer: Box<LinearMapSpec>,
        inner: Box<LinearMapSpec>,
    },
    SumMap {
        left: Box<LinearMapSpec>,
        right: Box<LinearMapSpec>,
    },
}

impl LinearMapSpec {
    pub fn compose(outer: LinearMapSpec, inner: LinearMapSpec) -> Self {
        LinearMapSpec::Compose {
            outer: Box::new(outer),
            inner: Box::new(inner),
        }
    }

    pub fn sum(left: LinearMapSpec, right: LinearMapSpec) -> Self {
        LinearMapSpec::SumMap {
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    /// `F(x) = R(f(L(x))) + T(x)`: applies `f` to the tail and keeps the
    /// first entry in place.
    pub fn first_entry_lift(f: LinearMapSpec) -> Self {
        Self::sum(
            Self::compose(
                LinearMapSpec::ShiftRight,
                Self::compose(f, LinearMapSpec::ShiftLeft),
            ),
            LinearMapSpec::TruncateFirst,
        )
    }

    /// Recovers `f` when `self` was built by [`Self::first_entry_lift`].
    pub fn as_first_entry_lift(&self) -> Option<&LinearMapSpec> {
        let LinearMapSpec::SumMap { left, right } = self else {
            return None;
        };
        if **right != LinearMapSpec::TruncateFirst {
            return None;
        }
        let LinearMapSpec::Compose { outer, inner } = &**left else {
            return None;
        };
        if **outer != LinearMapSpec::ShiftRight {
            return None;
        }
        match &**inner {
            LinearMapSpec::Compose { outer: f, inner: l } if **l == LinearMapSpec::ShiftLeft => {
                Some(f)
            }
            _ => None,
        }
    }

    pub fn apply(&self, x: &SparseSeq) -> SparseSeq {
        match self {
            LinearMapSpec::Identity => x.clone(),
            LinearMapSpec::ShiftLeft => x.shift_left(),
            LinearMapSpec::ShiftRight => x.shift_right(),
            LinearMapSpec::TruncateFirst => x.truncate_first(),
            LinearMapSpec::Diagonal(rule) => x.map_entries(|i, v| v * rule.value(i)),
            LinearMapSpec::FiniteTable(images) => {
                let mut out = SparseSeq::zero();
                for (i, v) in x.iter() {
                    match images.get(&i) {
                        Some(img) => out.add_scaled(v, img),
                        None => {
                            out.add_scaled(v, &SparseSeq::basis(i).expect("support index >= 1"))
                        }
                    }
                }
                out
            }
            LinearMapSpec::Compose { outer, inner } => outer.apply(&inner.apply(x)),
            LinearMapSpec::SumMap { left, right } => &left.apply(x) + &right.apply(x),
        }
    }

    /// Sufficient condition for injectivity on c00, decided from the
    /// structure alone. `false` means "not established", except for the
    /// shift-left and truncation leaves which are never injective.
    pub fn is_structurally_injective(&self) -> bool {
        match self {
            LinearMapSpec::Identity | LinearMapSpec::ShiftRight => true,
            LinearMapSpec::ShiftLeft | LinearMapSpec::TruncateFirst => false,
            LinearMapSpec::Diagonal(rule) => rule.is_nowhere_zero(),
            LinearMapSpec::FiniteTable(images) => table_is_injective(images),
            LinearMapSpec::Compose { outer, inner } => {
                outer.is_structurally_injective() && inner.is_structurally_injective()
            }
            // F(x) = 0 forces x_1 = 0 and f(L x) = 0, so F is injective iff f is.
            LinearMapSpec::SumMap { .. } => self
                .as_first_entry_lift()
                .is_some_and(LinearMapSpec::is_structurally_injective),
        }
    }
}

/// A table map is the identity off the key set `K`, so `x` is in its kernel
/// iff the restriction of `sum_{i in K} x_i images[i]` to `K` vanishes.
fn table_is_injective(images: &BTreeMap<usize, SparseSeq>) -> bool {
    let keys: BTreeSet<usize> = images.keys().copied().collect();
    let m: Vec<Vec<Rational>> = keys
        .iter()
        .map(|&row| images.values().map(|img| img.coord(row)).collect())
        .collect();
    linalg::is_nonsingular(&m)
}
