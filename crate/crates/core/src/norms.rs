//! Symbolic norms and seminorms on c00 with exact evaluation.
//!
//! A [`FunctionalSpec`] is a closed description built from the l1 and linf
//! norms, weighted and rescaled l1 sums, coordinate moduli, sums, pullbacks
//! along linear maps, and quotients by finite-dimensional subspaces. Every
//! constructor preserves the seminorm axioms, so every value of this type is
//! a seminorm; [`FunctionalSpec::is_norm_candidate`] tells which ones are
//! positive-definite by construction.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use crate::maps::LinearMapSpec;
use crate::quotient::{self, QuotientError, Subspace};
use crate::rational::Rational;
use crate::rule::{NotPositive, PositiveRule, Rule};
use crate::seq::SparseSeq;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpecError {
    #[error(transparent)]
    NotPositive(#[from] NotPositive),
    #[error(transparent)]
    Quotient(#[from] QuotientError),
    #[error("coordinate index must be >= 1")]
    ZeroCoordinate,
    #[error("`{0}` is not positive-definite by construction")]
    NotANorm(String),
}

/// Ambient norms for which distances to subspaces are linear programs.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PolyhedralNorm {
    L1,
    LInf,
    WeightedL1(PositiveRule),
}

impl PolyhedralNorm {
    pub fn evaluate(&self, x: &SparseSeq) -> Rational {
        match self {
            PolyhedralNorm::L1 => l1(x),
            PolyhedralNorm::LInf => linf(x),
            PolyhedralNorm::WeightedL1(w) => weighted_l1(w, x),
        }
    }
}

impl From<PolyhedralNorm> for FunctionalSpec {
    fn from(n: PolyhedralNorm) -> Self {
        match n {
            PolyhedralNorm::L1 => FunctionalSpec::L1,
            PolyhedralNorm::LInf => FunctionalSpec::LInf,
            PolyhedralNorm::WeightedL1(w) => FunctionalSpec::WeightedL1(w),
        }
    }
}

impl TryFrom<&FunctionalSpec> for PolyhedralNorm {
    type Error = QuotientError;
    fn try_from(spec: &FunctionalSpec) -> Result<Self, QuotientError> {
        match spec {
            FunctionalSpec::L1 => Ok(PolyhedralNorm::L1),
            FunctionalSpec::LInf => Ok(PolyhedralNorm::LInf),
            FunctionalSpec::WeightedL1(w) => Ok(PolyhedralNorm::WeightedL1(w.clone())),
            other => Err(QuotientError::UnsupportedNorm(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FunctionalSpec {
    /// `sum |x_i|`.
    L1,
    /// `max |x_i|`, and 0 on the zero sequence.
    LInf,
    /// `sum w(i) |x_i|`.
    WeightedL1(PositiveRule),
    /// `sum_{n not excluded} |x_n| / d(n)`: the l1 norm of the coordinates
    /// of `x` in the basis `{d(n) e_n}`, with the excluded basis vectors
    /// dropped from the sum.
    RescaledL1 {
        scales: PositiveRule,
        excluded: BTreeSet<usize>,
    },
    /// `|x_i|`.
    CoordinateAbs(usize),
    Sum(Box<FunctionalSpec>, Box<FunctionalSpec>),
    /// `inner(map(x))`.
    Pullback {
        inner: Box<FunctionalSpec>,
        map: LinearMapSpec,
    },
    /// `dist_ambient(x, subspace)`.
    Quotient {
        ambient: PolyhedralNorm,
        subspace: Subspace,
    },
}

impl FunctionalSpec {
    pub fn weighted(rule: Rule) -> Result<Self, SpecError> {
        Ok(FunctionalSpec::WeightedL1(PositiveRule::new(rule)?))
    }

    pub fn rescaled<I: IntoIterator<Item = usize>>(
        scales: Rule,
        excluded: I,
    ) -> Result<Self, SpecError> {
        Ok(FunctionalSpec::RescaledL1 {
            scales: PositiveRule::new(scales)?,
            excluded: excluded.into_iter().collect(),
        })
    }

    pub fn coordinate(i: usize) -> Result<Self, SpecError> {
        if i < 1 {
            return Err(SpecError::ZeroCoordinate);
        }
        Ok(FunctionalSpec::CoordinateAbs(i))
    }

    pub fn sum(a: FunctionalSpec, b: FunctionalSpec) -> Self {
        FunctionalSpec::Sum(Box::new(a), Box::new(b))
    }

    pub fn pullback(inner: FunctionalSpec, map: LinearMapSpec) -> Self {
        FunctionalSpec::Pullback {
            inner: Box::new(inner),
            map,
        }
    }

    /// Fails when `ambient` is not polyhedral or the basis is empty or
    /// dependent.
    pub fn quotient(ambient: &FunctionalSpec, basis: Vec<SparseSeq>) -> Result<Self, SpecError> {
        let ambient = PolyhedralNorm::try_from(ambient)?;
        let subspace = Subspace::new(basis)?;
        Ok(FunctionalSpec::Quotient { ambient, subspace })
    }

    pub fn evaluate(&self, x: &SparseSeq) -> Rational {
        match self {
            FunctionalSpec::L1 => l1(x),
            FunctionalSpec::LInf => linf(x),
            FunctionalSpec::WeightedL1(w) => weighted_l1(w, x),
            FunctionalSpec::RescaledL1 { scales, excluded } => {
                l1_excluding(&rescaled_coordinates(scales, x), excluded)
            }
            FunctionalSpec::CoordinateAbs(i) => x.coord(*i).abs(),
            FunctionalSpec::Sum(a, b) => a.evaluate(x) + b.evaluate(x),
            FunctionalSpec::Pullback { inner, map } => inner.evaluate(&map.apply(x)),
            FunctionalSpec::Quotient { ambient, subspace } => {
                quotient::polyhedral_distance(ambient, subspace, x).value
            }
        }
    }

    /// True iff the spec is positive-definite by construction on c00.
    pub fn is_norm_candidate(&self) -> bool {
        match self {
            FunctionalSpec::L1 | FunctionalSpec::LInf | FunctionalSpec::WeightedL1(_) => true,
            FunctionalSpec::RescaledL1 { excluded, .. } => excluded.is_empty(),
            FunctionalSpec::CoordinateAbs(_) => false,
            FunctionalSpec::Sum(a, b) => a.is_norm_candidate() || b.is_norm_candidate(),
            FunctionalSpec::Pullback { inner, map } => {
                inner.is_norm_candidate() && map.is_structurally_injective()
            }
            FunctionalSpec::Quotient { .. } => false,
        }
    }

    pub fn in_kernel(&self, x: &SparseSeq) -> bool {
        self.evaluate(x).is_zero()
    }

    pub fn parse(text: &str) -> Result<Self, crate::grammar::ParseError> {
        crate::grammar::parse_spec(text)
    }
}

fn l1(x: &SparseSeq) -> Rational {
    x.iter().map(|(_, v)| v.abs()).sum()
}

fn linf(x: &SparseSeq) -> Rational {
    x.iter()
        .map(|(_, v)| v.abs())
        .max()
        .unwrap_or_else(Rational::zero)
}

fn weighted_l1(w: &PositiveRule, x: &SparseSeq) -> Rational {
    x.iter().map(|(i, v)| w.value(i) * v.abs()).sum()
}

fn l1_excluding(x: &SparseSeq, excluded: &BTreeSet<usize>) -> Rational {
    x.iter()
        .filter(|(i, _)| !excluded.contains(i))
        .map(|(_, v)| v.abs())
        .sum()
}

/// Coordinates `alpha_n = x_n / d(n)` of `x` in the basis `{d(n) e_n}`.
pub fn rescaled_coordinates(scales: &PositiveRule, x: &SparseSeq) -> SparseSeq {
    x.map_entries(|i, v| v / scales.value(i))
}
