//! Distance to a finite-dimensional subspace under polyhedral norms.
//!
//! `dist_N(u, V) = min_{v in V} N(u - v)` is computed as an exact linear
//! program in the coefficients of `v`. The quotient seminorm `x -> dist_N(x, V)`
//! vanishes exactly on `V`; no complement of `V` is ever built, since the
//! distance is invariant under translation by elements of `V`.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use crate::linalg;
use crate::lp::{self, LpOutcome, LpProblem, RowKind, VarBound};
use crate::norms::{FunctionalSpec, PolyhedralNorm};
use crate::rational::Rational;
use crate::seq::SparseSeq;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QuotientError {
    #[error("subspace basis is empty")]
    EmptyBasis,
    #[error("subspace basis is linearly dependent (rank {rank} < {len})")]
    DependentBasis { rank: usize, len: usize },
    #[error("unsupported ambient norm `{0}`: only l1, linf and weighted l1 are polyhedral")]
    UnsupportedNorm(String),
}

/// Span of a nonempty, linearly independent list of sequences.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    basis: Vec<SparseSeq>,
    ambient_support: BTreeSet<usize>,
}

impl Subspace {
    pub fn new(basis: Vec<SparseSeq>) -> Result<Self, QuotientError> {
        if basis.is_empty() {
            return Err(QuotientError::EmptyBasis);
        }
        let rank = linalg::rank(&basis);
        if rank < basis.len() {
            return Err(QuotientError::DependentBasis {
                rank,
                len: basis.len(),
            });
        }
        let ambient_support = basis.iter().flat_map(|b| b.support()).collect();
        Ok(Self {
            basis,
            ambient_support,
        })
    }

    pub fn basis(&self) -> &[SparseSeq] {
        &self.basis
    }

    /// Union of the basis supports; every element of the span lives here.
    pub fn ambient_support(&self) -> &BTreeSet<usize> {
        &self.ambient_support
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// The unique coefficients of `x` in the basis, or `None` if `x` is not
    /// in the span.
    pub fn membership(&self, x: &SparseSeq) -> Option<Vec<Rational>> {
        if x.support().any(|i| !self.ambient_support.contains(&i)) {
            return None;
        }
        linalg::span_coefficients(&self.basis, x)
    }

    pub fn contains(&self, x: &SparseSeq) -> bool {
        self.membership(x).is_some()
    }

    pub fn combine(&self, coeffs: &[Rational]) -> SparseSeq {
        let mut out = SparseSeq::zero();
        for (c, b) in coeffs.iter().zip(&self.basis) {
            out.add_scaled(c, b);
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceResult {
    pub value: Rational,
    /// A nearest point `v*` of the subspace; `N(u - v*) = value`.
    pub minimizer: SparseSeq,
    pub coefficients: Vec<Rational>,
    /// The program that was solved. Its optimum differs from `value` by a
    /// constant: the norm's value at `c = 0` on the support, plus whatever
    /// lies outside the subspace support.
    pub problem: LpProblem,
    pub certificate: LpOutcome,
}

impl DistanceResult {
    pub fn certificate_verifies(&self) -> bool {
        lp::verify_certificate(&self.problem, &self.certificate).unwrap_or(false)
    }

    /// Primal and dual objective values of the solved program.
    pub fn lp_objectives(&self) -> (Rational, Rational) {
        match &self.certificate {
            LpOutcome::Optimal { primal, dual, .. } => (
                self.problem.objective_at(primal),
                self.problem.dual_objective_at(dual),
            ),
            _ => (Rational::zero(), Rational::zero()),
        }
    }
}

pub fn membership(v: &Subspace, x: &SparseSeq) -> Option<Vec<Rational>> {
    v.membership(x)
}

pub fn distance(
    norm: &FunctionalSpec,
    v: &Subspace,
    u: &SparseSeq,
) -> Result<DistanceResult, QuotientError> {
    let norm = PolyhedralNorm::try_from(norm)?;
    Ok(polyhedral_distance(&norm, v, u))
}

pub fn quotient_eval(
    norm: &FunctionalSpec,
    v: &Subspace,
    x: &SparseSeq,
) -> Result<Rational, QuotientError> {
    distance(norm, v, x).map(|d| d.value)
}

/// Only coordinates in the subspace support depend on the coefficients `c`.
/// The rest contribute `sum w_i |u_i|` (l1) or a floor `t >= max |u_i|` (linf).
///
/// Each epigraph variable is written as its value at `c = 0` plus a free
/// shift `s`, so every row reads `-s -/+ (V c)_i <= t0 -/+ u_i` with a
/// nonnegative right-hand side and the slack basis is feasible from the start.
pub fn polyhedral_distance(norm: &PolyhedralNorm, v: &Subspace, u: &SparseSeq) -> DistanceResult {
    let k = v.dim();
    let coords: Vec<usize> = v.ambient_support.iter().copied().collect();
    let outside = u.iter().filter(|(i, _)| !v.ambient_support.contains(i));
    let one = || Rational::from_integer(1.into());

    let mut problem = LpProblem {
        objective: vec![Rational::zero(); k],
        constraint_matrix: Vec::new(),
        rhs: Vec::new(),
        row_kinds: Vec::new(),
        variable_bounds: vec![VarBound::Free; k],
    };
    let mut offset = Rational::zero();

    // Rows -s -/+ (V c)_i <= t0 -/+ u_i, with the shift s in column `s_col`.
    let push_residual_rows = |problem: &mut LpProblem, i: usize, s_col: usize, t0: &Rational| {
        let n = problem.objective.len();
        for sign in [1i64, -1] {
            let s = Rational::from_integer(sign.into());
            let mut row = vec![Rational::zero(); n];
            for (j, b) in v.basis.iter().enumerate() {
                row[j] = -(b.coord(i) * &s);
            }
            row[s_col] = -one();
            problem.constraint_matrix.push(row);
            problem.rhs.push(t0 - u.coord(i) * &s);
            problem.row_kinds.push(RowKind::Le);
        }
    };

    match norm {
        PolyhedralNorm::L1 | PolyhedralNorm::WeightedL1(_) => {
            let weight = |i: usize| match norm {
                PolyhedralNorm::WeightedL1(w) => w.value(i),
                _ => one(),
            };
            for (i, x) in outside {
                offset += weight(i) * x.abs();
            }
            for &i in &coords {
                let w = weight(i);
                offset += &w * u.coord(i).abs();
                problem.objective.push(w);
                problem.variable_bounds.push(VarBound::Free);
            }
            for (slot, &i) in coords.iter().enumerate() {
                push_residual_rows(&mut problem, i, k + slot, &u.coord(i).abs());
            }
        }
        PolyhedralNorm::LInf => {
            let floor = outside
                .map(|(_, x)| x.abs())
                .max()
                .unwrap_or_else(Rational::zero);
            let t0 = coords
                .iter()
                .map(|&i| u.coord(i).abs())
                .fold(floor.clone(), Rational::max);
            offset += &t0;
            problem.objective.push(one());
            problem.variable_bounds.push(VarBound::Free);
            for &i in &coords {
                push_residual_rows(&mut problem, i, k, &t0);
            }
            if floor.is_positive() {
                let mut row = vec![Rational::zero(); k + 1];
                row[k] = -one();
                problem.constraint_matrix.push(row);
                problem.rhs.push(&t0 - floor);
                problem.row_kinds.push(RowKind::Le);
            }
        }
    }

    let certificate = lp::solve(&problem).expect("distance program is well formed");
    let LpOutcome::Optimal { value, primal, .. } = &certificate else {
        unreachable!("distance program is feasible and bounded below");
    };
    let coefficients = primal[..k].to_vec();
    let minimizer = v.combine(&coefficients);
    let value = value + offset;
    debug_assert_eq!(
        norm.evaluate(&(u - &minimizer)),
        value,
        "minimizer must attain the distance"
    );
    DistanceResult {
        value,
        minimizer,
        coefficients,
        problem,
        certificate,
    }
}
