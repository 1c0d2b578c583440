//! Exact rational linear programming.
//!
//! Two-phase primal simplex on a dense tableau with Bland's rule for both
//! the entering and the leaving variable, so every solve terminates. Free
//! variables are split into a difference of nonnegative columns. Optimal
//! outcomes carry a dual vector that certifies optimality exactly.
//!
//! Problem form: minimize `c^T x` subject to `A_i x (<=|=|>=) b_i` and
//! per-variable bounds `x_j >= 0` or free.
//!
//! Dual sign convention: `y_i <= 0` on `<=` rows, `y_i >= 0` on `>=` rows,
//! free on `=` rows; reduced costs `c_j - A_j^T y` are `>= 0` for
//! nonnegative variables and `= 0` for free ones; `b^T y = c^T x`.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{self, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RowKind {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = ">=")]
    Ge,
}

impl RowKind {
    fn flipped(self) -> Self {
        match self {
            RowKind::Le => RowKind::Ge,
            RowKind::Eq => RowKind::Eq,
            RowKind::Ge => RowKind::Le,
        }
    }

    pub fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            RowKind::Le => lhs <= rhs,
            RowKind::Eq => lhs == rhs,
            RowKind::Ge => lhs >= rhs,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VarBound {
    Free,
    #[serde(alias = "nonneg")]
    Nonnegative,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LpProblem {
    #[serde(with = "rational::vec_as_string")]
    pub objective: Vec<Rational>,
    #[serde(with = "rational::matrix_as_string")]
    pub constraint_matrix: Vec<Vec<Rational>>,
    #[serde(with = "rational::vec_as_string")]
    pub rhs: Vec<Rational>,
    pub row_kinds: Vec<RowKind>,
    pub variable_bounds: Vec<VarBound>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum LpOutcome {
    Optimal {
        #[serde(with = "rational::as_string")]
        value: Rational,
        #[serde(with = "rational::vec_as_string")]
        primal: Vec<Rational>,
        #[serde(with = "rational::vec_as_string")]
        dual: Vec<Rational>,
    },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }

    pub fn primal(&self) -> Option<&[Rational]> {
        match self {
            LpOutcome::Optimal { primal, .. } => Some(primal),
            _ => None,
        }
    }

    pub fn dual(&self) -> Option<&[Rational]> {
        match self {
            LpOutcome::Optimal { dual, .. } => Some(dual),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LpError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("certificate check needs an optimal outcome")]
    NotOptimal,
}

impl LpProblem {
    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rhs.len()
    }

    pub fn validate(&self) -> Result<(), LpError> {
        let n = self.objective.len();
        let m = self.rhs.len();
        if self.variable_bounds.len() != n {
            return Err(LpError::DimensionMismatch(format!(
                "{} variable bounds for {n} objective coefficients",
                self.variable_bounds.len()
            )));
        }
        if self.constraint_matrix.len() != m || self.row_kinds.len() != m {
            return Err(LpError::DimensionMismatch(format!(
                "{} matrix rows and {} row kinds for {m} right-hand sides",
                self.constraint_matrix.len(),
                self.row_kinds.len()
            )));
        }
        if let Some((i, row)) = self
            .constraint_matrix
            .iter()
            .enumerate()
            .find(|(_, row)| row.len() != n)
        {
            return Err(LpError::DimensionMismatch(format!(
                "row {i} has {} entries, expected {n}",
                row.len()
            )));
        }
        Ok(())
    }

    pub fn objective_at(&self, x: &[Rational]) -> Rational {
        dot(&self.objective, x)
    }

    /// `b^T y`.
    pub fn dual_objective_at(&self, y: &[Rational]) -> Rational {
        dot(&self.rhs, y)
    }
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (u, v)| {
        if u.is_zero() || v.is_zero() {
            acc
        } else {
            acc + u * v
        }
    })
}

/// Where a standard-form column came from.
#[derive(Debug, Clone, Copy)]
enum Column {
    /// `sign * x_var`, sign is +1 or -1.
    Structural {
        var: usize,
        negated: bool,
    },
    Slack,
    Artificial,
}

struct Tableau {
    /// `m` rows of `ncols + 1` entries; the last entry is the right-hand side.
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    ncols: usize,
}

struct Unbounded;

impl Tableau {
    /// Reduced-cost row for `cost`; the last entry is minus the objective.
    fn reduced_costs(&self, cost: &[Rational]) -> Vec<Rational> {
        let mut d: Vec<Rational> = cost.to_vec();
        d.push(Rational::zero());
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (dj, a) in d.iter_mut().zip(row) {
                if !a.is_zero() {
                    *dj -= cb * a;
                }
            }
        }
        d
    }

    fn pivot(&mut self, r: usize, c: usize, d: &mut [Rational]) {
        let inv = self.rows[r][c].recip();
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let pivot_row = std::mem::take(&mut self.rows[r]);
        let nonzero: Vec<usize> = (0..pivot_row.len())
            .filter(|&j| !pivot_row[j].is_zero())
            .collect();
        let eliminate = |row: &mut [Rational]| {
            if row[c].is_zero() {
                return;
            }
            let factor = row[c].clone();
            for &j in &nonzero {
                row[j] -= &factor * &pivot_row[j];
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        eliminate(d);
        self.rows[r] = pivot_row;
        self.basis[r] = c;
    }

    /// Bland's rule simplex on the reduced-cost row `d`. Only columns below
    /// `enter_limit` may enter the basis.
    fn optimize(&mut self, d: &mut [Rational], enter_limit: usize) -> Result<(), Unbounded> {
        let rhs = self.ncols;
        loop {
            let Some(c) = (0..enter_limit).find(|&j| d[j].is_negative()) else {
                return Ok(());
            };
            let mut leave: Option<(usize, Rational)> = None;
            for (r, row) in self.rows.iter().enumerate() {
                if !row[c].is_positive() {
                    continue;
                }
                let ratio = &row[rhs] / &row[c];
                let better = match &leave {
                    None => true,
                    Some((br, best)) => {
                        ratio < *best || (ratio == *best && self.basis[r] < self.basis[*br])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            let Some((r, _)) = leave else {
                return Err(Unbounded);
            };
            self.pivot(r, c, d);
        }
    }
}

/// Solves `p` exactly. Deterministic: the same problem always yields the
/// same outcome, including the same optimal vertex.
pub fn solve(p: &LpProblem) -> Result<LpOutcome, LpError> {
    p.validate()?;
    let n = p.num_vars();
    let m = p.num_rows();

    let mut columns: Vec<Column> = Vec::new();
    for (j, bound) in p.variable_bounds.iter().enumerate() {
        columns.push(Column::Structural {
            var: j,
            negated: false,
        });
        if *bound == VarBound::Free {
            columns.push(Column::Structural {
                var: j,
                negated: true,
            });
        }
    }
    let n_struct = columns.len();

    // Normalize to nonnegative right-hand sides.
    let mut flipped = vec![false; m];
    let mut kinds = p.row_kinds.clone();
    let mut rhs = p.rhs.clone();
    for i in 0..m {
        if rhs[i].is_negative() {
            flipped[i] = true;
            kinds[i] = kinds[i].flipped();
            rhs[i] = -rhs[i].clone();
        }
    }

    // Slack / surplus columns, then artificials.
    let mut slack_of_row: Vec<Option<usize>> = vec![None; m];
    for (i, kind) in kinds.iter().enumerate() {
        if *kind != RowKind::Eq {
            slack_of_row[i] = Some(columns.len());
            columns.push(Column::Slack);
        }
    }
    let n_real = columns.len();
    let mut artificial_of_row: Vec<Option<usize>> = vec![None; m];
    for (i, kind) in kinds.iter().enumerate() {
        if *kind != RowKind::Le {
            artificial_of_row[i] = Some(columns.len());
            columns.push(Column::Artificial);
        }
    }
    let ncols = columns.len();

    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    for i in 0..m {
        let sign = if flipped[i] { -1 } else { 1 };
        let mut row = vec![Rational::zero(); ncols + 1];
        for (k, col) in columns[..n_struct].iter().enumerate() {
            if let Column::Structural { var, negated } = *col {
                let a = &p.constraint_matrix[i][var];
                if !a.is_zero() {
                    let s = if negated { -sign } else { sign };
                    row[k] = a * Rational::from_integer(s.into());
                }
            }
        }
        if let Some(s) = slack_of_row[i] {
            row[s] = match kinds[i] {
                RowKind::Le => rational::int(1),
                _ => rational::int(-1),
            };
        }
        if let Some(a) = artificial_of_row[i] {
            row[a] = rational::int(1);
            basis.push(a);
        } else {
            basis.push(slack_of_row[i].expect("<= row has a slack"));
        }
        row[ncols] = rhs[i].clone();
        rows.push(row);
    }
    let mut tab = Tableau { rows, basis, ncols };

    // Phase 1: drive the artificials to zero.
    if n_real < ncols {
        let cost: Vec<Rational> = columns
            .iter()
            .map(|c| match c {
                Column::Artificial => rational::int(1),
                _ => Rational::zero(),
            })
            .collect();
        let mut d = tab.reduced_costs(&cost);
        if tab.optimize(&mut d, ncols).is_err() {
            unreachable!("phase 1 objective is bounded below by zero");
        }
        if !d[ncols].is_zero() {
            return Ok(LpOutcome::Infeasible);
        }
        // Pivot zero-level artificials out where a real column allows it.
        // Rows where none does are redundant; their artificial stays basic
        // at zero and never leaves, since every real column is zero there.
        for r in 0..m {
            if tab.basis[r] < n_real {
                continue;
            }
            if let Some(c) = (0..n_real).find(|&j| !tab.rows[r][j].is_zero()) {
                tab.pivot(r, c, &mut d);
            }
        }
    }

    // Phase 2.
    let cost: Vec<Rational> = columns
        .iter()
        .map(|c| match *c {
            Column::Structural { var, negated } => {
                if negated {
                    -p.objective[var].clone()
                } else {
                    p.objective[var].clone()
                }
            }
            _ => Rational::zero(),
        })
        .collect();
    let mut d = tab.reduced_costs(&cost);
    if tab.optimize(&mut d, n_real).is_err() {
        return Ok(LpOutcome::Unbounded);
    }

    let mut std_values = vec![Rational::zero(); ncols];
    for (row, &b) in tab.rows.iter().zip(&tab.basis) {
        std_values[b] = row[ncols].clone();
    }
    let mut primal = vec![Rational::zero(); n];
    for (k, col) in columns[..n_struct].iter().enumerate() {
        if let Column::Structural { var, negated } = *col {
            if negated {
                primal[var] -= &std_values[k];
            } else {
                primal[var] += &std_values[k];
            }
        }
    }

    // y^T = c_B^T B^{-1}; column i of B^{-1} sits under row i's initial
    // basic column (its slack or artificial).
    let dual: Vec<Rational> = (0..m)
        .map(|i| {
            let init_col = artificial_of_row[i]
                .or(slack_of_row[i])
                .expect("row has a basic column");
            let y = tab
                .rows
                .iter()
                .zip(&tab.basis)
                .fold(Rational::zero(), |acc, (row, &b)| {
                    if cost[b].is_zero() || row[init_col].is_zero() {
                        acc
                    } else {
                        acc + &cost[b] * &row[init_col]
                    }
                });
            if flipped[i] {
                -y
            } else {
                y
            }
        })
        .collect();

    let value = p.objective_at(&primal);
    Ok(LpOutcome::Optimal {
        value,
        primal,
        dual,
    })
}

/// Checks primal feasibility, dual feasibility and equality of the primal
/// and dual objectives, all exactly.
pub fn verify_certificate(p: &LpProblem, outcome: &LpOutcome) -> Result<bool, LpError> {
    p.validate()?;
    let LpOutcome::Optimal {
        value,
        primal,
        dual,
    } = outcome
    else {
        return Err(LpError::NotOptimal);
    };
    if primal.len() != p.num_vars() || dual.len() != p.num_rows() {
        return Ok(false);
    }
    let primal_ok = p
        .variable_bounds
        .iter()
        .zip(primal)
        .all(|(b, x)| *b == VarBound::Free || !x.is_negative())
        && p.constraint_matrix
            .iter()
            .zip(&p.row_kinds)
            .zip(&p.rhs)
            .all(|((row, kind), b)| kind.holds(&dot(row, primal), b));
    if !primal_ok {
        return Ok(false);
    }
    let signs_ok = p.row_kinds.iter().zip(dual).all(|(kind, y)| match kind {
        RowKind::Le => !y.is_positive(),
        RowKind::Ge => !y.is_negative(),
        RowKind::Eq => true,
    });
    let reduced_ok = (0..p.num_vars()).all(|j| {
        let aty = p
            .constraint_matrix
            .iter()
            .zip(dual)
            .fold(Rational::zero(), |acc, (row, y)| acc + &row[j] * y);
        let r = &p.objective[j] - aty;
        match p.variable_bounds[j] {
            VarBound::Free => r.is_zero(),
            VarBound::Nonnegative => !r.is_negative(),
        }
    });
    if !(signs_ok && reduced_ok) {
        return Ok(false);
    }
    let primal_value = p.objective_at(primal);
    let dual_value = p.dual_objective_at(dual);
    Ok(primal_value == *value && dual_value == *value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn problem(
        objective: &[Rational],
        rows: &[(&[Rational], RowKind, Rational)],
        bounds: &[VarBound],
    ) -> LpProblem {
        LpProblem {
            objective: objective.to_vec(),
            constraint_matrix: rows.iter().map(|r| r.0.to_vec()).collect(),
            rhs: rows.iter().map(|r| r.2.clone()).collect(),
            row_kinds: rows.iter().map(|r| r.1).collect(),
            variable_bounds: bounds.to_vec(),
        }
    }

    fn x_at_least_three() -> LpProblem {
        problem(
            &[int(1)],
            &[(&[int(1)], RowKind::Ge, int(3))],
            &[VarBound::Free],
        )
    }

    #[test]
    fn single_lower_bound() {
        let p = x_at_least_three();
        let out = solve(&p).unwrap();
        assert_eq!(out.value(), Some(&int(3)));
        assert!(verify_certificate(&p, &out).unwrap());
    }

    #[test]
    fn perturbed_primal_fails_certificate() {
        let p = x_at_least_three();
        let LpOutcome::Optimal { dual, .. } = solve(&p).unwrap() else {
            panic!("expected optimal");
        };
        let bad = LpOutcome::Optimal {
            value: int(3),
            primal: vec![int(3) + frac(1, 7)],
            dual,
        };
        assert!(!verify_certificate(&p, &bad).unwrap());
        assert_eq!(
            verify_certificate(&p, &LpOutcome::Infeasible),
            Err(LpError::NotOptimal)
        );
    }

    #[test]
    fn chebyshev_distance_of_e1_to_diagonal() {
        // min t s.t. t >= |1 - c|, t >= |c|, c free.
        let p = problem(
            &[int(0), int(1)],
            &[
                (&[int(1), int(1)], RowKind::Ge, int(1)),
                (&[int(-1), int(1)], RowKind::Ge, int(-1)),
                (&[int(-1), int(1)], RowKind::Ge, int(0)),
                (&[int(1), int(1)], RowKind::Ge, int(0)),
            ],
            &[VarBound::Free, VarBound::Nonnegative],
        );
        let out = solve(&p).unwrap();
        assert_eq!(out.value(), Some(&frac(1, 2)));
        assert_eq!(out.primal().unwrap()[0], frac(1, 2));
        assert!(verify_certificate(&p, &out).unwrap());
    }

    #[test]
    fn infeasible_and_unbounded() {
        let p = problem(
            &[int(0)],
            &[
                (&[int(1)], RowKind::Ge, int(1)),
                (&[int(1)], RowKind::Le, int(0)),
            ],
            &[VarBound::Free],
        );
        assert_eq!(solve(&p).unwrap(), LpOutcome::Infeasible);
        let p = problem(
            &[int(-1)],
            &[(&[int(1)], RowKind::Ge, int(0))],
            &[VarBound::Nonnegative],
        );
        assert_eq!(solve(&p).unwrap(), LpOutcome::Unbounded);
    }

    #[test]
    fn redundant_equalities_keep_a_valid_dual() {
        // x + y = 2 twice, minimize x, x, y >= 0.
        let p = problem(
            &[int(1), int(0)],
            &[
                (&[int(1), int(1)], RowKind::Eq, int(2)),
                (&[int(2), int(2)], RowKind::Eq, int(4)),
            ],
            &[VarBound::Nonnegative, VarBound::Nonnegative],
        );
        let out = solve(&p).unwrap();
        assert_eq!(out.value(), Some(&int(0)));
        assert!(verify_certificate(&p, &out).unwrap());
    }

    #[test]
    fn degenerate_problem_terminates() {
        // Beale's cycling example for the textbook largest-coefficient rule.
        let p = problem(
            &[frac(-3, 4), int(150), frac(-1, 50), int(6)],
            &[
                (
                    &[frac(1, 4), int(-60), frac(-1, 25), int(9)],
                    RowKind::Le,
                    int(0),
                ),
                (
                    &[frac(1, 2), int(-90), frac(-1, 50), int(3)],
                    RowKind::Le,
                    int(0),
                ),
                (&[int(0), int(0), int(1), int(0)], RowKind::Le, int(1)),
            ],
            &[VarBound::Nonnegative; 4],
        );
        let out = solve(&p).unwrap();
        assert_eq!(out.value(), Some(&frac(-1, 20)));
        assert!(verify_certificate(&p, &out).unwrap());
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let mut p = x_at_least_three();
        p.variable_bounds.push(VarBound::Free);
        assert!(matches!(solve(&p), Err(LpError::DimensionMismatch(_))));
    }

    #[test]
    fn json_shape() {
        let text = r#"{
            "objective": ["1"],
            "constraint_matrix": [["1"]],
            "rhs": ["3"],
            "row_kinds": [">="],
            "variable_bounds": ["free"]
        }"#;
        let p: LpProblem = serde_json::from_str(text).unwrap();
        assert_eq!(p, x_at_least_three());
        let out = serde_json::to_value(solve(&p).unwrap()).unwrap();
        assert_eq!(out["status"], "optimal");
        assert_eq!(out["value"], "3");
        assert_eq!(out["dual"][0], "1");
    }
}
