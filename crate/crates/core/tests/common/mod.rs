//! Independent oracles used by the integration and acceptance tests.
//!
//! Nothing here calls the library's simplex or elimination code.

#![allow(dead_code)]

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use seminorm_core::lp::{LpProblem, RowKind, VarBound};
use seminorm_core::rational::{frac, int};
use seminorm_core::{Rational, SparseSeq};

/// Gauss-Jordan on a square system; `None` when singular.
pub fn solve_dense(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let p = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, p);
        b.swap(col, p);
        let inv = a[col][col].recip();
        for v in a[col][col..].iter_mut() {
            *v *= &inv;
        }
        b[col] = &b[col] * &inv;
        let pivot = a[col].clone();
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for (v, p) in a[r][col..].iter_mut().zip(&pivot[col..]) {
                    *v -= &f * p;
                }
                let d = &f * &b[col];
                b[r] -= d;
            }
        }
    }
    Some(b)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Optimal value by enumerating every vertex: all `n`-subsets of the
/// constraints (rows plus sign bounds) taken as equalities, solved and
/// filtered for feasibility. Only meaningful when the feasible region is
/// bounded; returns `None` when no vertex is feasible.
pub fn vertex_enumeration(p: &LpProblem) -> Option<Rational> {
    let n = p.objective.len();
    let mut rows: Vec<(Vec<Rational>, RowKind, Rational)> = p
        .constraint_matrix
        .iter()
        .zip(&p.row_kinds)
        .zip(&p.rhs)
        .map(|((a, k), b)| (a.clone(), *k, b.clone()))
        .collect();
    for (j, bound) in p.variable_bounds.iter().enumerate() {
        if *bound == VarBound::Nonnegative {
            let mut a = vec![Rational::zero(); n];
            a[j] = int(1);
            rows.push((a, RowKind::Ge, Rational::zero()));
        }
    }
    let mut best: Option<Rational> = None;
    for subset in combinations(rows.len(), n) {
        let a: Vec<Vec<Rational>> = subset.iter().map(|&i| rows[i].0.clone()).collect();
        let b: Vec<Rational> = subset.iter().map(|&i| rows[i].2.clone()).collect();
        let Some(x) = solve_dense(a, b) else { continue };
        let feasible = rows.iter().all(|(a, k, b)| {
            let lhs: Rational = a.iter().zip(&x).map(|(ai, xi)| ai * xi).sum();
            k.holds(&lhs, b)
        });
        if feasible {
            let v: Rational = p.objective.iter().zip(&x).map(|(c, xi)| c * xi).sum();
            if best.as_ref().is_none_or(|b| &v < b) {
                best = Some(v);
            }
        }
    }
    best
}

/// A random LP with at most 4 variables and 6 rows. With `boxed`, two of
/// the rows bound every variable to `[-6, 6]` through their sum and
/// additional per-variable box rows make the region bounded.
pub fn random_lp(rng: &mut ChaCha8Rng, boxed: bool) -> LpProblem {
    let n = rng.random_range(1..=if boxed { 2 } else { 4 });
    let small = |rng: &mut ChaCha8Rng| frac(rng.random_range(-5..=5), rng.random_range(1..=3));
    let mut constraint_matrix = Vec::new();
    let mut rhs = Vec::new();
    let mut row_kinds = Vec::new();
    let variable_bounds: Vec<VarBound> = (0..n)
        .map(|_| {
            if rng.random_bool(0.5) {
                VarBound::Free
            } else {
                VarBound::Nonnegative
            }
        })
        .collect();
    if boxed {
        for j in 0..n {
            for (kind, b) in [(RowKind::Le, int(6)), (RowKind::Ge, int(-6))] {
                let mut a = vec![Rational::zero(); n];
                a[j] = int(1);
                constraint_matrix.push(a);
                rhs.push(b);
                row_kinds.push(kind);
            }
        }
    }
    let extra = rng.random_range(1..=6 - constraint_matrix.len().min(5));
    for _ in 0..extra {
        constraint_matrix.push((0..n).map(|_| small(rng)).collect());
        rhs.push(small(rng));
        row_kinds.push(match rng.random_range(0..5) {
            0 => RowKind::Eq,
            1 | 2 => RowKind::Le,
            _ => RowKind::Ge,
        });
    }
    LpProblem {
        objective: (0..n).map(|_| small(rng)).collect(),
        constraint_matrix,
        rhs,
        row_kinds,
        variable_bounds,
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `min_c N(u - c v)` for `N` in {l1, linf}, by a grid of step 1/100
/// followed by an exact check of every breakpoint within one step of the
/// best grid point. The objective is convex and piecewise linear, so its
/// minimum sits at a breakpoint adjacent to the best grid point.
pub fn one_dim_distance(linf: bool, v: &SparseSeq, u: &SparseSeq) -> (Rational, Rational) {
    let idx: Vec<usize> = {
        let mut s: Vec<usize> = v.support().chain(u.support()).collect();
        s.sort_unstable();
        s.dedup();
        s
    };
    let f = |c: &Rational| -> Rational {
        let terms = idx.iter().map(|&i| (u.coord(i) - c * v.coord(i)).abs());
        if linf {
            terms.max().unwrap_or_else(Rational::zero)
        } else {
            terms.sum()
        }
    };
    let mut breakpoints = Vec::new();
    for (a, &i) in idx.iter().enumerate() {
        for &j in &idx[a..] {
            for sign in [1i64, -1] {
                let s = int(sign);
                let den = v.coord(i) - &s * v.coord(j);
                if !den.is_zero() {
                    breakpoints.push((u.coord(i) - &s * u.coord(j)) / den);
                }
            }
        }
    }
    let reach = breakpoints
        .iter()
        .map(|b| b.abs())
        .max()
        .unwrap_or_else(Rational::zero)
        + int(1);
    let steps = (reach * int(100)).ceil().to_integer();
    let steps: i64 = steps.try_into().expect("small grid");
    let mut best_c = Rational::zero();
    let mut best = f(&best_c);
    for k in -steps..=steps {
        let c = frac(k, 100);
        let val = f(&c);
        if val < best {
            best = val;
            best_c = c;
        }
    }
    let step = frac(1, 100);
    let mut arg = best_c.clone();
    for b in breakpoints {
        if (&b - &best_c).abs() <= step {
            let val = f(&b);
            if val < best {
                best = val;
                arg = b;
            }
        }
    }
    (best, arg)
}
