//! Dense exact Gaussian elimination.

use std::collections::BTreeSet;

use num_traits::Zero;

use crate::rational::Rational;
use crate::seq::SparseSeq;

/// Reduces `m` to reduced row echelon form in place, considering only the
/// first `ncols` columns as pivot candidates. Returns the pivot columns.
pub fn rref(m: &mut [Vec<Rational>], ncols: usize) -> Vec<usize> {
    let nrows = m.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Solves the square system `a x = b`; `None` when `a` is singular.
pub fn solve_square(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.len();
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut m, n);
    if pivots.len() < n {
        return None;
    }
    Some(m.into_iter().map(|mut row| row.pop().unwrap()).collect())
}

pub fn is_nonsingular(a: &[Vec<Rational>]) -> bool {
    let n = a.len();
    let mut m = a.to_vec();
    rref(&mut m, n).len() == n
}

/// Column matrix of `vectors` restricted to the listed coordinates.
fn column_matrix(vectors: &[&SparseSeq], coords: &BTreeSet<usize>) -> Vec<Vec<Rational>> {
    coords
        .iter()
        .map(|&i| vectors.iter().map(|v| v.coord(i)).collect())
        .collect()
}

pub fn rank(vectors: &[SparseSeq]) -> usize {
    let coords: BTreeSet<usize> = vectors.iter().flat_map(|v| v.support()).collect();
    let refs: Vec<&SparseSeq> = vectors.iter().collect();
    let mut m = column_matrix(&refs, &coords);
    rref(&mut m, vectors.len()).len()
}

/// Coefficients `c` with `sum_j c_j basis_j = x`, if `x` lies in the span.
/// `basis` must be linearly independent, which makes `c` unique.
pub fn span_coefficients(basis: &[SparseSeq], x: &SparseSeq) -> Option<Vec<Rational>> {
    let k = basis.len();
    let coords: BTreeSet<usize> = basis
        .iter()
        .flat_map(|v| v.support())
        .chain(x.support())
        .collect();
    let mut refs: Vec<&SparseSeq> = basis.iter().collect();
    refs.push(x);
    let mut m = column_matrix(&refs, &coords);
    let pivots = rref(&mut m, k + 1);
    if pivots.contains(&k) {
        return None;
    }
    debug_assert_eq!(pivots.len(), k, "basis must be independent");
    let mut coeffs = vec![Rational::zero(); k];
    for (row, &c) in pivots.iter().enumerate() {
        coeffs[c] = m[row][k].clone();
    }
    Some(coeffs)
}
