//! Dense Gaussian elimination over a [`Field`], rows stored as `Vec<Vec<Felt>>`.

use super::{Felt, Field};

/// Reduces `rows` in place to reduced row echelon form, drops zero rows and
/// returns the pivot columns.
pub(crate) fn rref(field: &Field, rows: &mut Vec<Vec<Felt>>, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = field.inv(rows[r][c]).expect("pivot is nonzero");
        for x in rows[r].iter_mut() {
            *x = field.mul(*x, inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c] == 0 {
                continue;
            }
            let factor = row[c];
            for (x, &y) in row.iter_mut().zip(&pivot_row) {
                if y != 0 {
                    *x = field.sub(*x, field.mul(factor, y));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub(crate) fn rank(field: &Field, rows: &[Vec<Felt>], cols: usize) -> usize {
    let mut work = rows.to_vec();
    rref(field, &mut work, cols).len()
}

/// Inverse of a square matrix, or `None` when singular.
pub(crate) fn invert(field: &Field, rows: &[Vec<Felt>]) -> Option<Vec<Vec<Felt>>> {
    let n = rows.len();
    let mut aug: Vec<Vec<Felt>> = rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| Felt::from(i == j)));
            r
        })
        .collect();
    let pivots = rref(field, &mut aug, n);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &c)| i != c) {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Basis of the right kernel `{x : A x = 0}` of an `rows × cols` matrix.
pub(crate) fn nullspace(field: &Field, rows: &[Vec<Felt>], cols: usize) -> Vec<Vec<Felt>> {
    let mut work = rows.to_vec();
    let pivots = rref(field, &mut work, cols);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0; cols];
            v[f] = 1;
            for (row, &pc) in work.iter().zip(&pivots) {
                v[pc] = field.neg(row[f]);
            }
            v
        })
        .collect()
}

pub(crate) fn mat_vec(field: &Field, rows: &[Vec<Felt>], v: &[Felt]) -> Vec<Felt> {
    rows.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(0, |acc, (&a, &b)| field.add(acc, field.mul(a, b)))
        })
        .collect()
}
