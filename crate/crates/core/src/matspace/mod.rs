//! Matrices over `F_q`, rank, and exact counts of fixed-rank matrices and ball volumes.

mod volume;

use std::fmt;
use std::sync::Arc;

use serde::ser::{Serialize, SerializeSeq, Serializer};

use crate::gf::{linalg, Felt, Field};

pub use volume::{
    gauss_binom, rank_census, rank_count, vol_hamming, vol_sr, vol_sr_lower_bound, VolumeQuery,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatError {
    #[error("rank {r} is outside 0..={max}")]
    RankOutOfRange { r: usize, max: usize },
    #[error("matrix data has {got} entries, expected {rows}x{cols}")]
    Shape { rows: usize, cols: usize, got: usize },
}

/// An `rows × cols` matrix over `F_q`, stored row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct MatFq {
    field: Arc<Field>,
    rows: usize,
    cols: usize,
    data: Vec<Felt>,
}

impl fmt::Debug for MatFq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.data.chunks(self.cols.max(1))).finish()
    }
}

impl Serialize for MatFq {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.rows))?;
        for r in 0..self.rows {
            seq.serialize_element(self.row(r))?;
        }
        seq.end()
    }
}

impl MatFq {
    pub fn zeros(field: &Arc<Field>, rows: usize, cols: usize) -> Self {
        Self { field: field.clone(), rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: &Arc<Field>, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_data(
        field: &Arc<Field>,
        rows: usize,
        cols: usize,
        data: Vec<Felt>,
    ) -> Result<Self, MatError> {
        if data.len() != rows * cols {
            return Err(MatError::Shape { rows, cols, got: data.len() });
        }
        Ok(Self { field: field.clone(), rows, cols, data })
    }

    pub fn from_rows(field: &Arc<Field>, rows: &[Vec<Felt>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Self { field: field.clone(), rows: rows.len(), cols, data }
    }

    /// The matrix whose row-major entries are the base-`q` digits of `index`
    /// (entry `(0,0)` least significant).
    pub fn from_index(field: &Arc<Field>, rows: usize, cols: usize, mut index: u64) -> Self {
        let q = field.size() as u64;
        let data = (0..rows * cols)
            .map(|_| {
                let d = (index % q) as Felt;
                index /= q;
                d
            })
            .collect();
        Self { field: field.clone(), rows, cols, data }
    }

    /// Inverse of [`MatFq::from_index`].
    pub fn index(&self) -> u64 {
        let q = self.field.size() as u64;
        self.data.iter().rev().fold(0, |acc, &d| acc * q + d as u64)
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[Felt] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Felt {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Felt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Felt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Felt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn add(&self, other: &MatFq) -> MatFq {
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| self.field.add(a, b)).collect();
        MatFq { data, ..self.clone() }
    }

    pub fn sub(&self, other: &MatFq) -> MatFq {
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| self.field.sub(a, b)).collect();
        MatFq { data, ..self.clone() }
    }

    pub fn transpose(&self) -> MatFq {
        let mut t = MatFq::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    /// Rank over `F_q` by Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut work = self.data.clone();
        rank_in_place(&self.field, self.rows, self.cols, &mut work)
    }

    /// Reduced row echelon form with zero rows removed, plus the pivot columns.
    pub fn rref(&self) -> (MatFq, Vec<usize>) {
        let mut rows = self.to_rows();
        let pivots = linalg::rref(&self.field, &mut rows, self.cols);
        let mut out = MatFq::from_rows(&self.field, &rows);
        out.cols = self.cols;
        (out, pivots)
    }

    /// Basis of `{x : M x = 0}` as the rows of the returned matrix.
    pub fn nullspace(&self) -> MatFq {
        let basis = linalg::nullspace(&self.field, &self.to_rows(), self.cols);
        let mut out = MatFq::from_rows(&self.field, &basis);
        out.cols = self.cols;
        out
    }

    pub fn inverse(&self) -> Option<MatFq> {
        if self.rows != self.cols {
            return None;
        }
        linalg::invert(&self.field, &self.to_rows()).map(|r| MatFq::from_rows(&self.field, &r))
    }

    pub fn mul_vec(&self, v: &[Felt]) -> Vec<Felt> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| self.field.add(acc, self.field.mul(a, b)))
            })
            .collect()
    }
}

/// Rank of a row-major `rows × cols` matrix; `data` is used as scratch space.
pub fn rank_in_place(field: &Field, rows: usize, cols: usize, data: &mut [Felt]) -> usize {
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&r| data[r * cols + c] != 0) else {
            continue;
        };
        if piv != rank {
            for k in 0..cols {
                data.swap(piv * cols + k, rank * cols + k);
            }
        }
        let inv = field.inv(data[rank * cols + c]).expect("nonzero pivot");
        for r in rank + 1..rows {
            let x = data[r * cols + c];
            if x == 0 {
                continue;
            }
            let factor = field.mul(x, inv);
            for k in c..cols {
                let y = data[rank * cols + k];
                if y != 0 {
                    data[r * cols + k] = field.sub(data[r * cols + k], field.mul(factor, y));
                }
            }
        }
        rank += 1;
    }
    rank
}
