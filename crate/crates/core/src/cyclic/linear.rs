use std::sync::Arc;

use serde::ser::{Serialize, SerializeStruct, Serializer};
use sha2::{Digest, Sha256};

use super::CyclicError;
use crate::gf::{linalg, Felt, Field};

/// A linear code over `F_Q` given by a parity-check matrix in reduced row
/// echelon form with full row rank.
#[derive(Clone)]
pub struct LinearCode {
    field: Arc<Field>,
    length: usize,
    parity: Vec<Vec<Felt>>,
}

impl std::fmt::Debug for LinearCode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {}]_{}", self.length, self.dimension(), self.field.size())
    }
}

impl PartialEq for LinearCode {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.field, &other.field)
            && self.length == other.length
            && self.parity == other.parity
    }
}

impl Serialize for LinearCode {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("LinearCode", 4)?;
        st.serialize_field("field", &self.field.name())?;
        st.serialize_field("length", &self.length)?;
        st.serialize_field("dimension", &self.dimension())?;
        st.serialize_field("parity_check", &self.parity)?;
        st.end()
    }
}

fn check_rows(field: &Field, length: usize, rows: &[Vec<Felt>]) -> Result<(), CyclicError> {
    for row in rows {
        if row.len() != length {
            return Err(CyclicError::LengthMismatch { expected: length, got: row.len() });
        }
        if let Some(&x) = row.iter().find(|&&x| x >= field.size()) {
            return Err(CyclicError::BadEntry(x));
        }
    }
    Ok(())
}

impl LinearCode {
    pub fn from_parity_check(
        field: &Arc<Field>,
        length: usize,
        rows: Vec<Vec<Felt>>,
    ) -> Result<Self, CyclicError> {
        check_rows(field, length, &rows)?;
        let mut parity = rows;
        linalg::rref(field, &mut parity, length);
        Ok(Self { field: field.clone(), length, parity })
    }

    pub fn from_generator(
        field: &Arc<Field>,
        length: usize,
        rows: &[Vec<Felt>],
    ) -> Result<Self, CyclicError> {
        check_rows(field, length, rows)?;
        let parity = linalg::nullspace(field, rows, length);
        Self::from_parity_check(field, length, parity)
    }

    /// The `[t, t-1, 2]` code `{x : Σ x_i = 0}`.
    pub fn parity(field: &Arc<Field>, length: usize) -> Self {
        Self::from_parity_check(field, length, vec![vec![1; length]]).expect("valid row")
    }

    /// The whole space `F_Q^t`.
    pub fn trivial(field: &Arc<Field>, length: usize) -> Self {
        Self { field: field.clone(), length, parity: Vec::new() }
    }

    /// The zero code.
    pub fn zero(field: &Arc<Field>, length: usize) -> Self {
        let rows = (0..length)
            .map(|i| (0..length).map(|j| Felt::from(i == j)).collect())
            .collect();
        Self { field: field.clone(), length, parity: rows }
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn parity_check(&self) -> &[Vec<Felt>] {
        &self.parity
    }

    pub fn codimension(&self) -> usize {
        self.parity.len()
    }

    pub fn dimension(&self) -> usize {
        self.length - self.parity.len()
    }

    pub fn syndrome(&self, word: &[Felt]) -> Vec<Felt> {
        linalg::mat_vec(&self.field, &self.parity, word)
    }

    pub fn is_member(&self, word: &[Felt]) -> bool {
        word.len() == self.length && self.syndrome(word).iter().all(|&x| x == 0)
    }

    /// A generator matrix (basis of the code) in reduced echelon form.
    pub fn generator(&self) -> Vec<Vec<Felt>> {
        let mut rows = linalg::nullspace(&self.field, &self.parity, self.length);
        linalg::rref(&self.field, &mut rows, self.length);
        rows
    }

    /// All codewords, in order of their coefficient vectors over the generator.
    /// Only sensible for small codes.
    pub fn codewords(&self) -> Vec<Vec<Felt>> {
        let gen = self.generator();
        let q = self.field.size() as u64;
        let count = q.pow(gen.len() as u32);
        (0..count)
            .map(|mut idx| {
                let mut word = vec![0; self.length];
                for row in &gen {
                    let c = (idx % q) as Felt;
                    idx /= q;
                    if c == 0 {
                        continue;
                    }
                    for (w, &g) in word.iter_mut().zip(row) {
                        *w = self.field.add(*w, self.field.mul(c, g));
                    }
                }
                word
            })
            .collect()
    }

    /// sha256 over the field modulus, length and reduced parity check.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.field.name().as_bytes());
        for &c in self.field.modulus() {
            h.update(c.to_le_bytes());
        }
        h.update((self.length as u64).to_le_bytes());
        for row in &self.parity {
            for &x in row {
                h.update(x.to_le_bytes());
            }
        }
        hex::encode(h.finalize())
    }
}

/// The Hamming code of redundancy `u` over `F_Q`: one parity-check column per
/// projective point of `F_Q^u`, normalised so the last nonzero coordinate is 1.
pub fn hamming_code_make(field: &Arc<Field>, u: usize) -> Result<LinearCode, CyclicError> {
    if u < 2 {
        return Err(CyclicError::HammingRedundancy(u));
    }
    let q = field.size() as u64;
    let mut cols = Vec::new();
    for idx in 1..q.pow(u as u32) {
        let mut v = Vec::with_capacity(u);
        let mut x = idx;
        for _ in 0..u {
            v.push((x % q) as Felt);
            x /= q;
        }
        if v.iter().rev().find(|&&c| c != 0) == Some(&1) {
            cols.push(v);
        }
    }
    let rows = (0..u).map(|r| cols.iter().map(|c| c[r]).collect()).collect();
    LinearCode::from_parity_check(field, cols.len(), rows)
}
