//! Cyclotomic cosets, cyclic codes by defining set, analytic distance bounds,
//! Hamming codes, and exact Hamming-metric distance and covering radius.

mod distance;
mod linear;

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;

use crate::gf::{gcd, Felt, Field, GfError, RelativeBasis};
use crate::search::SearchError;

pub use distance::{
    covering_radius_hamming, min_distance_hamming, HammingCovering, HammingDistanceCertificate,
};
pub use linear::{hamming_code_make, LinearCode};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CyclicError {
    #[error("length {n} is not coprime to the alphabet size {q}")]
    NotCoprime { n: usize, q: u64 },
    #[error("{rep} is not a residue modulo {n}")]
    BadRepresentative { rep: usize, n: usize },
    #[error("row of length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("{0} is not an element of the alphabet field")]
    BadEntry(Felt),
    #[error("Hamming code redundancy must be at least 2, got {0}")]
    HammingRedundancy(usize),
    #[error("parity checks have rank {rank}, expected {expected}")]
    RankDefect { rank: usize, expected: usize },
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Search(#[from] SearchError),
}

/// The `q`-cyclotomic coset of `i` modulo `n`, sorted.
pub fn coset(n: usize, q: u64, i: usize) -> Result<Vec<usize>, CyclicError> {
    if n == 0 || gcd(n as u64, q) != 1 {
        return Err(CyclicError::NotCoprime { n, q });
    }
    if i >= n {
        return Err(CyclicError::BadRepresentative { rep: i, n });
    }
    let mut out = BTreeSet::new();
    let mut x = i;
    while out.insert(x) {
        x = ((x as u128 * q as u128) % n as u128) as usize;
    }
    Ok(out.into_iter().collect())
}

/// Partition of `Z_n` into `q`-cyclotomic cosets, ordered by smallest element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CosetTable {
    pub n: usize,
    pub q: u64,
    pub cosets: Vec<Vec<usize>>,
}

impl CosetTable {
    pub fn new(n: usize, q: u64) -> Result<Self, CyclicError> {
        let mut seen = vec![false; n];
        let mut cosets = Vec::new();
        for i in 0..n {
            if !seen[i] {
                let c = coset(n, q, i)?;
                for &x in &c {
                    seen[x] = true;
                }
                cosets.push(c);
            }
        }
        Ok(Self { n, q, cosets })
    }

    pub fn containing(&self, i: usize) -> Option<&[usize]> {
        self.cosets.iter().find(|c| c.contains(&i)).map(|c| c.as_slice())
    }
}

/// Multiplicative order of `q` modulo `n` (`n ≥ 1`, coprime to `q`).
pub fn multiplicative_order(q: u64, n: usize) -> u32 {
    if n == 1 {
        return 1;
    }
    let mut x = q % n as u64;
    let mut k = 1;
    while x != 1 {
        x = x * q % n as u64;
        k += 1;
    }
    k
}

/// A cyclic code of length `n` over `F_Q` given by its defining set.
#[derive(Clone)]
pub struct CyclicCode {
    n: usize,
    field: Arc<Field>,
    representatives: Vec<usize>,
    defining_set: Vec<usize>,
    splitting: Arc<Field>,
    beta: Felt,
    code: LinearCode,
}

impl std::fmt::Debug for CyclicCode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "cyclic {:?} T={:?}", self.code, self.defining_set)
    }
}

#[derive(Serialize)]
struct CyclicView<'a> {
    length: usize,
    field: String,
    representatives: &'a [usize],
    defining_set: &'a [usize],
    splitting_field: String,
    beta: Felt,
    dimension: usize,
}

impl Serialize for CyclicCode {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CyclicView {
            length: self.n,
            field: self.field.name(),
            representatives: &self.representatives,
            defining_set: &self.defining_set,
            splitting_field: self.splitting.name(),
            beta: self.beta,
            dimension: self.code.dimension(),
        }
        .serialize(s)
    }
}

/// Builds the cyclic code whose defining set is the union of the cosets of
/// `reps`. `β` is the canonical primitive element of the splitting field raised
/// to `(|S| - 1)/n`; each `i ∈ T` contributes the parity row `(β^{ij})_j`,
/// expanded into coordinates over `F_Q`.
pub fn cyclic_make(n: usize, field: &Arc<Field>, reps: &[usize]) -> Result<CyclicCode, CyclicError> {
    let q = field.size() as u64;
    if n == 0 || gcd(n as u64, q) != 1 {
        return Err(CyclicError::NotCoprime { n, q });
    }
    let mut t = BTreeSet::new();
    for &r in reps {
        t.extend(coset(n, q, r)?);
    }
    let defining_set: Vec<usize> = t.into_iter().collect();
    let ord = multiplicative_order(q, n);
    let splitting = Field::get(field.characteristic(), field.degree() * ord)?;
    let beta = splitting.pow(splitting.primitive(), (splitting.size() as u64 - 1) / n as u64);
    let rb = RelativeBasis::new(field, &splitting)?;
    let mut rows = Vec::new();
    for &i in &defining_set {
        let coords: Vec<Vec<Felt>> = (0..n)
            .map(|j| rb.to_coords(splitting.pow(beta, (i * j) as u64)))
            .collect();
        for k in 0..rb.degree() {
            rows.push(coords.iter().map(|c| c[k]).collect());
        }
    }
    let code = LinearCode::from_parity_check(field, n, rows)?;
    if code.codimension() != defining_set.len() {
        return Err(CyclicError::RankDefect {
            rank: code.codimension(),
            expected: defining_set.len(),
        });
    }
    let mut representatives: Vec<usize> = reps.to_vec();
    representatives.sort_unstable();
    representatives.dedup();
    Ok(CyclicCode {
        n,
        field: field.clone(),
        representatives,
        defining_set,
        splitting,
        beta,
        code,
    })
}

impl CyclicCode {
    pub fn length(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn defining_set(&self) -> &[usize] {
        &self.defining_set
    }

    pub fn representatives(&self) -> &[usize] {
        &self.representatives
    }

    pub fn splitting_field(&self) -> &Arc<Field> {
        &self.splitting
    }

    pub fn beta(&self) -> Felt {
        self.beta
    }

    pub fn code(&self) -> &LinearCode {
        &self.code
    }

    pub fn into_code(self) -> LinearCode {
        self.code
    }

    pub fn dimension(&self) -> usize {
        self.code.dimension()
    }

    /// `c(β^i)` for every `i` in the defining set, computed in the splitting field.
    pub fn evaluate(&self, word: &[Felt]) -> Vec<Felt> {
        let s = &self.splitting;
        let rb = RelativeBasis::new(&self.field, s).expect("subfield");
        self.defining_set
            .iter()
            .map(|&i| {
                word.iter().enumerate().fold(0, |acc, (j, &c)| {
                    s.add(acc, s.mul(rb.include(c), s.pow(self.beta, (i * j) as u64)))
                })
            })
            .collect()
    }

    /// `g(x) = Π_{i ∈ T} (x - β^i)`, coefficients over `F_Q`, low degree first.
    pub fn generator_polynomial(&self) -> Vec<Felt> {
        let s = &self.splitting;
        let mut g: Vec<Felt> = vec![1];
        for &i in &self.defining_set {
            let root = s.pow(self.beta, i as u64);
            let mut next = vec![0; g.len() + 1];
            for (k, &c) in g.iter().enumerate() {
                next[k + 1] = s.add(next[k + 1], c);
                next[k] = s.sub(next[k], s.mul(c, root));
            }
            g = next;
        }
        let rb = RelativeBasis::new(&self.field, s).expect("subfield");
        g.into_iter()
            .map(|c| {
                let coords = rb.to_coords(c);
                debug_assert!(coords[1..].iter().all(|&x| x == 0));
                coords[0]
            })
            .collect()
    }
}

/// `1 +` the longest run of cyclically consecutive residues in `T`.
pub fn bch_designed_distance(t: &[usize], n: usize) -> usize {
    if n == 0 {
        return 1;
    }
    let set: BTreeSet<usize> = t.iter().map(|&x| x % n).collect();
    if set.len() == n {
        return n + 1;
    }
    let mut best = 0;
    for &start in &set {
        if set.contains(&((start + n - 1) % n)) {
            continue;
        }
        let mut len = 0;
        while set.contains(&((start + len) % n)) {
            len += 1;
        }
        best = best.max(len);
    }
    best + 1
}

/// Hartmann–Tzeng bound: the largest `δ + s` such that
/// `{b + i·a1 + j·a2 : 0 ≤ i ≤ δ-2, 0 ≤ j ≤ s} ⊆ T` for some `b` and units `a1, a2`.
pub fn ht_bound(t: &[usize], n: usize) -> usize {
    if n == 0 || t.is_empty() {
        return 1;
    }
    let mut member = vec![false; n];
    for &x in t {
        member[x % n] = true;
    }
    if member.iter().all(|&m| m) {
        return n + 1;
    }
    let units: Vec<usize> = (1..n.max(2)).filter(|&a| gcd(a as u64, n as u64) == 1).collect();
    let units = if n == 1 { vec![0] } else { units };
    let mut best = 1;
    for b in 0..n {
        if !member[b] {
            continue;
        }
        for &a1 in &units {
            // run[j] = longest i-run starting at b + j·a2, computed per a2
            for &a2 in &units {
                let mut run_min = usize::MAX;
                for s in 0..n {
                    let start = (b + s * a2) % n;
                    let mut run = 0;
                    while run < n && member[(start + run * a1) % n] {
                        run += 1;
                    }
                    run_min = run_min.min(run);
                    if run_min == 0 {
                        break;
                    }
                    best = best.max(run_min + 1 + s);
                }
            }
        }
    }
    best
}

/// True iff `{0, 1, 3, 5} ⊆ T`, which gives minimum distance at least 4 for the
/// ternary and quinary families built from it.
pub fn boston_check(t: &[usize]) -> bool {
    [0, 1, 3, 5].iter().all(|x| t.contains(x))
}
