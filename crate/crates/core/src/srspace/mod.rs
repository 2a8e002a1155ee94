//! The sum-rank metric space `F_q^{(n,m)} ⊕ … ⊕ F_q^{(n,m)}` and the codec between
//! coefficient words over `F_{q^m}` and tuples of `n × m` matrices over `F_q`.
//!
//! A block with coefficients `a_0, …, a_{n-1} ∈ F_{q^m}` is the matrix of
//! `x ↦ Σ_j a_j φ(x^{q^j})` on `F_{q^n}`: row `i` holds the `F_q`-coordinates of
//! the image of the `i`-th domain basis element.

mod code;

use std::sync::Arc;

use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use crate::gf::{linalg, EmbeddingKind, Felt, Field, GfError, RelativeBasis, TowerMap};
use crate::matspace::MatFq;
use crate::search::SearchError;

pub use code::{Structure, SumRankCode};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SrError {
    #[error("codec matrix has rank {rank} < {dim}; the embedding does not give a faithful representation")]
    DegenerateCodec { rank: usize, dim: usize },
    #[error("geometries differ")]
    GeometryMismatch,
    #[error("length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("expected {expected} component codes, got {got}")]
    ComponentCount { expected: usize, got: usize },
    #[error("component {0} is not over the coefficient field")]
    WrongField(usize),
    #[error("inclusion embedding needs n | m, got n={n} m={m}")]
    NoInclusion { n: usize, m: usize },
    #[error("block space has {0} matrices, too many to enumerate")]
    BlockSpaceTooLarge(u64),
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Search(#[from] SearchError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PhiName {
    /// Inclusion when `n | m`, otherwise prefix.
    Auto,
    Inclusion,
    Prefix,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PhiSpec {
    Named(PhiName),
    Matrix(Vec<Vec<Felt>>),
}

impl Default for PhiSpec {
    fn default() -> Self {
        PhiSpec::Named(PhiName::Auto)
    }
}

/// Per-block codec data for fixed `(q, n, m, φ)`.
pub struct BlockCodec {
    base: Arc<Field>,
    sub: Arc<Field>,
    sup: Arc<Field>,
    n: usize,
    m: usize,
    phi: TowerMap,
    /// `(n·m) × (n·m)` over `F_q`: coefficient coordinates `(j, l)` to entries `(i, k)`.
    forward: Vec<Vec<Felt>>,
    inverse: Vec<Vec<Felt>>,
}

impl BlockCodec {
    pub fn new(q: u64, n: usize, m: usize, phi: &PhiSpec) -> Result<Self, SrError> {
        let base = Field::of_size(q)?;
        let (p, e) = (base.characteristic(), base.degree());
        let sub = Field::get(p, e * n as u32)?;
        let sup = Field::get(p, e * m as u32)?;
        let phi = match phi {
            PhiSpec::Named(PhiName::Auto) => TowerMap::new(&base, &sub, &sup)?,
            PhiSpec::Named(PhiName::Inclusion) => {
                if n == 0 || m % n != 0 {
                    return Err(SrError::NoInclusion { n, m });
                }
                TowerMap::new(&base, &sub, &sup)?
            }
            PhiSpec::Named(PhiName::Prefix) => TowerMap::prefix(&base, &sub, &sup)?,
            PhiSpec::Matrix(rows) => TowerMap::from_matrix(&base, &sub, &sup, rows.clone())?,
        };
        let dim = n * m;
        let dom = phi.domain();
        let cod = phi.codomain();
        // column (j, l): entries of the block with a_j = l-th codomain basis element
        let mut forward = vec![vec![0; dim]; dim];
        for j in 0..n {
            let twisted: Vec<Felt> = dom
                .basis()
                .iter()
                .map(|&b| phi.embed_unchecked(sub.pow(b, q.pow(j as u32))))
                .collect();
            for (l, &bl) in cod.basis().iter().enumerate() {
                for (i, &img) in twisted.iter().enumerate() {
                    for (k, c) in cod.to_coords(sup.mul(bl, img)).into_iter().enumerate() {
                        forward[i * m + k][j * m + l] = c;
                    }
                }
            }
        }
        let rank = linalg::rank(&base, &forward, dim);
        let inverse = linalg::invert(&base, &forward).ok_or(SrError::DegenerateCodec { rank, dim })?;
        Ok(Self { base, sub, sup, n, m, phi, forward, inverse })
    }

    pub fn base(&self) -> &Arc<Field> {
        &self.base
    }

    pub fn coefficient_field(&self) -> &Arc<Field> {
        &self.sup
    }

    pub fn domain_field(&self) -> &Arc<Field> {
        &self.sub
    }

    pub fn phi(&self) -> &TowerMap {
        &self.phi
    }

    pub fn rows(&self) -> usize {
        self.n
    }

    pub fn cols(&self) -> usize {
        self.m
    }

    pub fn codec_matrix(&self) -> &[Vec<Felt>] {
        &self.forward
    }

    fn coords(&self) -> &RelativeBasis {
        self.phi.codomain()
    }

    /// Block matrix for coefficients `a_0, …, a_{n-1}`.
    pub fn block(&self, coeffs: &[Felt]) -> MatFq {
        let input: Vec<Felt> = coeffs.iter().flat_map(|&a| self.coords().to_coords(a)).collect();
        let entries = linalg::mat_vec(&self.base, &self.forward, &input);
        MatFq::from_data(&self.base, self.n, self.m, entries).expect("shape")
    }

    /// Coefficients `a_0, …, a_{n-1}` of a block matrix.
    pub fn coefficients(&self, block: &MatFq) -> Vec<Felt> {
        let coords = linalg::mat_vec(&self.base, &self.inverse, block.data());
        coords.chunks(self.m).map(|c| self.coords().from_coords(c)).collect()
    }

    /// The `F_q`-linear map `x ↦ Σ_j a_j φ(x^{q^j})` evaluated directly.
    pub fn apply(&self, coeffs: &[Felt], x: Felt) -> Felt {
        let q = self.base.size() as u64;
        coeffs.iter().enumerate().fold(0, |acc, (j, &a)| {
            let y = self.phi.embed_unchecked(self.sub.pow(x, q.pow(j as u32)));
            self.sup.add(acc, self.sup.mul(a, y))
        })
    }

    fn same(&self, other: &BlockCodec) -> bool {
        Arc::ptr_eq(&self.base, &other.base)
            && self.n == other.n
            && self.m == other.m
            && self.phi.matrix() == other.phi.matrix()
    }
}

/// Block length plus the per-block codec.
#[derive(Clone)]
pub struct Geometry {
    codec: Arc<BlockCodec>,
    t: usize,
}

impl std::fmt::Debug for Geometry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Geometry(q={}, {}x{}, t={})",
            self.codec.base.size(),
            self.codec.n,
            self.codec.m,
            self.t
        )
    }
}

impl PartialEq for Geometry {
    fn eq(&self, other: &Self) -> bool {
        self.t == other.t && self.codec.same(&other.codec)
    }
}

impl Serialize for Geometry {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Geometry", 5)?;
        st.serialize_field("q", &self.codec.base.size())?;
        st.serialize_field("n", &self.codec.n)?;
        st.serialize_field("m", &self.codec.m)?;
        st.serialize_field("t", &self.t)?;
        match self.codec.phi.kind() {
            EmbeddingKind::Inclusion => st.serialize_field("phi", "inclusion")?,
            EmbeddingKind::Prefix => st.serialize_field("phi", "prefix")?,
            EmbeddingKind::Explicit => st.serialize_field("phi", self.codec.phi.matrix())?,
        }
        st.end()
    }
}

impl Geometry {
    pub fn new(q: u64, n: usize, m: usize, t: usize, phi: &PhiSpec) -> Result<Self, SrError> {
        Ok(Self { codec: Arc::new(BlockCodec::new(q, n, m, phi)?), t })
    }

    /// The same blocks with a different block length.
    pub fn with_length(&self, t: usize) -> Self {
        Self { codec: self.codec.clone(), t }
    }

    pub fn codec(&self) -> &BlockCodec {
        &self.codec
    }

    pub fn q(&self) -> u64 {
        self.codec.base.size() as u64
    }

    pub fn n(&self) -> usize {
        self.codec.n
    }

    pub fn m(&self) -> usize {
        self.codec.m
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn base(&self) -> &Arc<Field> {
        &self.codec.base
    }

    pub fn zero_word(&self) -> SrWord {
        SrWord {
            blocks: vec![MatFq::zeros(&self.codec.base, self.codec.n, self.codec.m); self.t],
        }
    }

    pub fn zero_coeffs(&self) -> CoeffWord {
        CoeffWord { coeffs: vec![vec![0; self.t]; self.codec.n] }
    }

    pub fn forward(&self, cw: &CoeffWord) -> Result<SrWord, SrError> {
        self.check_coeffs(cw)?;
        let blocks = (0..self.t)
            .map(|i| {
                let col: Vec<Felt> = cw.coeffs.iter().map(|row| row[i]).collect();
                self.codec.block(&col)
            })
            .collect();
        Ok(SrWord { blocks })
    }

    pub fn inverse(&self, w: &SrWord) -> Result<CoeffWord, SrError> {
        self.check_word(w)?;
        let mut coeffs = vec![vec![0; self.t]; self.codec.n];
        for (i, b) in w.blocks.iter().enumerate() {
            for (j, a) in self.codec.coefficients(b).into_iter().enumerate() {
                coeffs[j][i] = a;
            }
        }
        Ok(CoeffWord { coeffs })
    }

    pub fn check_word(&self, w: &SrWord) -> Result<(), SrError> {
        let ok = w.blocks.len() == self.t
            && w.blocks.iter().all(|b| {
                b.rows() == self.codec.n
                    && b.cols() == self.codec.m
                    && Arc::ptr_eq(b.field(), &self.codec.base)
            });
        if ok {
            Ok(())
        } else {
            Err(SrError::GeometryMismatch)
        }
    }

    fn check_coeffs(&self, cw: &CoeffWord) -> Result<(), SrError> {
        if cw.coeffs.len() != self.codec.n {
            return Err(SrError::GeometryMismatch);
        }
        for row in &cw.coeffs {
            if row.len() != self.t {
                return Err(SrError::LengthMismatch { expected: self.t, got: row.len() });
            }
        }
        Ok(())
    }
}

/// A tuple of `t` matrices over `F_q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct SrWord {
    pub blocks: Vec<MatFq>,
}

/// Coefficient rows `a_0, …, a_{n-1}`, each a length-`t` word over `F_{q^m}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct CoeffWord {
    pub coeffs: Vec<Vec<Felt>>,
}

impl SrWord {
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn add(&self, other: &SrWord) -> SrWord {
        SrWord { blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, other: &SrWord) -> SrWord {
        SrWord { blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a.sub(b)).collect() }
    }

    /// Concatenation `(self | other)`.
    pub fn concat(&self, other: &SrWord) -> SrWord {
        SrWord { blocks: self.blocks.iter().chain(&other.blocks).cloned().collect() }
    }

    /// Entries of every block, block after block, row-major.
    pub fn entries(&self) -> Vec<Felt> {
        self.blocks.iter().flat_map(|b| b.data().iter().copied()).collect()
    }

    /// Nested arrays of canonical indices.
    pub fn to_nested(&self) -> Vec<Vec<Vec<Felt>>> {
        self.blocks.iter().map(|b| b.to_rows()).collect()
    }
}

/// Sum of block ranks.
pub fn wt_sr(w: &SrWord) -> usize {
    w.blocks.iter().map(|b| b.rank()).sum()
}

pub fn d_sr(u: &SrWord, v: &SrWord) -> Result<usize, SrError> {
    let same_shape = u.blocks.len() == v.blocks.len()
        && u.blocks.iter().zip(&v.blocks).all(|(a, b)| {
            a.rows() == b.rows() && a.cols() == b.cols() && Arc::ptr_eq(a.field(), b.field())
        });
    if !same_shape {
        return Err(SrError::GeometryMismatch);
    }
    Ok(wt_sr(&u.sub(v)))
}

/// Closed-form sum-rank weight for binary `2 × 2` blocks with coefficients over
/// `F_4`: `2·wt(a_0) + 2·wt(a_1) − 3·|supp(a_0) ∩ supp(a_1)|`.
pub fn quaternary_pair_weight(a0: &[Felt], a1: &[Felt]) -> Result<usize, SrError> {
    if a0.len() != a1.len() {
        return Err(SrError::LengthMismatch { expected: a0.len(), got: a1.len() });
    }
    let w0 = a0.iter().filter(|&&x| x != 0).count();
    let w1 = a1.iter().filter(|&&x| x != 0).count();
    let both = a0.iter().zip(a1).filter(|(&x, &y)| x != 0 && y != 0).count();
    Ok(2 * w0 + 2 * w1 - 3 * both)
}
