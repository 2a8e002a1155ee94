use std::sync::Arc;

use sha2::{Digest, Sha256};

use super::{CoeffWord, Geometry, SrError, SrWord};
use crate::cyclic::LinearCode;
use crate::gf::{linalg, Felt};
use crate::matspace::MatFq;
use crate::search::{Space, SymbolClass, Word};

/// Largest block space (`q^{nm}` matrices) the enumerators will tabulate.
const BLOCK_SPACE_CAP: u64 = 1 << 20;

#[derive(Clone, Debug)]
pub enum Structure {
    /// `SR(C_0, …, C_{n-1})`: coefficient row `a_j` must lie in `C_j`.
    Components(Vec<LinearCode>),
    /// `{(u | u + v) : u ∈ first, v ∈ second}`.
    Plotkin(Box<SumRankCode>, Box<SumRankCode>),
}

/// An `F_q`-linear sum-rank code together with a parity-check matrix over `F_q`
/// whose columns are indexed by `(block, row, col)` of the word's entries.
#[derive(Clone)]
pub struct SumRankCode {
    geometry: Geometry,
    structure: Structure,
    check: Vec<Vec<Felt>>,
}

impl std::fmt::Debug for SumRankCode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "SumRankCode({:?}, codim {})", self.geometry, self.check.len())
    }
}

impl SumRankCode {
    pub fn from_components(geometry: Geometry, components: Vec<LinearCode>) -> Result<Self, SrError> {
        let n = geometry.n();
        if components.len() != n {
            return Err(SrError::ComponentCount { expected: n, got: components.len() });
        }
        let sup = geometry.codec().coefficient_field().clone();
        for (j, c) in components.iter().enumerate() {
            if !Arc::ptr_eq(c.field(), &sup) {
                return Err(SrError::WrongField(j));
            }
            if c.length() != geometry.t() {
                return Err(SrError::LengthMismatch { expected: geometry.t(), got: c.length() });
            }
        }
        let (m, t) = (geometry.m(), geometry.t());
        let nm = n * m;
        let base = geometry.base().clone();
        let codec = geometry.codec();
        let rb = codec.phi().codomain();
        // coefficient vector of each unit matrix E_{ik}
        let unit_coeffs: Vec<Vec<Felt>> = (0..nm)
            .map(|idx| {
                let mut e = MatFq::zeros(&base, n, m);
                e.set(idx / m, idx % m, 1);
                codec.coefficients(&e)
            })
            .collect();
        let mut check = Vec::new();
        for (j, comp) in components.iter().enumerate() {
            for hrow in comp.parity_check() {
                let mut rows = vec![vec![0; t * nm]; m];
                for (pos, &h) in hrow.iter().enumerate() {
                    if h == 0 {
                        continue;
                    }
                    for (idx, a) in unit_coeffs.iter().enumerate() {
                        let coords = rb.to_coords(sup.mul(h, a[j]));
                        for (l, c) in coords.into_iter().enumerate() {
                            rows[l][pos * nm + idx] = c;
                        }
                    }
                }
                check.extend(rows);
            }
        }
        linalg::rref(&base, &mut check, t * nm);
        Ok(Self { geometry, structure: Structure::Components(components), check })
    }

    pub fn plotkin(first: SumRankCode, second: SumRankCode) -> Result<Self, SrError> {
        if first.geometry != second.geometry {
            return Err(SrError::GeometryMismatch);
        }
        let f = first.geometry.base().clone();
        let width = first.word_len();
        let mut check = Vec::new();
        for row in &first.check {
            let mut r = row.clone();
            r.resize(2 * width, 0);
            check.push(r);
        }
        for row in &second.check {
            let mut r: Vec<Felt> = row.iter().map(|&x| f.neg(x)).collect();
            r.extend_from_slice(row);
            check.push(r);
        }
        linalg::rref(&f, &mut check, 2 * width);
        let geometry = first.geometry.with_length(2 * first.geometry.t());
        Ok(Self {
            geometry,
            structure: Structure::Plotkin(Box::new(first), Box::new(second)),
            check,
        })
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geometry
    }

    pub fn structure(&self) -> &Structure {
        &self.structure
    }

    /// Parity-check matrix over `F_q` in reduced echelon form.
    pub fn check_matrix(&self) -> &[Vec<Felt>] {
        &self.check
    }

    /// Number of `F_q` entries in a word, `t·n·m`.
    pub fn word_len(&self) -> usize {
        self.geometry.t() * self.geometry.n() * self.geometry.m()
    }

    /// Codimension over `F_q`.
    pub fn codimension(&self) -> usize {
        self.check.len()
    }

    /// Dimension over `F_q`; the code has `q^dimension` words.
    pub fn dimension(&self) -> usize {
        self.word_len() - self.check.len()
    }

    /// Sum of the component codimensions over `F_{q^m}` (components only).
    pub fn component_codimension(&self) -> Option<usize> {
        match &self.structure {
            Structure::Components(cs) => Some(cs.iter().map(|c| c.codimension()).sum()),
            Structure::Plotkin(..) => None,
        }
    }

    pub fn syndrome(&self, w: &SrWord) -> Result<Vec<Felt>, SrError> {
        self.geometry.check_word(w)?;
        Ok(linalg::mat_vec(self.geometry.base(), &self.check, &w.entries()))
    }

    /// Membership by structure: component parity checks on the coefficient rows,
    /// or the two halves of a Plotkin sum.
    pub fn member(&self, w: &SrWord) -> Result<bool, SrError> {
        self.geometry.check_word(w)?;
        match &self.structure {
            Structure::Components(cs) => {
                let coeffs = self.geometry.inverse(w)?;
                Ok(cs.iter().zip(&coeffs.coeffs).all(|(c, row)| c.is_member(row)))
            }
            Structure::Plotkin(a, b) => {
                let half = a.geometry.t();
                let u = SrWord { blocks: w.blocks[..half].to_vec() };
                let v = SrWord { blocks: w.blocks[half..].to_vec() };
                Ok(a.member(&u)? && b.member(&v.sub(&u))?)
            }
        }
    }

    /// Membership through the `F_q` parity-check matrix.
    pub fn member_by_check(&self, w: &SrWord) -> Result<bool, SrError> {
        Ok(self.syndrome(w)?.iter().all(|&x| x == 0))
    }

    /// Word for a coefficient word (components only).
    pub fn encode_coeffs(&self, cw: &CoeffWord) -> Result<SrWord, SrError> {
        self.geometry.forward(cw)
    }

    /// A basis of the code over `F_q`, as words.
    pub fn basis_words(&self) -> Vec<SrWord> {
        let f = self.geometry.base();
        linalg::nullspace(f, &self.check, self.word_len())
            .into_iter()
            .map(|v| self.word_from_entries(&v))
            .collect()
    }

    pub fn word_from_entries(&self, entries: &[Felt]) -> SrWord {
        let (n, m) = (self.geometry.n(), self.geometry.m());
        let f = self.geometry.base();
        SrWord {
            blocks: entries
                .chunks(n * m)
                .map(|c| MatFq::from_data(f, n, m, c.to_vec()).expect("shape"))
                .collect(),
        }
    }

    /// Word from `(position, matrix index)` pairs.
    pub(crate) fn word_from_ids(&self, word: &Word) -> SrWord {
        let g = &self.geometry;
        let mut w = g.zero_word();
        for &(pos, id) in word {
            w.blocks[pos] = MatFq::from_index(g.base(), g.n(), g.m(), id);
        }
        w
    }

    /// Enumeration space: every nonzero block matrix, grouped by rank.
    pub(crate) fn search_space(&self) -> Result<Space, SrError> {
        let g = &self.geometry;
        let count = (g.q()).checked_pow((g.n() * g.m()) as u32).unwrap_or(u64::MAX);
        if count > BLOCK_SPACE_CAP {
            return Err(SrError::BlockSpaceTooLarge(count));
        }
        let maxr = g.n().min(g.m());
        let mut classes: Vec<SymbolClass> = (1..=maxr).map(|r| (r, Vec::new())).collect();
        for id in 1..count {
            let mat = MatFq::from_index(g.base(), g.n(), g.m(), id);
            let r = mat.rank();
            classes[r - 1].1.push((id, mat.data().to_vec()));
        }
        Ok(Space::from_check(
            g.base(),
            &self.check,
            g.n() * g.m(),
            g.t(),
            &classes,
        )?)
    }

    /// sha256 over the geometry, the structure tag and the reduced parity check.
    pub fn fingerprint(&self) -> String {
        let g = &self.geometry;
        let mut h = Sha256::new();
        h.update(g.base().name().as_bytes());
        for x in [g.n(), g.m(), g.t()] {
            h.update((x as u64).to_le_bytes());
        }
        for row in g.codec().phi().matrix() {
            for &x in row {
                h.update(x.to_le_bytes());
            }
        }
        h.update(match self.structure {
            Structure::Components(_) => b"components",
            Structure::Plotkin(..) => b"plotkin\0\0\0",
        });
        for row in &self.check {
            for &x in row {
                h.update(x.to_le_bytes());
            }
        }
        hex::encode(h.finalize())
    }
}
