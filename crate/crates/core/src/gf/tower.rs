//! Subfield coordinates and `F_q`-linear embeddings between extensions of `F_q`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{linalg, Felt, Field, GfError};

/// Coordinates of `F_{q^n}` over a subfield `F_q` in the basis `1, θ, …, θ^{n-1}`,
/// where `θ` is the polynomial-basis generator of the extension (index `p`).
///
/// `F_q` is identified with a subfield of the extension through the canonical
/// inclusion, which sends the primitive element of `F_q` to the smallest root of
/// its minimal polynomial. For prime `q` the coordinates are simply the digits of
/// the canonical index.
#[derive(Debug, Clone)]
pub struct RelativeBasis {
    base: Arc<Field>,
    ext: Arc<Field>,
    n: usize,
    incl: Vec<Felt>,
    basis: Vec<Felt>,
    /// Inverse of the `F_p` matrix whose columns are `incl(p^k) θ^i`.
    to_digits: Option<Vec<Vec<Felt>>>,
}

impl RelativeBasis {
    pub fn new(base: &Arc<Field>, ext: &Arc<Field>) -> Result<Self, GfError> {
        if base.characteristic() != ext.characteristic() {
            return Err(GfError::CharacteristicMismatch);
        }
        let d = ext.subfield_degree(base.size() as u64)?;
        let n = (ext.degree() / d) as usize;
        let incl = inclusion_table(base, ext);
        let theta: Felt = if ext.degree() == 1 { 1 } else { ext.characteristic() };
        let basis: Vec<Felt> = (0..n).map(|i| ext.pow(theta, i as u64)).collect();
        let to_digits = if d == 1 {
            None
        } else {
            let fp = Field::get(ext.characteristic(), 1)?;
            let dim = ext.degree() as usize;
            let p = ext.characteristic();
            // column (i, k) = digits of incl(p^k) * θ^i
            let mut m = vec![vec![0; dim]; dim];
            for (i, &b) in basis.iter().enumerate() {
                for k in 0..d as usize {
                    let col = i * d as usize + k;
                    let v = ext.mul(incl[p.pow(k as u32) as usize], b);
                    for (r, digit) in ext.coords(v).into_iter().enumerate() {
                        m[r][col] = digit;
                    }
                }
            }
            Some(linalg::invert(&fp, &m).expect("relative basis is a basis"))
        };
        Ok(Self { base: base.clone(), ext: ext.clone(), n, incl, basis, to_digits })
    }

    pub fn base(&self) -> &Arc<Field> {
        &self.base
    }

    pub fn ext(&self) -> &Arc<Field> {
        &self.ext
    }

    /// `[ext : base]`.
    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &[Felt] {
        &self.basis
    }

    /// Image of a base-field element in the extension.
    #[inline]
    pub fn include(&self, c: Felt) -> Felt {
        self.incl[c as usize]
    }

    /// Coordinates over the base field (canonical base-field indices).
    pub fn to_coords(&self, x: Felt) -> Vec<Felt> {
        match &self.to_digits {
            None => self.ext.coords(x),
            Some(inv) => {
                let fp = Field::get(self.ext.characteristic(), 1).expect("prime field");
                let digits = linalg::mat_vec(&fp, inv, &self.ext.coords(x));
                let d = self.base.degree() as usize;
                digits.chunks(d).map(|c| self.base.from_coords(c)).collect()
            }
        }
    }

    pub fn from_coords(&self, coords: &[Felt]) -> Felt {
        coords.iter().zip(&self.basis).fold(0, |acc, (&c, &b)| {
            self.ext.add(acc, self.ext.mul(self.incl[c as usize], b))
        })
    }
}

/// Canonical inclusion `base → ext` as a lookup table indexed by base elements.
fn inclusion_table(base: &Field, ext: &Field) -> Vec<Felt> {
    if base.degree() == 1 {
        return (0..base.size()).collect();
    }
    let g = base.primitive();
    let target = base.min_poly(g);
    let order = base.size() as u64 - 1;
    let rho = ext
        .elements()
        .skip(1)
        .find(|&x| ext.order(x) == Some(order) && ext.min_poly(x) == target)
        .expect("subfield generator has a root in the extension");
    image_by_generator(base, ext, rho)
}

/// Table of the homomorphism sending the primitive element of `dom` to `rho`.
fn image_by_generator(dom: &Field, cod: &Field, rho: Felt) -> Vec<Felt> {
    let mut table = vec![0; dom.size() as usize];
    let mut y: Felt = 1;
    for k in 0..dom.size() as u64 - 1 {
        table[dom.exp(k) as usize] = y;
        y = cod.mul(y, rho);
    }
    table
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EmbeddingKind {
    /// Field homomorphism, available when the domain degree divides the codomain degree.
    Inclusion,
    /// `i`-th domain basis element to `i`-th codomain basis element.
    Prefix,
    /// User-supplied matrix.
    Explicit,
}

/// An injective `F_q`-linear map `F_{q^n} → F_{q^m}` with its `n × m` matrix over `F_q`.
///
/// Row `i` of the matrix holds the codomain coordinates of the image of the
/// `i`-th domain basis element.
#[derive(Debug, Clone)]
pub struct TowerMap {
    sub: RelativeBasis,
    sup: RelativeBasis,
    kind: EmbeddingKind,
    matrix: Vec<Vec<Felt>>,
    image: Vec<Felt>,
}

impl TowerMap {
    /// Subfield inclusion when `n | m`, otherwise the basis-prefix map.
    pub fn new(base: &Arc<Field>, sub: &Arc<Field>, sup: &Arc<Field>) -> Result<Self, GfError> {
        let (sub_rb, sup_rb) = Self::bases(base, sub, sup)?;
        if sup_rb.degree() % sub_rb.degree() == 0 {
            Ok(Self::inclusion(sub_rb, sup_rb))
        } else {
            Ok(Self::prefix_from(sub_rb, sup_rb))
        }
    }

    pub fn prefix(base: &Arc<Field>, sub: &Arc<Field>, sup: &Arc<Field>) -> Result<Self, GfError> {
        let (sub_rb, sup_rb) = Self::bases(base, sub, sup)?;
        Ok(Self::prefix_from(sub_rb, sup_rb))
    }

    pub fn from_matrix(
        base: &Arc<Field>,
        sub: &Arc<Field>,
        sup: &Arc<Field>,
        matrix: Vec<Vec<Felt>>,
    ) -> Result<Self, GfError> {
        let (sub_rb, sup_rb) = Self::bases(base, sub, sup)?;
        let (n, m) = (sub_rb.degree(), sup_rb.degree());
        if matrix.len() != n || matrix.iter().any(|r| r.len() != m) {
            return Err(GfError::MatrixShape {
                rows: matrix.len(),
                cols: matrix.first().map_or(0, |r| r.len()),
                n,
                m,
            });
        }
        if matrix.iter().flatten().any(|&c| c >= base.size()) {
            return Err(GfError::WrongField(base.size()));
        }
        let rank = linalg::rank(base, &matrix, m);
        if rank != n {
            return Err(GfError::NotInjective { rank, n });
        }
        let rows: Vec<Felt> = matrix.iter().map(|r| sup_rb.from_coords(r)).collect();
        let image = Self::linear_image(&sub_rb, &sup_rb, &rows);
        Ok(Self { sub: sub_rb, sup: sup_rb, kind: EmbeddingKind::Explicit, matrix, image })
    }

    fn bases(
        base: &Arc<Field>,
        sub: &Arc<Field>,
        sup: &Arc<Field>,
    ) -> Result<(RelativeBasis, RelativeBasis), GfError> {
        let sub_rb = RelativeBasis::new(base, sub)?;
        let sup_rb = RelativeBasis::new(base, sup)?;
        if sub_rb.degree() > sup_rb.degree() {
            return Err(GfError::DimensionMismatch { n: sub_rb.degree(), m: sup_rb.degree() });
        }
        Ok((sub_rb, sup_rb))
    }

    fn linear_image(sub: &RelativeBasis, sup: &RelativeBasis, rows: &[Felt]) -> Vec<Felt> {
        let f = sup.ext();
        sub.ext()
            .elements()
            .map(|x| {
                sub.to_coords(x)
                    .iter()
                    .zip(rows)
                    .fold(0, |acc, (&c, &r)| f.add(acc, f.mul(sup.include(c), r)))
            })
            .collect()
    }

    fn prefix_from(sub: RelativeBasis, sup: RelativeBasis) -> Self {
        let (n, m) = (sub.degree(), sup.degree());
        let matrix: Vec<Vec<Felt>> =
            (0..n).map(|i| (0..m).map(|j| Felt::from(i == j)).collect()).collect();
        let rows: Vec<Felt> = sup.basis()[..n].to_vec();
        let image = Self::linear_image(&sub, &sup, &rows);
        Self { sub, sup, kind: EmbeddingKind::Prefix, matrix, image }
    }

    fn inclusion(sub: RelativeBasis, sup: RelativeBasis) -> Self {
        let (dom, cod) = (sub.ext().clone(), sup.ext().clone());
        let g = dom.primitive();
        let target = dom.min_poly(g);
        let order = dom.size() as u64 - 1;
        let base_gen = sub.base().primitive();
        let image = cod
            .elements()
            .skip(1)
            .filter(|&x| cod.order(x) == Some(order) && cod.min_poly(x) == target)
            .map(|rho| image_by_generator(&dom, &cod, rho))
            // must fix F_q, i.e. commute with both inclusions of the base field
            .find(|img| img[sub.include(base_gen) as usize] == sup.include(base_gen))
            .expect("an F_q-linear field embedding exists when n | m");
        let matrix = sub.basis().iter().map(|&b| sup.to_coords(image[b as usize])).collect();
        Self { sub, sup, kind: EmbeddingKind::Inclusion, matrix, image }
    }

    pub fn kind(&self) -> EmbeddingKind {
        self.kind
    }

    pub fn matrix(&self) -> &[Vec<Felt>] {
        &self.matrix
    }

    pub fn domain(&self) -> &RelativeBasis {
        &self.sub
    }

    pub fn codomain(&self) -> &RelativeBasis {
        &self.sup
    }

    /// Rank of the matrix over `F_q`.
    pub fn rank(&self) -> usize {
        linalg::rank(self.sub.base(), &self.matrix, self.sup.degree())
    }

    pub fn embed(&self, x: Felt) -> Result<Felt, GfError> {
        self.image.get(x as usize).copied().ok_or(GfError::WrongField(x))
    }

    #[inline]
    pub(crate) fn embed_unchecked(&self, x: Felt) -> Felt {
        self.image[x as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32, e: u32) -> Arc<Field> {
        Field::get(p, e).unwrap()
    }

    #[test]
    fn identity_embedding() {
        let map = TowerMap::new(&f(2, 1), &f(2, 2), &f(2, 2)).unwrap();
        assert_eq!(map.kind(), EmbeddingKind::Inclusion);
        for x in 0..4 {
            assert_eq!(map.embed(x).unwrap(), x);
        }
        assert_eq!(map.matrix(), &[vec![1, 0], vec![0, 1]]);
    }

    #[test]
    fn f4_into_f16_by_order_search() {
        let f16 = f(2, 4);
        let map = TowerMap::new(&f(2, 1), &f(2, 2), &f16).unwrap();
        let w = map.embed(2).unwrap();
        // independent oracle: the elements of order 3 in F_16
        let order3: Vec<Felt> = (1..16).filter(|&x| f16.pow(x, 3) == 1 && x != 1).collect();
        assert!(order3.contains(&w));
        assert_eq!(f16.min_poly(w), vec![1, 1, 1]);
        assert_eq!(map.embed(1).unwrap(), 1);
        assert_eq!(map.embed(0).unwrap(), 0);
        assert_eq!(map.rank(), 2);
    }

    #[test]
    fn prefix_map_f4_to_f8() {
        let map = TowerMap::new(&f(2, 1), &f(2, 2), &f(2, 3)).unwrap();
        assert_eq!(map.kind(), EmbeddingKind::Prefix);
        assert_eq!(map.rank(), 2);
        let f8 = f(2, 3);
        for x in 0..4 {
            for y in 0..4 {
                let lhs = map.embed(x ^ y).unwrap();
                let rhs = f8.add(map.embed(x).unwrap(), map.embed(y).unwrap());
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn dimension_mismatch() {
        assert!(matches!(
            TowerMap::new(&f(2, 1), &f(2, 3), &f(2, 2)),
            Err(GfError::DimensionMismatch { n: 3, m: 2 })
        ));
    }

    #[test]
    fn inclusions_are_multiplicative() {
        for (base, sub, sup) in [((2, 1), (2, 2), (2, 4)), ((2, 1), (2, 3), (2, 6)), ((2, 2), (2, 4), (2, 8)), ((3, 1), (3, 2), (3, 4)), ((2, 1), (2, 2), (2, 6))] {
            let (bf, sf, tf) = (f(base.0, base.1), f(sub.0, sub.1), f(sup.0, sup.1));
            let map = TowerMap::new(&bf, &sf, &tf).unwrap();
            assert_eq!(map.kind(), EmbeddingKind::Inclusion);
            assert_eq!(map.rank(), map.domain().degree());
            for x in sf.elements() {
                for y in sf.elements() {
                    let lhs = map.embed(sf.mul(x, y)).unwrap();
                    let rhs = tf.mul(map.embed(x).unwrap(), map.embed(y).unwrap());
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn relative_coordinates_over_nonprime_base() {
        let (f4, f64_) = (f(2, 2), f(2, 6));
        let rb = RelativeBasis::new(&f4, &f64_).unwrap();
        assert_eq!(rb.degree(), 3);
        for x in f64_.elements() {
            let c = rb.to_coords(x);
            assert!(c.iter().all(|&v| v < 4));
            assert_eq!(rb.from_coords(&c), x);
        }
        // the inclusion fixes the subfield pointwise as a set
        for c in f4.elements() {
            assert!(f64_.in_subfield(rb.include(c), 4));
        }
    }

    #[test]
    fn explicit_matrix_checks_rank() {
        let err = TowerMap::from_matrix(&f(2, 1), &f(2, 2), &f(2, 3), vec![vec![1, 0, 0], vec![1, 0, 0]]);
        assert!(matches!(err, Err(GfError::NotInjective { rank: 1, n: 2 })));
        let ok = TowerMap::from_matrix(&f(2, 1), &f(2, 2), &f(2, 3), vec![vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        assert_eq!(ok.kind(), EmbeddingKind::Explicit);
        assert_eq!(ok.embed(1).unwrap(), 2);
    }
}
