//! Exact arithmetic in `F_{p^e}` with log/antilog tables.
//!
//! Elements are canonical indices: the element `c_0 + c_1 α + … + c_{e-1} α^{e-1}`
//! (coordinates over `F_p` in the polynomial basis) has index `Σ c_i p^i`. So
//! `0` is zero, `1` is one and the prime subfield is `0..p`.
//!
//! The default modulus for `(p, e)` is the lexicographically smallest primitive
//! polynomial of degree `e` (coefficients compared low-degree-first), which makes
//! `α` (index `p`) a generator of the multiplicative group. Fields are cached so
//! every caller sees the same `Arc<Field>` for a given `(p, e)`.

mod poly;
pub(crate) mod linalg;
mod tower;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

pub use tower::{EmbeddingKind, RelativeBasis, TowerMap};

/// Canonical index of a field element.
pub type Felt = u32;

/// Largest field size constructed unless the caller raises it.
pub const DEFAULT_FIELD_CAP: u64 = 1 << 20;

/// Odd-characteristic fields up to this size get a full addition table.
const ADD_TABLE_LIMIT: u32 = 729;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GfError {
    #[error("characteristic {0} is not prime")]
    NonPrimeCharacteristic(u32),
    #[error("field {p}^{e} exceeds the size cap {cap}")]
    FieldTooLarge { p: u32, e: u32, cap: u64 },
    #[error("degree must be positive")]
    ZeroDegree,
    #[error("modulus {0:?} is not a monic irreducible polynomial of the requested degree")]
    BadModulus(Vec<u32>),
    #[error("{q} is not the size of a subfield of F_{size}")]
    NotASubfield { q: u64, size: u32 },
    #[error("domain degree {n} exceeds codomain degree {m}")]
    DimensionMismatch { n: usize, m: usize },
    #[error("element {0} does not belong to the domain field")]
    WrongField(Felt),
    #[error("fields do not share a characteristic")]
    CharacteristicMismatch,
    #[error("embedding matrix has rank {rank}, expected {n}")]
    NotInjective { rank: usize, n: usize },
    #[error("embedding matrix has shape {rows}x{cols}, expected {n}x{m}")]
    MatrixShape { rows: usize, cols: usize, n: usize, m: usize },
    #[error("cannot parse field name {0:?}; expected \"p^e\"")]
    BadFieldName(String),
}

/// A finite field `F_{p^e}` together with its arithmetic tables.
pub struct Field {
    p: u32,
    e: u32,
    size: u32,
    modulus: Vec<u32>,
    primitive: Felt,
    /// `exp[k] = g^k` for `k < 2(size-1)`, doubled to skip a reduction.
    exp: Vec<Felt>,
    log: Vec<u32>,
    neg: Vec<Felt>,
    add_table: Option<Vec<Felt>>,
    pow_p: Vec<u32>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{} (modulus {:?})", self.p, self.e, self.modulus)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.modulus == other.modulus
    }
}

impl Eq for Field {}

fn cache() -> &'static Mutex<HashMap<(u32, u32), Arc<Field>>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), Arc<Field>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl Field {
    /// The canonical field for `(p, e)`, shared through a process-wide cache.
    pub fn get(p: u32, e: u32) -> Result<Arc<Field>, GfError> {
        Self::get_capped(p, e, DEFAULT_FIELD_CAP)
    }

    pub fn get_capped(p: u32, e: u32, cap: u64) -> Result<Arc<Field>, GfError> {
        if let Some(f) = cache().lock().unwrap().get(&(p, e)) {
            return Ok(f.clone());
        }
        let field = Arc::new(Self::make(p, e, cap)?);
        let mut guard = cache().lock().unwrap();
        Ok(guard.entry((p, e)).or_insert(field).clone())
    }

    /// Canonical construction without the cache.
    pub fn make(p: u32, e: u32, cap: u64) -> Result<Field, GfError> {
        Self::check_size(p, e, cap)?;
        if e == 1 {
            // prime field: elements are residues, the modulus is only nominal
            return Ok(Self::from_modulus_unchecked(p, vec![0, 1]));
        }
        let modulus = smallest_primitive(p, e);
        Ok(Self::from_modulus_unchecked(p, modulus))
    }

    /// A field with an explicitly supplied modulus (monic, irreducible, low-degree-first).
    pub fn with_modulus(p: u32, modulus: Vec<u32>) -> Result<Field, GfError> {
        let e = poly::degree(&modulus).unwrap_or(0) as u32;
        Self::check_size(p, e, DEFAULT_FIELD_CAP)?;
        if modulus.len() != e as usize + 1
            || modulus[e as usize] != 1
            || modulus.iter().any(|&c| c >= p)
            || !poly::is_irreducible(&modulus, p)
        {
            return Err(GfError::BadModulus(modulus));
        }
        if e == 1 {
            return Ok(Self::from_modulus_unchecked(p, vec![0, 1]));
        }
        Ok(Self::from_modulus_unchecked(p, modulus))
    }

    /// Parses names of the form `"p^e"`.
    pub fn parse(name: &str) -> Result<Arc<Field>, GfError> {
        let bad = || GfError::BadFieldName(name.to_string());
        let (p, e) = name.trim().split_once('^').ok_or_else(bad)?;
        let p: u32 = p.trim().parse().map_err(|_| bad())?;
        let e: u32 = e.trim().parse().map_err(|_| bad())?;
        Self::get(p, e)
    }

    /// The field of size `q`, which must be a prime power.
    pub fn of_size(q: u64) -> Result<Arc<Field>, GfError> {
        let (p, e) = prime_power(q).ok_or(GfError::NonPrimeCharacteristic(q as u32))?;
        Self::get(p, e)
    }

    fn check_size(p: u32, e: u32, cap: u64) -> Result<(), GfError> {
        if !poly::is_prime(p) {
            return Err(GfError::NonPrimeCharacteristic(p));
        }
        if e == 0 {
            return Err(GfError::ZeroDegree);
        }
        match (p as u64).checked_pow(e) {
            Some(s) if s <= cap && s <= u32::MAX as u64 => Ok(()),
            _ => Err(GfError::FieldTooLarge { p, e, cap }),
        }
    }

    fn from_modulus_unchecked(p: u32, modulus: Vec<u32>) -> Field {
        let e = (modulus.len() - 1) as u32;
        let size = p.pow(e);
        let pow_p: Vec<u32> = (0..e).map(|i| p.pow(i)).collect();
        let neg: Vec<Felt> = (0..size)
            .map(|x| {
                let mut out = 0;
                let mut v = x;
                for &w in &pow_p {
                    let d = v % p;
                    v /= p;
                    out += ((p - d) % p) * w;
                }
                out
            })
            .collect();
        let mut field = Field {
            p,
            e,
            size,
            modulus,
            primitive: 0,
            exp: Vec::new(),
            log: Vec::new(),
            neg,
            add_table: None,
            pow_p,
        };
        if p != 2 && size <= ADD_TABLE_LIMIT {
            let mut t = vec![0; (size * size) as usize];
            for a in 0..size {
                for b in 0..size {
                    t[(a * size + b) as usize] = field.add_digits(a, b);
                }
            }
            field.add_table = Some(t);
        }
        field.build_tables();
        field
    }

    fn poly_of(&self, x: Felt) -> Vec<u32> {
        self.coords(x)
    }

    fn build_tables(&mut self) {
        let order = (self.size - 1) as usize;
        let modulus = self.modulus.clone();
        let p = self.p;
        let step: Box<dyn Fn(&Field, Felt, Felt) -> Felt> = if self.e == 1 {
            Box::new(|f: &Field, x, g| ((x as u64 * g as u64) % f.p as u64) as Felt)
        } else {
            Box::new(move |f: &Field, x, g| {
                let prod = poly::mulmod(&f.poly_of(x), &f.poly_of(g), &modulus, p);
                f.from_coords(&prod)
            })
        };
        // smallest element of full multiplicative order
        let factors = poly::prime_factors(order as u64);
        let generator = (1..self.size)
            .find(|&g| {
                if order == 1 {
                    return true;
                }
                let pw = |k: u64| {
                    let mut acc: Felt = 1;
                    let mut base = g;
                    let mut k = k;
                    while k > 0 {
                        if k & 1 == 1 {
                            acc = step(self, acc, base);
                        }
                        base = step(self, base, base);
                        k >>= 1;
                    }
                    acc
                };
                factors.iter().all(|&r| pw(order as u64 / r) != 1)
            })
            .expect("a finite field has a primitive element");
        let mut exp = vec![0 as Felt; 2 * order];
        let mut log = vec![0u32; self.size as usize];
        let mut x: Felt = 1;
        for (k, slot) in exp.iter_mut().take(order).enumerate() {
            *slot = x;
            log[x as usize] = k as u32;
            x = step(self, x, generator);
        }
        for k in 0..order {
            exp[order + k] = exp[k];
        }
        self.exp = exp;
        self.log = log;
        self.primitive = generator;
    }

    fn add_digits(&self, a: Felt, b: Felt) -> Felt {
        let p = self.p;
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        for &w in &self.pow_p {
            out += ((a % p + b % p) % p) * w;
            a /= p;
            b /= p;
        }
        out
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    /// Modulus coefficients, low-degree-first, monic.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn name(&self) -> String {
        format!("{}^{}", self.p, self.e)
    }

    /// The canonical primitive element (the root `α` of the default modulus).
    pub fn primitive(&self) -> Felt {
        self.primitive
    }

    pub fn elements(&self) -> std::ops::Range<Felt> {
        0..self.size
    }

    #[inline]
    pub fn add(&self, a: Felt, b: Felt) -> Felt {
        if self.p == 2 {
            a ^ b
        } else if let Some(t) = &self.add_table {
            t[(a * self.size + b) as usize]
        } else {
            self.add_digits(a, b)
        }
    }

    #[inline]
    pub fn neg(&self, a: Felt) -> Felt {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: Felt, b: Felt) -> Felt {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Felt, b: Felt) -> Felt {
        if a == 0 || b == 0 {
            0
        } else {
            self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: Felt) -> Option<Felt> {
        if a == 0 {
            return None;
        }
        let order = self.size - 1;
        Some(self.exp[((order - self.log[a as usize]) % order) as usize])
    }

    pub fn div(&self, a: Felt, b: Felt) -> Option<Felt> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, a: Felt, k: u64) -> Felt {
        if k == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let order = (self.size - 1) as u64;
        let l = (self.log[a as usize] as u64 * (k % order)) % order;
        self.exp[l as usize]
    }

    /// `g^k` for the canonical primitive element `g`.
    pub fn exp(&self, k: u64) -> Felt {
        self.exp[(k % (self.size as u64 - 1)) as usize]
    }

    pub fn log(&self, a: Felt) -> Option<u32> {
        (a != 0).then(|| self.log[a as usize])
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: Felt) -> Option<u64> {
        let order = (self.size - 1) as u64;
        self.log(a).map(|l| order / gcd(order, l as u64))
    }

    /// Coordinates over `F_p` in the polynomial basis.
    pub fn coords(&self, x: Felt) -> Vec<u32> {
        let mut v = x;
        (0..self.e)
            .map(|_| {
                let d = v % self.p;
                v /= self.p;
                d
            })
            .collect()
    }

    /// Inverse of [`Field::coords`]. Missing trailing coordinates are zero.
    pub fn from_coords(&self, coords: &[u32]) -> Felt {
        coords
            .iter()
            .take(self.e as usize)
            .zip(&self.pow_p)
            .map(|(&c, &w)| (c % self.p) * w)
            .sum()
    }

    /// `x^{q^i}` where `q` must be the size of a subfield.
    pub fn frobenius(&self, x: Felt, i: u32, q: u64) -> Result<Felt, GfError> {
        let d = self.subfield_degree(q)?;
        if x == 0 {
            return Ok(0);
        }
        let order = (self.size - 1) as u64;
        // q^i mod (size - 1), with q^e ≡ 1 so only i mod (e/d) matters
        let shift = (i as u64 * d as u64) % self.e as u64;
        let exponent = poly::pow_mod(self.p as u64, shift, order);
        Ok(self.pow(x, exponent))
    }

    /// Degree `d` with `p^d = q`, provided it divides `e`.
    pub fn subfield_degree(&self, q: u64) -> Result<u32, GfError> {
        let err = GfError::NotASubfield { q, size: self.size };
        let (p, d) = prime_power(q).ok_or_else(|| err.clone())?;
        if p != self.p || self.e % d != 0 {
            return Err(err);
        }
        Ok(d)
    }

    /// Minimal polynomial over `F_p`, monic, low-degree-first.
    pub fn min_poly(&self, x: Felt) -> Vec<u32> {
        let mut conj = vec![x];
        let mut y = self.pow(x, self.p as u64);
        while y != x {
            conj.push(y);
            y = self.pow(y, self.p as u64);
        }
        // Π (X - c) with coefficients in the field; they land in F_p
        let mut acc: Vec<Felt> = vec![1];
        for c in conj {
            let mut next = vec![0; acc.len() + 1];
            for (k, &a) in acc.iter().enumerate() {
                next[k + 1] = self.add(next[k + 1], a);
                next[k] = self.sub(next[k], self.mul(a, c));
            }
            acc = next;
        }
        debug_assert!(acc.iter().all(|&c| c < self.p));
        acc
    }

    /// Whether `x` lies in the subfield of size `q`.
    pub fn in_subfield(&self, x: Felt, q: u64) -> bool {
        x == 0 || self.pow(x, q) == x
    }
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// `Some((p, e))` when `q = p^e` with `p` prime.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut e = 0;
    let mut v = q;
    while v % p == 0 {
        v /= p;
        e += 1;
    }
    (v == 1 && p <= u32::MAX as u64).then_some((p as u32, e))
}

fn smallest_primitive(p: u32, e: u32) -> Vec<u32> {
    // ascending in the order that compares the constant term first
    let count = (p as u64).pow(e);
    for idx in 0..count {
        let mut f = vec![0u32; e as usize + 1];
        let mut v = idx;
        for k in (0..e as usize).rev() {
            f[k] = (v % p as u64) as u32;
            v /= p as u64;
        }
        f[e as usize] = 1;
        if f[0] != 0 && poly::is_primitive(&f, p) {
            return f;
        }
    }
    unreachable!("primitive polynomials exist in every degree")
}
