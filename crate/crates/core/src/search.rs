//! Layered enumeration of low-weight words by syndrome.
//!
//! A word is a set of (position, symbol) pairs. Symbols are grouped into weight
//! classes (nonzero field elements have weight 1 in the Hamming metric, an `n × m`
//! matrix of rank `r` has weight `r` in the sum-rank metric). Every pair has a
//! precomputed syndrome contribution packed into a [`Key`], and a word is a
//! codeword iff its contributions sum to zero.
//!
//! Enumeration order within a layer of total weight `w`: support size, then
//! supports in colex order, then weight compositions in lex order, then symbol
//! tuples in lex order (ascending symbol id). Supports are partitioned into units
//! by `(size, largest position)`; units are processed in order, so the first
//! witness and the candidate count up to it do not depend on parallelism.

use std::collections::HashMap;

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::gf::{Felt, Field};

pub(crate) type Key = u128;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SearchError {
    #[error("syndrome needs {lanes} base-{p} digits, more than a 128-bit key holds")]
    SyndromeTooWide { p: u32, lanes: usize },
    #[error("enumeration needs {needed} candidates but only {remaining} remain in the budget")]
    BudgetExceeded { needed: u128, remaining: u128 },
    #[error("coverage incomplete at radius cap {cap}")]
    CapReached { cap: usize },
}

/// Packing of an `F_p`-vector into a [`Key`], one lane per digit.
///
/// In characteristic 2 each lane is one bit and addition is XOR. Otherwise
/// lanes are `w` bits with `2^(w-1) >= p` and addition is lanewise mod `p`.
#[derive(Debug, Clone)]
pub(crate) struct KeyLayout {
    p: u32,
    width: u32,
    lanes: usize,
    high: Key,
    bias: Key,
}

impl KeyLayout {
    pub(crate) fn new(p: u32, lanes: usize) -> Result<Self, SearchError> {
        let width = if p == 2 { 1 } else { 1 + (32 - (p - 1).leading_zeros()) };
        if lanes * width as usize > 128 {
            return Err(SearchError::SyndromeTooWide { p, lanes });
        }
        let mut high = 0;
        let mut bias = 0;
        if p != 2 {
            let top = 1u128 << (width - 1);
            for l in 0..lanes {
                high |= top << (l as u32 * width);
                bias |= (top - p as u128) << (l as u32 * width);
            }
        }
        Ok(Self { p, width, lanes, high, bias })
    }

    #[inline]
    pub(crate) fn add(&self, a: Key, b: Key) -> Key {
        if self.p == 2 {
            return a ^ b;
        }
        let s = a + b;
        let flags = (s + self.bias) & self.high;
        s - (flags >> (self.width - 1)) * self.p as u128
    }

    pub(crate) fn neg(&self, a: Key) -> Key {
        if self.p == 2 {
            return a;
        }
        let digits = self.unpack(a);
        let neg: Vec<u32> = digits.iter().map(|&d| (self.p - d) % self.p).collect();
        self.pack(&neg)
    }

    pub(crate) fn pack(&self, digits: &[u32]) -> Key {
        debug_assert_eq!(digits.len(), self.lanes);
        digits
            .iter()
            .enumerate()
            .fold(0, |k, (l, &d)| k | (d as Key) << (l as u32 * self.width))
    }

    pub(crate) fn unpack(&self, key: Key) -> Vec<u32> {
        let mask = (1u128 << self.width) - 1;
        (0..self.lanes)
            .map(|l| ((key >> (l as u32 * self.width)) & mask) as u32)
            .collect()
    }

    /// The key read as a base-`p` integer, lane 0 least significant.
    pub(crate) fn dense(&self, key: Key) -> u64 {
        if self.p == 2 {
            return key as u64;
        }
        self.unpack(key).iter().rev().fold(0, |acc, &d| acc * self.p as u64 + d as u64)
    }

    /// Number of distinct syndromes, `p^lanes`.
    pub(crate) fn space_size(&self) -> u128 {
        (self.p as u128).saturating_pow(self.lanes as u32)
    }
}

/// Symbols and their syndrome contributions at every position.
pub(crate) struct Space {
    pub layout: KeyLayout,
    /// Weight of each class, ascending.
    pub weights: Vec<usize>,
    /// Symbol ids per class, ascending.
    pub ids: Vec<Vec<u64>>,
    /// `contrib[pos][class][k]` is the syndrome of symbol `ids[class][k]` at `pos`.
    pub contrib: Vec<Vec<Vec<Key>>>,
    /// Per position and class: syndrome -> smallest `k` producing it.
    lookup: Vec<Vec<HashMap<Key, u32>>>,
}

/// A word as `(position, symbol id)` pairs with ascending positions.
pub(crate) type Word = Vec<(usize, u64)>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum LayerOutcome {
    Empty { count: u128 },
    Witness { word: Word, count: u128 },
}

pub(crate) struct Coverage {
    /// First weight reaching each syndrome (dense index), `u8::MAX` if never.
    pub first_hit: Vec<u8>,
    pub radius: usize,
    pub count: u128,
    pub per_layer: Vec<u64>,
}

impl Coverage {
    pub(crate) fn digest(&self) -> String {
        hex::encode(Sha256::digest(&self.first_hit))
    }
}

#[derive(Clone, Copy)]
struct Unit {
    k: usize,
    top: usize,
}

fn binom(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// Colex successor of a sorted `k`-subset of `0..limit`; false when exhausted.
fn next_colex(set: &mut [usize], limit: usize) -> bool {
    for i in 0..set.len() {
        let bound = if i + 1 < set.len() { set[i + 1] } else { limit };
        if set[i] + 1 < bound {
            set[i] += 1;
            for (j, x) in set.iter_mut().enumerate().take(i) {
                *x = j;
            }
            return true;
        }
    }
    false
}

/// Symbols of one weight class: `(id, entries)` with entries over `F_q`.
pub(crate) type SymbolClass = (usize, Vec<(u64, Vec<Felt>)>);

impl Space {
    /// Space for an `F_q`-linear code given by a parity-check matrix over `F_q`
    /// whose columns come in blocks of `block` entries per position.
    pub(crate) fn from_check(
        field: &Field,
        check: &[Vec<Felt>],
        block: usize,
        positions: usize,
        classes: &[SymbolClass],
    ) -> Result<Self, SearchError> {
        let e = field.degree() as usize;
        let layout = KeyLayout::new(field.characteristic(), check.len() * e)?;
        let pack = |syn: &[Felt]| {
            let digits: Vec<u32> = syn.iter().flat_map(|&x| field.coords(x)).collect();
            layout.pack(&digits)
        };
        let contrib = (0..positions)
            .map(|pos| {
                let cols: Vec<Vec<Felt>> = (0..block)
                    .map(|b| check.iter().map(|row| row[pos * block + b]).collect())
                    .collect();
                classes
                    .iter()
                    .map(|(_, syms)| {
                        syms.iter()
                            .map(|(_, entries)| {
                                let mut syn = vec![0; check.len()];
                                for (col, &x) in cols.iter().zip(entries) {
                                    if x == 0 {
                                        continue;
                                    }
                                    for (s, &h) in syn.iter_mut().zip(col) {
                                        *s = field.add(*s, field.mul(h, x));
                                    }
                                }
                                pack(&syn)
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let weights = classes.iter().map(|c| c.0).collect();
        let ids = classes.iter().map(|c| c.1.iter().map(|s| s.0).collect()).collect();
        Ok(Self::new(layout, weights, ids, contrib))
    }

    pub(crate) fn new(
        layout: KeyLayout,
        weights: Vec<usize>,
        ids: Vec<Vec<u64>>,
        contrib: Vec<Vec<Vec<Key>>>,
    ) -> Self {
        let lookup = contrib
            .iter()
            .map(|classes| {
                classes
                    .iter()
                    .map(|keys| {
                        let mut map = HashMap::with_capacity(keys.len());
                        for (k, &key) in keys.iter().enumerate() {
                            map.entry(key).or_insert(k as u32);
                        }
                        map
                    })
                    .collect()
            })
            .collect();
        Self { layout, weights, ids, contrib, lookup }
    }

    pub(crate) fn positions(&self) -> usize {
        self.contrib.len()
    }

    pub(crate) fn max_weight(&self) -> usize {
        self.weights.last().copied().unwrap_or(0) * self.positions()
    }

    /// Class sequences of length `k` whose weights sum to `w`, in lex order.
    fn compositions(&self, k: usize, w: usize) -> Vec<Vec<usize>> {
        fn rec(s: &Space, k: usize, w: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if k == 0 {
                if w == 0 {
                    out.push(cur.clone());
                }
                return;
            }
            for (c, &wc) in s.weights.iter().enumerate() {
                if wc > w || w - wc > s.weights.last().copied().unwrap_or(0) * (k - 1) {
                    continue;
                }
                if w - wc < k - 1 {
                    continue;
                }
                cur.push(c);
                rec(s, k - 1, w - wc, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(self, k, w, &mut Vec::new(), &mut out);
        out
    }

    fn tuples_per_support(&self, comps: &[Vec<usize>]) -> u128 {
        comps
            .iter()
            .map(|c| c.iter().fold(1u128, |a, &ci| a.saturating_mul(self.ids[ci].len() as u128)))
            .fold(0u128, |a, b| a.saturating_add(b))
    }

    fn units(&self, w: usize) -> Vec<(Unit, u128, Vec<Vec<usize>>)> {
        let n = self.positions();
        let mut out = Vec::new();
        for k in 1..=w.min(n) {
            let comps = self.compositions(k, w);
            if comps.is_empty() {
                continue;
            }
            let per = self.tuples_per_support(&comps);
            for top in k - 1..n {
                let count = binom(top, k - 1).saturating_mul(per);
                out.push((Unit { k, top }, count, comps.clone()));
            }
        }
        out
    }

    /// Searches the weight-`w` layer for a word whose syndrome is zero.
    pub(crate) fn find_codeword(
        &self,
        w: usize,
        remaining: u128,
        parallel: bool,
    ) -> Result<LayerOutcome, SearchError> {
        let units = self.units(w);
        let total: u128 = units.iter().fold(0u128, |a, u| a.saturating_add(u.1));
        let mut spent: u128 = 0;
        let mut i = 0;
        while i < units.len() {
            // the longest run of units that fits in the budget
            let mut j = i;
            let mut run: u128 = 0;
            while j < units.len() && spent + run + units[j].1 <= remaining {
                run += units[j].1;
                j += 1;
            }
            if j == i {
                // the next unit only partly fits: run it alone, capped
                let cap = remaining - spent;
                let (unit, _, comps) = &units[i];
                return match self.run_unit(*unit, comps, Some(cap)) {
                    (Some(word), c) => Ok(LayerOutcome::Witness { word, count: spent + c }),
                    (None, _) => Err(SearchError::BudgetExceeded {
                        needed: total,
                        remaining,
                    }),
                };
            }
            let chunk = &units[i..j];
            let results: Vec<(Option<Word>, u128)> = if parallel {
                // hand out a few units at a time so early layers still exit early
                let width = rayon::current_num_threads().max(1) * 2;
                let mut res = Vec::with_capacity(chunk.len());
                for part in chunk.chunks(width) {
                    let r: Vec<_> = part
                        .par_iter()
                        .map(|(u, _, comps)| self.run_unit(*u, comps, None))
                        .collect();
                    let hit = r.iter().any(|x| x.0.is_some());
                    res.extend(r);
                    if hit {
                        break;
                    }
                }
                res
            } else {
                let mut res = Vec::new();
                for (u, _, comps) in chunk {
                    let r = self.run_unit(*u, comps, None);
                    let hit = r.0.is_some();
                    res.push(r);
                    if hit {
                        break;
                    }
                }
                res
            };
            for (word, c) in results {
                spent += c;
                if let Some(word) = word {
                    return Ok(LayerOutcome::Witness { word, count: spent });
                }
            }
            i = j;
        }
        Ok(LayerOutcome::Empty { count: spent })
    }

    /// First zero-syndrome word in a unit and the candidates examined up to it.
    /// With a cap, gives up (returning `None`) once the cap would be passed.
    fn run_unit(
        &self,
        unit: Unit,
        comps: &[Vec<usize>],
        cap: Option<u128>,
    ) -> (Option<Word>, u128) {
        let Unit { k, top } = unit;
        let mut subset: Vec<usize> = (0..k - 1).collect();
        let mut support = vec![0; k];
        let mut count: u128 = 0;
        let mut chosen = vec![0u32; k];
        loop {
            support[..k - 1].copy_from_slice(&subset);
            support[k - 1] = top;
            for comp in comps {
                if let Some(found) =
                    self.dfs(&support, comp, 0, 0, &mut chosen, &mut count, cap)
                {
                    if !found {
                        return (None, count);
                    }
                    let word = support
                        .iter()
                        .zip(comp)
                        .zip(&chosen)
                        .map(|((&p, &c), &j)| (p, self.ids[c][j as usize]))
                        .collect();
                    return (Some(word), count);
                }
            }
            if k == 1 || !next_colex(&mut subset, top) {
                break;
            }
        }
        (None, count)
    }

    /// `Some(true)` on a witness, `Some(false)` when the cap is hit, `None` when
    /// this branch is exhausted.
    #[allow(clippy::too_many_arguments)]
    fn dfs(
        &self,
        support: &[usize],
        comp: &[usize],
        depth: usize,
        acc: Key,
        chosen: &mut [u32],
        count: &mut u128,
        cap: Option<u128>,
    ) -> Option<bool> {
        let pos = support[depth];
        let class = comp[depth];
        if depth + 1 == support.len() {
            let len = self.ids[class].len() as u128;
            let hit = self.lookup[pos][class].get(&self.layout.neg(acc)).copied();
            if let Some(cap) = cap {
                let left = cap - *count;
                if let Some(j) = hit {
                    if j as u128 + 1 <= left {
                        *count += j as u128 + 1;
                        chosen[depth] = j;
                        return Some(true);
                    }
                }
                if len > left {
                    *count = cap;
                    return Some(false);
                }
            }
            if let Some(j) = hit {
                *count += j as u128 + 1;
                chosen[depth] = j;
                return Some(true);
            }
            *count += len;
            return None;
        }
        for (j, &c) in self.contrib[pos][class].iter().enumerate() {
            chosen[depth] = j as u32;
            let r = self.dfs(support, comp, depth + 1, self.layout.add(acc, c), chosen, count, cap);
            if r.is_some() {
                return r;
            }
        }
        None
    }

    /// Breadth-first syndrome coverage: layers of increasing weight until every
    /// syndrome is reached, recording the first weight that hits each one.
    pub(crate) fn cover(
        &self,
        cap: usize,
        budget: u128,
        parallel: bool,
    ) -> Result<Coverage, SearchError> {
        let size = self.layout.space_size();
        if size > budget || size > (1u128 << 34) {
            return Err(SearchError::BudgetExceeded { needed: size, remaining: budget });
        }
        let size = size as usize;
        let mut first_hit = vec![u8::MAX; size];
        first_hit[0] = 0;
        let mut covered = 1usize;
        let mut count: u128 = 1;
        let mut per_layer = vec![1u64];
        let mut w = 0;
        while covered < size {
            w += 1;
            if w > cap || w > self.max_weight() {
                return Err(SearchError::CapReached { cap });
            }
            let units = self.units(w);
            let layer: u128 = units.iter().fold(0u128, |a, u| a.saturating_add(u.1));
            if count.saturating_add(layer) > budget {
                return Err(SearchError::BudgetExceeded {
                    needed: count.saturating_add(layer),
                    remaining: budget,
                });
            }
            let words = size.div_ceil(64);
            let bits = if parallel {
                units
                    .par_iter()
                    .fold(
                        || vec![0u64; words],
                        |mut bits, (u, _, comps)| {
                            self.mark_unit(*u, comps, &mut bits);
                            bits
                        },
                    )
                    .reduce(
                        || vec![0u64; words],
                        |mut a, b| {
                            a.iter_mut().zip(&b).for_each(|(x, y)| *x |= y);
                            a
                        },
                    )
            } else {
                let mut bits = vec![0u64; words];
                for (u, _, comps) in &units {
                    self.mark_unit(*u, comps, &mut bits);
                }
                bits
            };
            let mut new = 0u64;
            for (idx, slot) in first_hit.iter_mut().enumerate() {
                if *slot == u8::MAX && bits[idx / 64] >> (idx % 64) & 1 == 1 {
                    *slot = w.min(254) as u8;
                    new += 1;
                }
            }
            covered += new as usize;
            count += layer;
            per_layer.push(new);
        }
        Ok(Coverage { first_hit, radius: w, count, per_layer })
    }

    fn mark_unit(&self, unit: Unit, comps: &[Vec<usize>], bits: &mut [u64]) {
        let Unit { k, top } = unit;
        let mut subset: Vec<usize> = (0..k - 1).collect();
        let mut support = vec![0; k];
        loop {
            support[..k - 1].copy_from_slice(&subset);
            support[k - 1] = top;
            for comp in comps {
                self.mark(&support, comp, 0, 0, bits);
            }
            if k == 1 || !next_colex(&mut subset, top) {
                break;
            }
        }
    }

    fn mark(&self, support: &[usize], comp: &[usize], depth: usize, acc: Key, bits: &mut [u64]) {
        let keys = &self.contrib[support[depth]][comp[depth]];
        if depth + 1 == support.len() {
            for &c in keys {
                let idx = self.layout.dense(self.layout.add(acc, c)) as usize;
                bits[idx / 64] |= 1 << (idx % 64);
            }
            return;
        }
        for &c in keys {
            self.mark(support, comp, depth + 1, self.layout.add(acc, c), bits);
        }
    }
}
