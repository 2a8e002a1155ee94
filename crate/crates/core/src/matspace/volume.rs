use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::MatError;

fn pow(q: u64, e: usize) -> BigUint {
    BigUint::from(q).pow(e as u32)
}

/// Number of `k`-dimensional subspaces of `F_q^n`.
pub fn gauss_binom(n: usize, k: usize, q: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let one = BigUint::one();
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= pow(q, n - i) - &one;
        den *= pow(q, i + 1) - &one;
    }
    num / den
}

/// Number of `n × m` matrices over `F_q` of rank exactly `r`.
pub fn rank_count(q: u64, n: usize, m: usize, r: usize) -> Result<BigUint, MatError> {
    let max = n.min(m);
    if r > max {
        return Err(MatError::RankOutOfRange { r, max });
    }
    let qm = pow(q, m);
    let mut acc = gauss_binom(n, r, q);
    for i in 0..r {
        acc *= &qm - pow(q, i);
    }
    Ok(acc)
}

/// `rank_count` for every rank `0..=min(n,m)`.
pub fn rank_census(q: u64, n: usize, m: usize) -> Vec<BigUint> {
    (0..=n.min(m))
        .map(|r| rank_count(q, n, m, r).expect("rank within range"))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VolumeQuery {
    pub q: u64,
    pub block_sizes: Vec<(usize, usize)>,
    pub radius: usize,
}

impl VolumeQuery {
    pub fn uniform(q: u64, t: usize, n: usize, m: usize, radius: usize) -> Self {
        Self { q, block_sizes: vec![(n, m); t], radius }
    }
}

/// Size of a sum-rank ball: the per-block rank censuses convolved and
/// truncated at total weight `radius`.
pub fn vol_sr(query: &VolumeQuery) -> BigUint {
    let r = query.radius;
    let mut dist = vec![BigUint::zero(); r + 1];
    dist[0] = BigUint::one();
    for &(n, m) in &query.block_sizes {
        let census = rank_census(query.q, n, m);
        let mut next = vec![BigUint::zero(); r + 1];
        for (w, a) in dist.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (k, c) in census.iter().enumerate() {
                if w + k > r {
                    break;
                }
                next[w + k] += a * c;
            }
        }
        dist = next;
    }
    dist.into_iter().sum()
}

/// `t(t−1)(q^s−1)^4 / (2(q−1)^2)`, a lower bound on the radius-2 ball with
/// `t` blocks of size `s × s`.
pub fn vol_sr_lower_bound(q: u64, s: usize, t: usize) -> BigRational {
    let pairs = BigUint::from(t as u64 * (t as u64).saturating_sub(1));
    let num = pairs * (pow(q, s) - BigUint::one()).pow(4);
    let den = BigUint::from(2u8) * BigUint::from(q - 1).pow(2);
    BigRational::new(num.into(), den.into())
}

/// `Σ_{i≤r} C(n,i)(q−1)^i`; radii past `n` give the whole space.
pub fn vol_hamming(q: u64, n: usize, r: usize) -> BigUint {
    let mut total = BigUint::zero();
    let mut binom = BigUint::one();
    let mut qpow = BigUint::one();
    for i in 0..=r.min(n) {
        total += &binom * &qpow;
        binom = binom * BigUint::from(n - i) / BigUint::from(i + 1);
        qpow *= BigUint::from(q - 1);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Field;
    use crate::matspace::MatFq;
    use num_traits::ToPrimitive;
    use proptest::prelude::*;

    fn n(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn gaussian_binomials() {
        assert_eq!(gauss_binom(5, 0, 3), n(1));
        assert_eq!(gauss_binom(2, 1, 2), n(3));
        assert_eq!(gauss_binom(3, 2, 2), n(7));
    }

    #[test]
    fn two_dim_subspaces_of_binary_cube() {
        // distinct row spaces of rank-2 2x3 binary matrices
        let f2 = Field::get(2, 1).unwrap();
        let mut spaces = std::collections::BTreeSet::new();
        for idx in 0..64 {
            let m = MatFq::from_index(&f2, 2, 3, idx);
            if m.rank() == 2 {
                spaces.insert(m.rref().0.to_rows());
            }
        }
        assert_eq!(spaces.len(), 7);
    }

    #[test]
    fn rank_counts() {
        assert_eq!(rank_count(2, 2, 2, 1).unwrap(), n(9));
        assert_eq!(rank_count(2, 3, 3, 1).unwrap(), n(49));
        assert_eq!(rank_count(2, 3, 3, 2).unwrap(), n(294));
        assert_eq!(rank_count(2, 3, 3, 3).unwrap(), n(168));
        assert_eq!(
            rank_count(2, 2, 3, 3),
            Err(MatError::RankOutOfRange { r: 3, max: 2 })
        );
    }

    #[test]
    fn census_sums_to_space_size() {
        for q in 2..=4u64 {
            for a in 1..=3 {
                for b in 1..=3 {
                    let total: BigUint = rank_census(q, a, b).into_iter().sum();
                    assert_eq!(total, pow(q, a * b));
                }
            }
        }
    }

    #[test]
    fn rank_one_closed_form() {
        for q in 2..=5u64 {
            for a in 1..=4 {
                for b in 1..=4 {
                    let expect = (pow(q, a) - 1u32) * (pow(q, b) - 1u32) / n(q - 1);
                    assert_eq!(rank_count(q, a, b, 1).unwrap(), expect);
                }
            }
        }
    }

    #[test]
    fn census_matches_enumeration_over_f3() {
        let f3 = Field::get(3, 1).unwrap();
        let mut census = vec![0u64; 3];
        for idx in 0..3u64.pow(6) {
            census[MatFq::from_index(&f3, 2, 3, idx).rank()] += 1;
        }
        let closed: Vec<u64> = rank_census(3, 2, 3).iter().map(|x| x.to_u64().unwrap()).collect();
        assert_eq!(census, closed);
    }

    #[test]
    fn sum_rank_volumes() {
        assert_eq!(vol_sr(&VolumeQuery::uniform(2, 4, 2, 2, 0)), n(1));
        assert_eq!(vol_sr(&VolumeQuery::uniform(2, 5, 2, 2, 1)), n(46));
        assert_eq!(vol_sr(&VolumeQuery::uniform(2, 15, 2, 2, 2)), n(8731));
        assert_eq!(vol_sr(&VolumeQuery::uniform(2, 5, 2, 2, 2)), n(886));
        assert_eq!(vol_sr(&VolumeQuery::uniform(2, 7, 3, 3, 1)), n(344));
        assert_eq!(vol_sr(&VolumeQuery::uniform(2, 7, 3, 3, 2)), n(52823));
    }

    #[test]
    fn lower_bound_values() {
        assert_eq!(vol_sr_lower_bound(2, 2, 15), BigRational::from_integer(8505.into()));
        assert_eq!(vol_sr_lower_bound(2, 3, 7), BigRational::from_integer(50421.into()));
        let exact = BigRational::from_integer(vol_sr(&VolumeQuery::uniform(2, 15, 2, 2, 2)).into());
        assert!(vol_sr_lower_bound(2, 2, 15) <= exact);
    }

    #[test]
    fn lower_bound_below_volume() {
        for q in 2..=4u64 {
            for s in 1..=3 {
                for t in 2..=8 {
                    let v = vol_sr(&VolumeQuery::uniform(q, t, s, s, 2));
                    assert!(vol_sr_lower_bound(q, s, t) <= BigRational::from_integer(v.into()));
                }
            }
        }
    }

    #[test]
    fn hamming_volumes() {
        assert_eq!(vol_hamming(4, 5, 1), n(16));
        assert_eq!(vol_hamming(4, 63, 2), n(17767));
        assert_eq!(vol_hamming(3, 26, 2), n(1353));
    }

    #[test]
    fn hamming_volume_by_enumeration() {
        let mut count = 0;
        for idx in 0..4u64.pow(6) {
            let mut x = idx;
            let mut wt = 0;
            for _ in 0..6 {
                wt += (x % 4 != 0) as u32;
                x /= 4;
            }
            count += (wt <= 2) as u64;
        }
        assert_eq!(vol_hamming(4, 6, 2), n(count));
    }

    /// Brute-force ball size: enumerate all words of the product space.
    fn brute_volume(q: u32, blocks: &[(usize, usize)], r: usize) -> u64 {
        let field = Field::get(q, 1).unwrap();
        let weights: Vec<Vec<usize>> = blocks
            .iter()
            .map(|&(a, b)| {
                (0..(q as u64).pow((a * b) as u32))
                    .map(|i| MatFq::from_index(&field, a, b, i).rank())
                    .collect()
            })
            .collect();
        fn rec(ws: &[Vec<usize>], left: usize) -> u64 {
            match ws.split_first() {
                None => 1,
                Some((first, rest)) => first
                    .iter()
                    .filter(|&&w| w <= left)
                    .map(|&w| rec(rest, left - w))
                    .sum(),
            }
        }
        rec(&weights, r)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn volume_matches_brute_force(
            q in prop::sample::select(vec![2u32, 3]),
            blocks in prop::collection::vec((1usize..=3, 1usize..=3), 1..=3),
            r in 0usize..=3,
        ) {
            // keep each block space enumerable
            prop_assume!(blocks.iter().all(|&(a, b)| (q as u64).pow((a * b) as u32) <= 729));
            let query = VolumeQuery { q: q as u64, block_sizes: blocks.clone(), radius: r };
            prop_assert_eq!(vol_sr(&query), n(brute_volume(q, &blocks, r)));
        }

        #[test]
        fn unit_blocks_give_hamming_volume(q in 2u64..=7, len in 1usize..=12, r in 0usize..=12) {
            prop_assume!(r <= len);
            let query = VolumeQuery::uniform(q, len, 1, 1, r);
            prop_assert_eq!(vol_sr(&query), vol_hamming(q, len, r));
        }
    }
}
