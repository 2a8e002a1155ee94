use serde::Serialize;

use super::{CyclicError, LinearCode};
use crate::gf::Felt;
use crate::search::{LayerOutcome, SearchError, Space, SymbolClass};

/// Exhaustive evidence for the minimum Hamming distance of a linear code.
///
/// `distance` is set when a witness of that weight was found after every
/// lighter layer came up empty; otherwise the distance exceeds `searched`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HammingDistanceCertificate {
    pub code: String,
    pub distance: Option<usize>,
    pub searched: usize,
    pub witness: Option<Vec<Felt>>,
    pub candidates: u128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HammingCovering {
    pub code: String,
    pub radius: usize,
    pub syndromes: u64,
    pub per_weight: Vec<u64>,
    pub table_sha256: String,
    pub candidates: u128,
}

pub(crate) fn hamming_space(code: &LinearCode) -> Result<Space, SearchError> {
    let field = code.field();
    let class: SymbolClass = (1, (1..field.size()).map(|x| (x as u64, vec![x])).collect());
    Space::from_check(field, code.parity_check(), 1, code.length(), &[class])
}

/// Searches weights `1..=w_max` in order and stops at the first nonzero codeword.
pub fn min_distance_hamming(
    code: &LinearCode,
    w_max: usize,
    budget: u128,
    parallel: bool,
) -> Result<HammingDistanceCertificate, CyclicError> {
    let space = hamming_space(code)?;
    let mut spent: u128 = 0;
    for w in 1..=w_max.min(code.length()) {
        match space.find_codeword(w, budget - spent, parallel)? {
            LayerOutcome::Empty { count } => spent += count,
            LayerOutcome::Witness { word, count } => {
                let mut witness = vec![0; code.length()];
                for (pos, sym) in word {
                    witness[pos] = sym as Felt;
                }
                debug_assert!(code.is_member(&witness));
                return Ok(HammingDistanceCertificate {
                    code: code.fingerprint(),
                    distance: Some(w),
                    searched: w,
                    witness: Some(witness),
                    candidates: spent + count,
                });
            }
        }
    }
    Ok(HammingDistanceCertificate {
        code: code.fingerprint(),
        distance: None,
        searched: w_max.min(code.length()),
        witness: None,
        candidates: spent,
    })
}

/// Covering radius by syndrome coverage, aborting past weight `cap`.
pub fn covering_radius_hamming(
    code: &LinearCode,
    cap: usize,
    budget: u128,
    parallel: bool,
) -> Result<HammingCovering, CyclicError> {
    let space = hamming_space(code)?;
    let cov = space.cover(cap, budget, parallel)?;
    Ok(HammingCovering {
        code: code.fingerprint(),
        radius: cov.radius,
        syndromes: cov.first_hit.len() as u64,
        per_weight: cov.per_layer.clone(),
        table_sha256: cov.digest(),
        candidates: cov.count,
    })
}
