use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{info_cyclic, info_plain, parity_info, trivial_info, ComponentInfo, FamilyError};
use crate::cyclic::{
    covering_radius_hamming, cyclic_make, hamming_code_make, min_distance_hamming, CosetTable,
    CyclicCode, CyclicError, HammingCovering, HammingDistanceCertificate, LinearCode,
};
use crate::gf::{Felt, Field};
use crate::search::SearchError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Special {
    Parity,
    Trivial,
    Zero,
}

/// A Hamming-metric code given in a config or descriptor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ExternalCode {
    Cyclic {
        field: String,
        length: usize,
        defining_set: Vec<usize>,
    },
    Generator {
        field: String,
        length: usize,
        generator: Vec<Vec<Felt>>,
    },
    ParityCheck {
        field: String,
        length: usize,
        parity_check: Vec<Vec<Felt>>,
    },
    Hamming {
        field: String,
        hamming_redundancy: usize,
    },
    Special {
        field: String,
        length: usize,
        special: Special,
    },
}

impl ExternalCode {
    pub fn special(field: &Field, length: usize, special: Special) -> Self {
        ExternalCode::Special { field: field.name(), length, special }
    }

    fn field(&self) -> Result<Arc<Field>, FamilyError> {
        let name = match self {
            ExternalCode::Cyclic { field, .. }
            | ExternalCode::Generator { field, .. }
            | ExternalCode::ParityCheck { field, .. }
            | ExternalCode::Hamming { field, .. }
            | ExternalCode::Special { field, .. } => field,
        };
        Ok(Field::parse(name)?)
    }

    pub fn build(&self) -> Result<LinearCode, FamilyError> {
        Ok(self.build_with_info(0)?.0)
    }

    pub(crate) fn build_with_info(&self, index: usize) -> Result<(LinearCode, ComponentInfo), FamilyError> {
        let f = self.field()?;
        Ok(match self {
            ExternalCode::Cyclic { length, defining_set, .. } => {
                let c = cyclic_make(*length, &f, defining_set)?;
                let info = info_cyclic(index, &c);
                (c.into_code(), info)
            }
            ExternalCode::Generator { length, generator, .. } => {
                let c = LinearCode::from_generator(&f, *length, generator)?;
                let info = info_plain(index, "external", &c, None);
                (c, info)
            }
            ExternalCode::ParityCheck { length, parity_check, .. } => {
                let c = LinearCode::from_parity_check(&f, *length, parity_check.clone())?;
                let info = info_plain(index, "external", &c, None);
                (c, info)
            }
            ExternalCode::Hamming { hamming_redundancy, .. } => {
                let c = hamming_code_make(&f, *hamming_redundancy)?;
                let info = info_plain(index, "hamming", &c, Some(3));
                (c, info)
            }
            ExternalCode::Special { length, special, .. } => match special {
                Special::Parity => {
                    let c = LinearCode::parity(&f, *length);
                    let info = parity_info(index, &c);
                    (c, info)
                }
                Special::Trivial => {
                    let c = LinearCode::trivial(&f, *length);
                    let info = trivial_info(index, &c);
                    (c, info)
                }
                Special::Zero => {
                    let c = LinearCode::zero(&f, *length);
                    let info = info_plain(index, "zero", &c, None);
                    (c, info)
                }
            },
        })
    }

    pub fn summary(&self) -> String {
        match self {
            ExternalCode::Cyclic { field, length, defining_set } => {
                format!("cyclic(n={length}, F_{field}, T⊇{defining_set:?})")
            }
            ExternalCode::Generator { field, length, generator } => {
                format!("generator(n={length}, F_{field}, {} rows)", generator.len())
            }
            ExternalCode::ParityCheck { field, length, parity_check } => {
                format!("parity-check(n={length}, F_{field}, {} rows)", parity_check.len())
            }
            ExternalCode::Hamming { field, hamming_redundancy } => {
                format!("hamming(F_{field}, u={hamming_redundancy})")
            }
            ExternalCode::Special { field, length, special } => {
                format!("{special:?}(n={length}, F_{field})").to_lowercase()
            }
        }
    }
}

/// Distance and covering-radius certificates for a quaternary input code.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InputEvidence {
    pub distance: HammingDistanceCertificate,
    pub covering: HammingCovering,
}

/// Certifies `d = 4` and `R_H = 2`; anything else is refused.
pub fn verify_input(code: &LinearCode, budget: u128) -> Result<InputEvidence, FamilyError> {
    let distance = min_distance_hamming(code, 4, budget, true)?;
    if distance.distance != Some(4) {
        let got = match distance.distance {
            Some(d) => format!("minimum distance {d}"),
            None => "minimum distance above 4".to_string(),
        };
        return Err(FamilyError::InputNotVerified(format!("{got}, need 4")));
    }
    let covering = match covering_radius_hamming(code, 2, budget, true) {
        Ok(c) => c,
        Err(CyclicError::Search(SearchError::CapReached { .. })) => {
            return Err(FamilyError::InputNotVerified("covering radius above 2".into()))
        }
        Err(e) => return Err(e.into()),
    };
    if covering.radius != 2 {
        return Err(FamilyError::InputNotVerified(format!(
            "covering radius {}, need 2",
            covering.radius
        )));
    }
    Ok(InputEvidence { distance, covering })
}

/// The first cyclic code over `F_4` of odd length `≤ max_length` that certifies
/// `d = 4` and `R_H = 2`. Lengths ascend; defining sets run through subsets of
/// the coset table in binary order.
pub fn find_quaternary_input(
    max_length: usize,
    budget: u128,
) -> Result<(CyclicCode, InputEvidence), FamilyError> {
    let f4 = Field::get(2, 2)?;
    for n in (3..=max_length).step_by(2) {
        let table = CosetTable::new(n, 4)?;
        let k = table.cosets.len();
        for mask in 1u64..(1u64 << k) - 1 {
            let reps: Vec<usize> =
                (0..k).filter(|i| mask >> i & 1 == 1).map(|i| table.cosets[i][0]).collect();
            let c = cyclic_make(n, &f4, &reps)?;
            // d = 4 needs codimension at least 3
            if c.code().codimension() < 3 || c.dimension() < 1 {
                continue;
            }
            match verify_input(c.code(), budget) {
                Ok(evidence) => return Ok((c, evidence)),
                Err(FamilyError::InputNotVerified(_)) => continue,
                Err(e) => return Err(e),
            }
        }
    }
    Err(FamilyError::InputNotVerified(format!(
        "no cyclic quaternary code of odd length ≤ {max_length} has d = 4 and covering radius 2"
    )))
}
