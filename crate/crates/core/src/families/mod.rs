//! Builders for the code families, each paired with the parameters claimed for it.
//!
//! Builders never refuse a construction because an advisory condition fails;
//! they attach the evaluated condition and let the certifier decide.

mod external;

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::certify::Classification;
use crate::cyclic::{
    bch_designed_distance, boston_check, cyclic_make, hamming_code_make, ht_bound, CyclicError,
    LinearCode,
};
use crate::gf::{EmbeddingKind, Field, GfError};
use crate::srspace::{Geometry, PhiSpec, SrError, SrWord, SumRankCode};

pub use external::{find_quaternary_input, verify_input, ExternalCode, InputEvidence};

pub const DEFAULT_EPSILON: f64 = 0.01;

#[derive(Debug, Error)]
pub enum FamilyError {
    #[error("{divisor} does not divide {value}")]
    BadDivisor { divisor: u64, value: u64 },
    #[error("alphabet size {0} is not supported by this family")]
    UnsupportedAlphabet(u64),
    #[error("parameter {name}: {reason}")]
    BadParameter { name: &'static str, reason: String },
    #[error("input code not verified: {0}")]
    InputNotVerified(String),
    #[error("the two halves of a Plotkin sum must be sum-rank codes on one geometry")]
    PlotkinMismatch,
    #[error(transparent)]
    Cyclic(#[from] CyclicError),
    #[error(transparent)]
    Sr(#[from] SrError),
    #[error(transparent)]
    Field(#[from] GfError),
}

fn one() -> u64 {
    1
}

fn eps() -> f64 {
    DEFAULT_EPSILON
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Thm31Params {
    pub q: u64,
    pub m: u32,
    #[serde(default = "one")]
    pub lambda: u64,
    #[serde(default = "eps")]
    pub epsilon: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Thm32Params {
    pub q: u64,
    pub m: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Thm41Params {
    pub q: u64,
    pub s: usize,
    pub m: u32,
    #[serde(default = "one")]
    pub lambda: u64,
    #[serde(default = "eps")]
    pub epsilon: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Cor41Params {
    pub q: u64,
    pub s1: usize,
    pub s2: usize,
    pub m: u32,
    #[serde(default = "one")]
    pub lambda: u64,
    #[serde(default = "eps")]
    pub epsilon: f64,
    #[serde(default)]
    pub phi: PhiSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Thm51Params {
    pub q: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Thm61Params {
    pub q: u64,
    pub m: usize,
    pub u: usize,
    #[serde(default)]
    pub phi: PhiSpec,
}

fn default_max_length() -> usize {
    21
}

fn default_input_budget() -> u128 {
    100_000_000
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Thm71Params {
    /// Quaternary input code; when absent, the shortest cyclic one is searched for.
    #[serde(default)]
    pub c0: Option<ExternalCode>,
    #[serde(default = "default_max_length")]
    pub max_length: usize,
    #[serde(default = "default_input_budget")]
    pub input_budget: u128,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SrParams {
    pub q: u64,
    pub n: usize,
    pub m: usize,
    pub t: usize,
    #[serde(default)]
    pub phi: PhiSpec,
    pub components: Vec<ExternalCode>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlotkinParams {
    pub first: Box<FamilySpec>,
    pub second: Box<FamilySpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Cor81Params {
    pub q: u64,
    pub s: usize,
    pub m: u32,
}

/// A family and its parameters, as named in configs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", deny_unknown_fields)]
pub enum FamilySpec {
    #[serde(rename = "THM31")]
    Thm31(Thm31Params),
    #[serde(rename = "THM32")]
    Thm32(Thm32Params),
    #[serde(rename = "THM41")]
    Thm41(Thm41Params),
    #[serde(rename = "COR41")]
    Cor41(Cor41Params),
    #[serde(rename = "THM51")]
    Thm51(Thm51Params),
    #[serde(rename = "THM61")]
    Thm61(Thm61Params),
    #[serde(rename = "THM71")]
    Thm71(Thm71Params),
    #[serde(rename = "SR")]
    Sr(SrParams),
    #[serde(rename = "PLOTKIN")]
    Plotkin(PlotkinParams),
    #[serde(rename = "COR81")]
    Cor81(Cor81Params),
}

impl FamilySpec {
    pub fn tag(&self) -> &'static str {
        match self {
            FamilySpec::Thm31(_) => "THM31",
            FamilySpec::Thm32(_) => "THM32",
            FamilySpec::Thm41(_) => "THM41",
            FamilySpec::Cor41(_) => "COR41",
            FamilySpec::Thm51(_) => "THM51",
            FamilySpec::Thm61(_) => "THM61",
            FamilySpec::Thm71(_) => "THM71",
            FamilySpec::Sr(_) => "SR",
            FamilySpec::Plotkin(_) => "PLOTKIN",
            FamilySpec::Cor81(_) => "COR81",
        }
    }

    /// Sort key `(q, s, m, λ)`; absent parameters count as 0.
    pub fn sort_key(&self) -> (u64, u64, u64, u64) {
        match self {
            FamilySpec::Thm31(p) => (p.q, 1, p.m as u64, p.lambda),
            FamilySpec::Thm32(p) => (p.q, 1, p.m as u64, 1),
            FamilySpec::Thm41(p) => (p.q, p.s as u64, p.m as u64, p.lambda),
            FamilySpec::Cor41(p) => (p.q, p.s1 as u64, p.m as u64, p.lambda),
            FamilySpec::Thm51(p) => (p.q, 2, 0, 1),
            FamilySpec::Thm61(p) => (p.q, 2, p.m as u64, 1),
            FamilySpec::Thm71(_) => (2, 2, 2, 1),
            FamilySpec::Sr(p) => (p.q, p.n as u64, p.m as u64, 0),
            FamilySpec::Plotkin(p) => p.first.sort_key(),
            FamilySpec::Cor81(p) => (p.q, p.s as u64, p.m as u64, 1),
        }
    }

    /// Compact parameter string, e.g. `q=2 s=3 m=1 λ=1`.
    pub fn describe(&self) -> String {
        match self {
            FamilySpec::Thm31(p) => format!("q={} m={} λ={}", p.q, p.m, p.lambda),
            FamilySpec::Thm32(p) => format!("q={} m={}", p.q, p.m),
            FamilySpec::Thm41(p) => format!("q={} s={} m={} λ={}", p.q, p.s, p.m, p.lambda),
            FamilySpec::Cor41(p) => {
                format!("q={} s1={} s2={} m={} λ={}", p.q, p.s1, p.s2, p.m, p.lambda)
            }
            FamilySpec::Thm51(p) => format!("q={}", p.q),
            FamilySpec::Thm61(p) => format!("q={} m={} u={}", p.q, p.m, p.u),
            FamilySpec::Thm71(p) => match &p.c0 {
                Some(c) => format!("c0={}", c.summary()),
                None => format!("c0=search(t≤{})", p.max_length),
            },
            FamilySpec::Sr(p) => format!("q={} {}x{} t={}", p.q, p.n, p.m, p.t),
            FamilySpec::Plotkin(p) => {
                format!("{}[{}] | {}[{}]", p.first.tag(), p.first.describe(), p.second.tag(), p.second.describe())
            }
            FamilySpec::Cor81(p) => format!("q={} s={} m={}", p.q, p.s, p.m),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodimensionClaim {
    /// Codimension over the base field `F_q`.
    pub value: usize,
    /// The claim is an upper bound rather than an equality.
    pub at_most: bool,
    /// The claim as stated, over the field it is stated for.
    pub stated: String,
}

/// The parameters a family is claimed to have.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct ClaimSet {
    pub distance: Option<usize>,
    pub codimension: Option<CodimensionClaim>,
    pub covering_radius: Option<usize>,
    pub optimal: bool,
    pub defect: Option<i64>,
    pub classification: Option<Classification>,
    pub source: String,
}

/// An advisory condition evaluated at the given parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Condition {
    pub name: String,
    pub statement: String,
    pub evaluation: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentInfo {
    pub index: usize,
    pub kind: String,
    pub field: String,
    pub length: usize,
    pub dimension: usize,
    pub codimension: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub defining_set: Option<Vec<usize>>,
    /// Proven lower bound on the minimum distance (BCH/HT for cyclic codes).
    pub analytic_distance: Option<usize>,
}

/// A constructed code with its claims and annotations.
#[derive(Debug, Clone)]
pub struct Built {
    pub spec: FamilySpec,
    pub code: SumRankCode,
    pub components: Vec<ComponentInfo>,
    pub parts: Option<Box<(Built, Built)>>,
    pub claims: ClaimSet,
    pub conditions: Vec<Condition>,
    pub warnings: Vec<String>,
    pub evidence: Vec<InputEvidence>,
}

impl Built {
    /// `min_j (j+1)·d_j` from the analytic component bounds, or
    /// `min{2·d_1, d_2}` for a Plotkin sum.
    pub fn analytic_distance_bound(&self) -> Option<usize> {
        match &self.parts {
            Some(parts) => {
                let a = parts.0.analytic_distance_bound()?;
                let b = parts.1.analytic_distance_bound()?;
                Some((2 * a).min(b))
            }
            None => analytic_component_bound(&self.components),
        }
    }

    /// Whether `φ` is multiplicative, so the component bound is proven for
    /// this geometry.
    pub fn component_bound_applies(&self) -> bool {
        self.code.geometry().codec().phi().kind() == EmbeddingKind::Inclusion
    }
}

pub(crate) fn analytic_component_bound(components: &[ComponentInfo]) -> Option<usize> {
    // a component with no nonzero words imposes nothing
    components
        .iter()
        .filter(|c| c.dimension > 0)
        .map(|c| c.analytic_distance.map(|d| (c.index + 1) * d))
        .try_fold(usize::MAX, |acc, x| x.map(|x| acc.min(x)))
}

fn lambda_condition(name: &str, statement: &str, lambda: u64, rhs: f64, epsilon: f64) -> Condition {
    let holds = (lambda as f64) < rhs;
    Condition {
        name: name.to_string(),
        statement: statement.to_string(),
        evaluation: format!("{lambda} < {rhs:.6} (ε = {epsilon}) is {holds}"),
        holds,
    }
}

fn divide(value: u64, divisor: u64) -> Result<u64, FamilyError> {
    if divisor == 0 || value % divisor != 0 {
        return Err(FamilyError::BadDivisor { divisor, value });
    }
    Ok(value / divisor)
}

fn checked_pow(q: u64, e: u64, name: &'static str) -> Result<u64, FamilyError> {
    u32::try_from(e)
        .ok()
        .and_then(|e| q.checked_pow(e))
        .ok_or(FamilyError::BadParameter { name, reason: format!("{q}^{e} overflows") })
}

fn info_cyclic(index: usize, c: &crate::cyclic::CyclicCode) -> ComponentInfo {
    let t = c.defining_set();
    ComponentInfo {
        index,
        kind: "cyclic".into(),
        field: c.field().name(),
        length: c.length(),
        dimension: c.dimension(),
        codimension: c.code().codimension(),
        defining_set: Some(t.to_vec()),
        analytic_distance: if c.dimension() == 0 {
            None
        } else {
            Some(bch_designed_distance(t, c.length()).max(ht_bound(t, c.length())))
        },
    }
}

fn info_plain(index: usize, kind: &str, code: &LinearCode, d: Option<usize>) -> ComponentInfo {
    ComponentInfo {
        index,
        kind: kind.into(),
        field: code.field().name(),
        length: code.length(),
        dimension: code.dimension(),
        codimension: code.codimension(),
        defining_set: None,
        analytic_distance: d,
    }
}

fn parity_info(index: usize, code: &LinearCode) -> ComponentInfo {
    info_plain(index, "parity", code, (code.length() >= 2).then_some(2))
}

fn trivial_info(index: usize, code: &LinearCode) -> ComponentInfo {
    info_plain(index, "trivial", code, Some(1))
}

fn finish(
    spec: FamilySpec,
    geometry: Geometry,
    codes: Vec<LinearCode>,
    components: Vec<ComponentInfo>,
    claims: ClaimSet,
    conditions: Vec<Condition>,
) -> Result<Built, FamilyError> {
    let code = SumRankCode::from_components(geometry, codes)?;
    let warnings = conditions
        .iter()
        .filter(|c| !c.holds)
        .map(|c| format!("condition {} fails: {}", c.name, c.evaluation))
        .collect();
    Ok(Built {
        spec,
        code,
        components,
        parts: None,
        claims,
        conditions,
        warnings,
        evidence: Vec::new(),
    })
}

/// Hamming-metric cyclic code `C_0 ∪ C_1 ∪ C_2` of length `(q^m-1)/λ` over `F_q`,
/// as a `1×1` sum-rank code.
pub fn thm31_code(p: &Thm31Params) -> Result<Built, FamilyError> {
    let field = Field::of_size(p.q)?;
    let n = divide(checked_pow(p.q, p.m as u64, "m")? - 1, p.lambda)? as usize;
    let c = cyclic_make(n, &field, &[0, 1, 2])?;
    let rhs = (p.q as f64 - 1.0) / (2.0 * p.q as f64 * (1.0 + p.epsilon)).sqrt();
    let mut conditions = vec![lambda_condition(
        "lambda",
        "λ < (q−1)/√(2q(1+ε))",
        p.lambda,
        rhs,
        p.epsilon,
    )];
    conditions.push(Condition {
        name: "alphabet".into(),
        statement: "q ≥ 4".into(),
        evaluation: format!("q = {}", p.q),
        holds: p.q >= 4,
    });
    let claims = ClaimSet {
        distance: Some(4),
        codimension: Some(CodimensionClaim {
            value: 2 * p.m as usize + 1,
            at_most: true,
            stated: format!("at most 2m+1 = {} over F_{}", 2 * p.m + 1, p.q),
        }),
        optimal: true,
        source: "THM31".into(),
        ..Default::default()
    };
    let info = vec![info_cyclic(0, &c)];
    let geometry = Geometry::new(p.q, 1, 1, n, &PhiSpec::default())?;
    finish(FamilySpec::Thm31(p.clone()), geometry, vec![c.into_code()], info, claims, conditions)
}

/// Ternary `C_0 ∪ C_1 ∪ C_5` or quinary `C_0 ∪ C_1 ∪ C_3` code of length `q^m - 1`.
pub fn thm32_code(p: &Thm32Params) -> Result<Built, FamilyError> {
    let reps: &[usize] = match p.q {
        3 => &[0, 1, 5],
        5 => &[0, 1, 3],
        q => return Err(FamilyError::UnsupportedAlphabet(q)),
    };
    let field = Field::of_size(p.q)?;
    let n = checked_pow(p.q, p.m as u64, "m")? as usize - 1;
    let c = cyclic_make(n, &field, reps)?;
    let boston = boston_check(c.defining_set());
    let conditions = vec![Condition {
        name: "boston".into(),
        statement: "{0, 1, 3, 5} ⊆ T".into(),
        evaluation: format!("T = {:?}", c.defining_set()),
        holds: boston,
    }];
    let claims = ClaimSet {
        distance: Some(4),
        codimension: Some(CodimensionClaim {
            value: 2 * p.m as usize + 1,
            at_most: false,
            stated: format!("2m+1 = {} over F_{}", 2 * p.m + 1, p.q),
        }),
        optimal: true,
        source: "THM32".into(),
        ..Default::default()
    };
    let info = vec![info_cyclic(0, &c)];
    let geometry = Geometry::new(p.q, 1, 1, n, &PhiSpec::default())?;
    finish(FamilySpec::Thm32(p.clone()), geometry, vec![c.into_code()], info, claims, conditions)
}

/// Components over `F_{q^s}`: `C_0 ∪ C_1 ∪ C_2` cyclic, then up to two parity
/// codes, then whole spaces, truncated to `n` components.
fn four_recipe(
    n: usize,
    field: &Arc<Field>,
    t: usize,
) -> Result<(Vec<LinearCode>, Vec<ComponentInfo>), FamilyError> {
    let c0 = cyclic_make(t, field, &[0, 1, 2])?;
    let mut info = vec![info_cyclic(0, &c0)];
    let mut codes = vec![c0.into_code()];
    for i in 1..n {
        if i <= 2 {
            let c = LinearCode::parity(field, t);
            info.push(parity_info(i, &c));
            codes.push(c);
        } else {
            let c = LinearCode::trivial(field, t);
            info.push(trivial_info(i, &c));
            codes.push(c);
        }
    }
    Ok((codes, info))
}

/// Square `s×s` cyclic sum-rank code of block length `(q^{sm}-1)/λ`.
pub fn thm41_code(p: &Thm41Params) -> Result<Built, FamilyError> {
    if p.s == 0 || p.m == 0 {
        return Err(FamilyError::BadParameter { name: "s, m", reason: "must be positive".into() });
    }
    let qs = checked_pow(p.q, p.s as u64, "s")?;
    let t = divide(checked_pow(p.q, p.s as u64 * p.m as u64, "m")? - 1, p.lambda)? as usize;
    let field = Field::of_size(qs)?;
    let (codes, info) = four_recipe(p.s, &field, t)?;
    let rhs = ((qs as f64 - 1.0) / (2.0 * (p.q as f64 - 1.0).powi(2) * (1.0 + p.epsilon))).sqrt();
    let mut conditions = vec![lambda_condition(
        "lambda",
        "λ < √((q^s−1)/(2(q−1)²(1+ε)))",
        p.lambda,
        rhs,
        p.epsilon,
    )];
    conditions.push(Condition {
        name: "components".into(),
        statement: "s ≥ 3, so that the two parity components counted in the codimension exist".into(),
        evaluation: format!("s = {}", p.s),
        holds: p.s >= 3,
    });
    let stated = 2 * p.m as usize + 3;
    let claims = ClaimSet {
        distance: Some(4),
        codimension: Some(CodimensionClaim {
            value: p.s * stated,
            at_most: false,
            stated: format!("2m+3 = {stated} over F_{qs}"),
        }),
        optimal: true,
        source: "THM41".into(),
        ..Default::default()
    };
    let geometry = Geometry::new(p.q, p.s, p.s, t, &PhiSpec::default())?;
    finish(FamilySpec::Thm41(p.clone()), geometry, codes, info, claims, conditions)
}

/// Rectangular `s1×s2` version with components over `F_{q^{s2}}`.
pub fn cor41_code(p: &Cor41Params) -> Result<Built, FamilyError> {
    if p.s1 == 0 || p.s1 >= p.s2 {
        return Err(FamilyError::BadParameter {
            name: "s1",
            reason: format!("need 0 < s1 < s2, got s1={} s2={}", p.s1, p.s2),
        });
    }
    let qs2 = checked_pow(p.q, p.s2 as u64, "s2")?;
    let t = divide(checked_pow(p.q, p.s2 as u64 * p.m as u64, "m")? - 1, p.lambda)? as usize;
    let field = Field::of_size(qs2)?;
    let (codes, info) = four_recipe(p.s1, &field, t)?;
    let qs1 = checked_pow(p.q, p.s1 as u64, "s1")? as f64;
    let rhs = (qs1 - 1.0) / (p.q as f64 - 1.0) * (1.0 / (2.0 * (1.0 + p.epsilon) * qs2 as f64)).sqrt();
    let conditions = vec![lambda_condition(
        "lambda",
        "λ < ((q^{s1}−1)/(q−1))·√(1/(2(1+ε)q^{s2}))",
        p.lambda,
        rhs,
        p.epsilon,
    )];
    let claims = ClaimSet {
        distance: Some(4),
        optimal: true,
        source: "COR41".into(),
        ..Default::default()
    };
    let geometry = Geometry::new(p.q, p.s1, p.s2, t, &p.phi)?;
    finish(FamilySpec::Cor41(p.clone()), geometry, codes, info, claims, conditions)
}

/// `2×2` code of block length `q^4 - 1` with `C_0` of defining set
/// `C_0 ∪ C_1 ∪ C_{q²+1}` over `F_{q²}` and `C_1` the parity code.
pub fn thm51_code(p: &Thm51Params) -> Result<Built, FamilyError> {
    let q2 = checked_pow(p.q, 2, "q")?;
    let t = checked_pow(p.q, 4, "q")? as usize - 1;
    let field = Field::of_size(q2)?;
    let c0 = cyclic_make(t, &field, &[0, 1, q2 as usize + 1])?;
    let ht = ht_bound(c0.defining_set(), t);
    let conditions = vec![Condition {
        name: "hartmann-tzeng".into(),
        statement: "HT bound of T is at least 4".into(),
        evaluation: format!("T = {:?}, bound {ht}", c0.defining_set()),
        holds: ht >= 4,
    }];
    let c1 = LinearCode::parity(&field, t);
    let info = vec![info_cyclic(0, &c0), parity_info(1, &c1)];
    let claims = ClaimSet {
        distance: Some(4),
        codimension: Some(CodimensionClaim {
            value: 10,
            at_most: false,
            stated: format!("5 over F_{q2}"),
        }),
        optimal: true,
        defect: Some(4),
        source: "THM51".into(),
        ..Default::default()
    };
    let geometry = Geometry::new(p.q, 2, 2, t, &PhiSpec::default())?;
    finish(FamilySpec::Thm51(p.clone()), geometry, vec![c0.into_code(), c1], info, claims, conditions)
}

/// `2×m` code with `C_0` the Hamming code of redundancy `u` over `F_{q^m}` and
/// `C_1` the parity code.
pub fn thm61_code(p: &Thm61Params) -> Result<Built, FamilyError> {
    if p.m < 2 || p.u < 2 {
        return Err(FamilyError::BadParameter {
            name: "m, u",
            reason: format!("need m ≥ 2 and u ≥ 2, got m={} u={}", p.m, p.u),
        });
    }
    let qm = checked_pow(p.q, p.m as u64, "m")?;
    let field = Field::of_size(qm)?;
    let c0 = hamming_code_make(&field, p.u)?;
    let t = c0.length();
    let c1 = LinearCode::parity(&field, t);
    let info = vec![info_plain(0, "hamming", &c0, Some(3)), parity_info(1, &c1)];
    let conditions = vec![Condition {
        name: "redundancy".into(),
        statement: "stated codimension m+1 over F_{q^m} equals the built u+1".into(),
        evaluation: format!("m = {}, u = {}", p.m, p.u),
        holds: p.m == p.u,
    }];
    let claims = ClaimSet {
        distance: Some(3),
        covering_radius: Some(2),
        optimal: true,
        classification: Some(Classification::QuasiPerfect),
        source: "THM61".into(),
        ..Default::default()
    };
    let geometry = Geometry::new(p.q, 2, p.m, t, &p.phi)?;
    finish(FamilySpec::Thm61(p.clone()), geometry, vec![c0, c1], info, claims, conditions)
}

/// Binary `2×2` code from a certified quaternary `[t, k, 4]` code of covering
/// radius 2 and the parity code.
pub fn thm71_code(p: &Thm71Params) -> Result<Built, FamilyError> {
    let f4 = Field::get(2, 2)?;
    let (c0, info0, evidence) = match &p.c0 {
        Some(ext) => {
            let code = ext.build()?;
            if !Arc::ptr_eq(code.field(), &f4) {
                return Err(FamilyError::InputNotVerified(format!(
                    "input is over F_{}, not F_4",
                    code.field().size()
                )));
            }
            let evidence = verify_input(&code, p.input_budget)?;
            let info = info_plain(0, "external", &code, evidence.distance.distance);
            (code, info, evidence)
        }
        None => {
            let (cyc, evidence) = find_quaternary_input(p.max_length, p.input_budget)?;
            let mut info = info_cyclic(0, &cyc);
            info.analytic_distance = evidence.distance.distance;
            (cyc.into_code(), info, evidence)
        }
    };
    let t = c0.length();
    let c1 = LinearCode::parity(&f4, t);
    let info = vec![info0, parity_info(1, &c1)];
    let claims = ClaimSet {
        distance: Some(4),
        covering_radius: Some(2),
        classification: Some(Classification::QuasiPerfect),
        source: "THM71".into(),
        ..Default::default()
    };
    let geometry = Geometry::new(2, 2, 2, t, &PhiSpec::default())?;
    let mut built = finish(FamilySpec::Thm71(p.clone()), geometry, vec![c0, c1], info, claims, vec![])?;
    built.evidence.push(evidence);
    Ok(built)
}

/// Generic `SR(C_0, …, C_{n-1})` from explicit component codes.
pub fn sr_build(p: &SrParams) -> Result<Built, FamilyError> {
    let geometry = Geometry::new(p.q, p.n, p.m, p.t, &p.phi)?;
    let mut codes = Vec::new();
    let mut info = Vec::new();
    for (i, ext) in p.components.iter().enumerate() {
        let (code, ci) = ext.build_with_info(i)?;
        info.push(ci);
        codes.push(code);
    }
    let claims = ClaimSet { source: "SR".into(), ..Default::default() };
    finish(FamilySpec::Sr(p.clone()), geometry, codes, info, claims, vec![])
}

/// `{(u | u + v) : u ∈ first, v ∈ second}`.
pub fn plotkin(spec: FamilySpec, first: Built, second: Built) -> Result<Built, FamilyError> {
    if first.code.geometry() != second.code.geometry() {
        return Err(FamilyError::PlotkinMismatch);
    }
    let code = SumRankCode::plotkin(first.code.clone(), second.code.clone())?;
    let distance = match (first.claims.distance, second.claims.distance) {
        (Some(a), Some(b)) => Some((2 * a).min(b)),
        _ => None,
    };
    let claims = ClaimSet { distance, source: "PLOTKIN".into(), ..Default::default() };
    let mut warnings: Vec<String> = first.warnings.iter().map(|w| format!("first: {w}")).collect();
    warnings.extend(second.warnings.iter().map(|w| format!("second: {w}")));
    Ok(Built {
        spec,
        code,
        components: Vec::new(),
        parts: Some(Box::new((first, second))),
        claims,
        conditions: Vec::new(),
        warnings,
        evidence: Vec::new(),
    })
}

/// Plotkin sum of `SR(parity, whole, …, whole)` with the square family at `λ = 1`.
pub fn cor81_code(p: &Cor81Params) -> Result<Built, FamilyError> {
    let inner = Thm41Params { q: p.q, s: p.s, m: p.m, lambda: 1, epsilon: DEFAULT_EPSILON };
    let second = thm41_code(&inner)?;
    let geometry = second.code.geometry().clone();
    let field = geometry.codec().coefficient_field().clone();
    let t = geometry.t();
    let mut codes = vec![LinearCode::parity(&field, t)];
    let mut info = vec![parity_info(0, &codes[0])];
    for i in 1..p.s {
        let c = LinearCode::trivial(&field, t);
        info.push(trivial_info(i, &c));
        codes.push(c);
    }
    let d_claims = ClaimSet { distance: Some(2), source: "SR".into(), ..Default::default() };
    let sr_spec = FamilySpec::Sr(SrParams {
        q: p.q,
        n: p.s,
        m: p.s,
        t,
        phi: PhiSpec::default(),
        components: std::iter::once(ExternalCode::special(&field, t, external::Special::Parity))
            .chain((1..p.s).map(|_| ExternalCode::special(&field, t, external::Special::Trivial)))
            .collect(),
    });
    let first = finish(sr_spec, geometry, codes, info, d_claims, vec![])?;
    let mut built = plotkin(FamilySpec::Cor81(p.clone()), first, second)?;
    let stated = p.s * (2 * p.m as usize + 4);
    built.claims = ClaimSet {
        distance: Some(4),
        codimension: Some(CodimensionClaim {
            value: stated,
            at_most: false,
            stated: format!("s + s(2m+3) = {stated} over F_{}", p.q),
        }),
        optimal: true,
        source: "COR81".into(),
        ..Default::default()
    };
    Ok(built)
}

/// Builds any family.
pub fn build(spec: &FamilySpec) -> Result<Built, FamilyError> {
    match spec {
        FamilySpec::Thm31(p) => thm31_code(p),
        FamilySpec::Thm32(p) => thm32_code(p),
        FamilySpec::Thm41(p) => thm41_code(p),
        FamilySpec::Cor41(p) => cor41_code(p),
        FamilySpec::Thm51(p) => thm51_code(p),
        FamilySpec::Thm61(p) => thm61_code(p),
        FamilySpec::Thm71(p) => thm71_code(p),
        FamilySpec::Sr(p) => sr_build(p),
        FamilySpec::Plotkin(p) => {
            let first = build(&p.first)?;
            let second = build(&p.second)?;
            plotkin(spec.clone(), first, second)
        }
        FamilySpec::Cor81(p) => cor81_code(p),
    }
}

/// Blockwise cyclic shift `(x_0, …, x_{t-1}) ↦ (x_{t-1}, x_0, …, x_{t-2})`.
pub fn cyclic_shift(w: &SrWord) -> SrWord {
    let mut blocks = w.blocks.clone();
    blocks.rotate_right(1);
    SrWord { blocks }
}
