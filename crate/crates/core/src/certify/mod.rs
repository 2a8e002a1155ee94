//! Exact verification of claimed code parameters, emitted as JSON certificates.

mod bounds;
mod distance;

use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::cyclic::CyclicError;
use crate::families::Built;
use crate::search::SearchError;
use crate::srspace::{wt_sr, SrError, SumRankCode};

pub use bounds::{
    classify, packing_density, singleton_defect, sphere_packing_check, BoundReport, Classification,
    Density, VolumeComparison,
};
pub use distance::{
    certify_dsr, ComponentRecord, DistanceEvidence, LayerRecord, Mode, WitnessRecord,
};

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_BUDGET: u128 = 1_000_000_000;
pub const DEFAULT_CAP: usize = 4;

#[derive(Debug, Error)]
pub enum CertifyError {
    #[error("compositional mode unavailable: {0}")]
    CompositionalUnavailable(String),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Sr(#[from] SrError),
    #[error(transparent)]
    Cyclic(#[from] CyclicError),
}

/// Shared count of candidate words examined in one run.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Budget {
    total: u128,
    spent: u128,
}

impl Budget {
    pub(crate) fn new(total: u128) -> Self {
        Self { total, spent: 0 }
    }

    pub(crate) fn remaining(&self) -> u128 {
        self.total.saturating_sub(self.spent)
    }

    pub(crate) fn spend(&mut self, n: u128) {
        self.spent += n;
    }

    pub(crate) fn spent(&self) -> u128 {
        self.spent
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Confirmed,
    Refuted,
    /// The value is established but the volume criterion for the claim fails.
    RefutedByCriterion,
    Inconclusive,
}

/// 2 if anything is inconclusive, else 1 if anything is refuted, else 0.
pub fn exit_code<'a>(verdicts: impl IntoIterator<Item = &'a Verdict>) -> i32 {
    let mut code = 0;
    for v in verdicts {
        match v {
            Verdict::Inconclusive => return 2,
            Verdict::Refuted | Verdict::RefutedByCriterion => code = 1,
            Verdict::Confirmed => {}
        }
    }
    code
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClaimKind {
    Distance,
    Codimension,
    CoveringRadius,
    Optimality,
    Defect,
    Classification,
    Density,
}

impl ClaimKind {
    pub fn name(&self) -> &'static str {
        match self {
            ClaimKind::Distance => "distance",
            ClaimKind::Codimension => "codimension",
            ClaimKind::CoveringRadius => "covering_radius",
            ClaimKind::Optimality => "optimality",
            ClaimKind::Defect => "defect",
            ClaimKind::Classification => "classification",
            ClaimKind::Density => "density",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoveringEvidence {
    pub radius: Option<usize>,
    /// Every syndrome needs at least this weight, or some needs more than the cap.
    pub lower_bound: usize,
    pub syndromes: u64,
    pub per_layer: Vec<u64>,
    pub table_sha256: Option<String>,
    pub candidates: u128,
    pub incomplete: Option<String>,
}

/// Sum-rank covering radius by breadth-first syndrome coverage.
///
/// Syndromes are taken against the code's `F_q` parity-check matrix, which is
/// an invertible recombination of the component parity checks on the
/// coefficient rows.
pub fn covering_radius_sr(
    code: &SumRankCode,
    cap: usize,
    budget: u128,
    parallel: bool,
) -> Result<CoveringEvidence, CertifyError> {
    let space = code.search_space()?;
    let syndromes = code.geometry().q().pow(code.codimension() as u32);
    let mut ev = CoveringEvidence {
        radius: None,
        lower_bound: 0,
        syndromes,
        per_layer: Vec::new(),
        table_sha256: None,
        candidates: 0,
        incomplete: None,
    };
    match space.cover(cap, budget, parallel) {
        Ok(cov) => {
            ev.radius = Some(cov.radius);
            ev.lower_bound = cov.radius;
            ev.per_layer = cov.per_layer.clone();
            ev.table_sha256 = Some(cov.digest());
            ev.candidates = cov.count;
        }
        Err(SearchError::CapReached { cap }) => {
            ev.lower_bound = cap + 1;
            ev.incomplete = Some(format!("syndromes remain uncovered at weight {cap}"));
        }
        Err(e @ SearchError::BudgetExceeded { .. }) => ev.incomplete = Some(e.to_string()),
        Err(e) => return Err(e.into()),
    }
    Ok(ev)
}

/// Code identification carried by every certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodeSummary {
    pub family: String,
    pub params: String,
    pub spec: crate::families::FamilySpec,
    pub fingerprint: String,
    pub geometry: Value,
    pub dimension: usize,
    pub codimension: usize,
    pub component_codimension: Option<usize>,
    pub analytic_distance_bound: Option<usize>,
}

impl CodeSummary {
    pub fn of(built: &Built) -> Self {
        Self {
            family: built.spec.tag().to_string(),
            params: built.spec.describe(),
            spec: built.spec.clone(),
            fingerprint: built.code.fingerprint(),
            geometry: serde_json::to_value(built.code.geometry()).expect("serializable"),
            dimension: built.code.dimension(),
            codimension: built.code.codimension(),
            component_codimension: built.code.component_codimension(),
            analytic_distance_bound: built.analytic_distance_bound(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema_version: u32,
    pub claim: ClaimKind,
    pub code: CodeSummary,
    pub claimed: Value,
    pub computed: Value,
    pub verdict: Verdict,
    pub reason: String,
    pub evidence: Value,
    pub toolchain: String,
    pub run_fingerprint: String,
}

impl Certificate {
    fn seal(mut self) -> Self {
        self.run_fingerprint = String::new();
        let bytes = serde_json::to_vec(&self).expect("serializable");
        self.run_fingerprint = hex::encode(Sha256::digest(bytes));
        self
    }

    /// Recomputes the run fingerprint.
    pub fn fingerprint_ok(&self) -> bool {
        self.clone().seal().run_fingerprint == self.run_fingerprint
    }
}

pub fn toolchain() -> String {
    format!("{} {}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION"))
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    /// Claims to check; `None` checks everything the family claims plus the
    /// distance, defect and density.
    pub claims: Option<Vec<ClaimKind>>,
    pub mode: Mode,
    pub budget: u128,
    pub cap: usize,
    pub parallel: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { claims: None, mode: Mode::Exhaustive, budget: DEFAULT_BUDGET, cap: DEFAULT_CAP, parallel: true }
    }
}

pub struct Run {
    pub certificates: Vec<Certificate>,
    /// Wall-clock seconds per claim, kept out of the certificates.
    pub timings: Vec<(ClaimKind, f64)>,
}

impl Run {
    pub fn exit_code(&self) -> i32 {
        exit_code(self.certificates.iter().map(|c| &c.verdict))
    }

    pub fn get(&self, kind: ClaimKind) -> Option<&Certificate> {
        self.certificates.iter().find(|c| c.claim == kind)
    }
}

pub fn default_claims(built: &Built) -> Vec<ClaimKind> {
    let c = &built.claims;
    let mut out = vec![ClaimKind::Distance];
    if c.codimension.is_some() {
        out.push(ClaimKind::Codimension);
    }
    if c.covering_radius.is_some() || c.classification.is_some() {
        out.push(ClaimKind::CoveringRadius);
    }
    if c.optimal {
        out.push(ClaimKind::Optimality);
    }
    out.push(ClaimKind::Defect);
    if c.classification.is_some() {
        out.push(ClaimKind::Classification);
    }
    out.push(ClaimKind::Density);
    out
}

fn opt<T: Serialize>(x: Option<T>) -> Value {
    x.map_or(Value::Null, |v| serde_json::to_value(v).expect("serializable"))
}

fn interval_verdict(claimed: Option<usize>, lower: usize, upper: Option<usize>) -> Verdict {
    match claimed {
        Some(c) if c < lower || upper.is_some_and(|u| c > u) => Verdict::Refuted,
        _ => Verdict::Inconclusive,
    }
}

/// Runs every requested certifier on a built family.
pub fn certify_all(built: &Built, opts: &RunOptions) -> Result<Run, CertifyError> {
    let claims = opts.claims.clone().unwrap_or_else(|| default_claims(built));
    let summary = CodeSummary::of(built);
    let code = &built.code;
    let mut budget = Budget::new(opts.budget);
    let mut certs = Vec::new();
    let mut timings = Vec::new();
    let make = |claim: ClaimKind, claimed: Value, computed: Value, verdict: Verdict, reason: String, evidence: Value| {
        Certificate {
            schema_version: SCHEMA_VERSION,
            claim,
            code: summary.clone(),
            claimed,
            computed,
            verdict,
            reason,
            evidence,
            toolchain: toolchain(),
            run_fingerprint: String::new(),
        }
        .seal()
    };

    let needs_distance = claims.iter().any(|c| {
        matches!(
            c,
            ClaimKind::Distance
                | ClaimKind::Optimality
                | ClaimKind::Defect
                | ClaimKind::Classification
                | ClaimKind::Density
        )
    });
    let mut dist: Option<DistanceEvidence> = None;
    if needs_distance {
        let start = Instant::now();
        let ev = certify_dsr(code, built.claims.distance, opts.mode, budget.remaining(), opts.parallel)?;
        budget.spend(ev.candidates);
        timings.push((ClaimKind::Distance, start.elapsed().as_secs_f64()));
        dist = Some(ev);
    }
    let d_exact = dist.as_ref().and_then(|e| e.exact);

    let mut cover: Option<CoveringEvidence> = None;
    if claims.iter().any(|c| matches!(c, ClaimKind::CoveringRadius | ClaimKind::Classification)) {
        let start = Instant::now();
        let ev = covering_radius_sr(code, opts.cap, budget.remaining(), opts.parallel)?;
        budget.spend(ev.candidates);
        timings.push((ClaimKind::CoveringRadius, start.elapsed().as_secs_f64()));
        cover = Some(ev);
    }
    let report = d_exact.map(|d| sphere_packing_check(code, d));

    for &claim in &claims {
        let cert = match claim {
            ClaimKind::Distance => {
                let ev = dist.as_ref().expect("computed above");
                let claimed = built.claims.distance;
                let (verdict, reason) = match (ev.exact, claimed) {
                    (Some(d), Some(c)) if d == c => {
                        (Verdict::Confirmed, format!("no nonzero codeword below weight {d}; witness of weight {d}"))
                    }
                    (Some(d), Some(c)) => (Verdict::Refuted, format!("certified distance {d}, claimed {c}")),
                    (Some(d), None) => (Verdict::Confirmed, format!("certified distance {d}")),
                    (None, c) => (
                        interval_verdict(c, ev.lower_bound, ev.upper_bound),
                        format!(
                            "distance in [{}, {}]: {}",
                            ev.lower_bound,
                            ev.upper_bound.map_or("?".into(), |u| u.to_string()),
                            ev.incomplete.clone().unwrap_or_default()
                        ),
                    ),
                };
                make(claim, opt(claimed), opt(ev.exact), verdict, reason, serde_json::to_value(ev).unwrap())
            }
            ClaimKind::Codimension => {
                let actual = code.codimension();
                let (verdict, reason, claimed) = match &built.claims.codimension {
                    Some(c) => {
                        let ok = if c.at_most { actual <= c.value } else { actual == c.value };
                        let rel = if c.at_most { "at most " } else { "" };
                        (
                            if ok { Verdict::Confirmed } else { Verdict::Refuted },
                            format!("codimension {actual} over F_{}, claimed {rel}{} ({})", code.geometry().q(), c.value, c.stated),
                            serde_json::to_value(c).unwrap(),
                        )
                    }
                    None => (Verdict::Confirmed, format!("codimension {actual}"), Value::Null),
                };
                let evidence = json!({
                    "codimension": actual,
                    "component_codimension": code.component_codimension(),
                    "dimension": code.dimension(),
                });
                make(claim, claimed, json!(actual), verdict, reason, evidence)
            }
            ClaimKind::CoveringRadius => {
                let ev = cover.as_ref().expect("computed above");
                let claimed = built.claims.covering_radius;
                let (verdict, reason) = match (ev.radius, claimed) {
                    (Some(r), Some(c)) if r == c => {
                        (Verdict::Confirmed, format!("all {} syndromes reached by weight {r}", ev.syndromes))
                    }
                    (Some(r), Some(c)) => (Verdict::Refuted, format!("covering radius {r}, claimed {c}")),
                    (Some(r), None) => (Verdict::Confirmed, format!("covering radius {r}")),
                    (None, c) => (
                        interval_verdict(c, ev.lower_bound, None),
                        format!("covering radius at least {}: {}", ev.lower_bound, ev.incomplete.clone().unwrap_or_default()),
                    ),
                };
                make(claim, opt(claimed), opt(ev.radius), verdict, reason, serde_json::to_value(ev).unwrap())
            }
            ClaimKind::Optimality => match &report {
                Some(r) => {
                    let o = &r.optimality;
                    let mut reason = format!(
                        "V({}) = {} {} q^codim = {}",
                        o.radius,
                        o.volume,
                        if o.exceeds { ">" } else { "≤" },
                        r.space_per_codeword
                    );
                    if !o.exceeds && r.radius_two.exceeds {
                        reason.push_str(&format!(
                            "; V(2) = {} exceeds it, which excludes distance 5, not distance {}",
                            r.radius_two.volume,
                            r.distance + 1
                        ));
                    }
                    let verdict = if o.exceeds { Verdict::Confirmed } else { Verdict::RefutedByCriterion };
                    make(claim, json!(built.claims.optimal), json!(o.exceeds), verdict, reason, bound_evidence(r, built))
                }
                None => make(claim, json!(built.claims.optimal), Value::Null, Verdict::Inconclusive, "distance not certified".into(), Value::Null),
            },
            ClaimKind::Defect => match &report {
                Some(r) => {
                    let claimed = built.claims.defect;
                    let verdict = match claimed {
                        Some(c) if c != r.singleton_defect => Verdict::Refuted,
                        _ => Verdict::Confirmed,
                    };
                    let g = code.geometry();
                    let reason = format!(
                        "{}({}·{} − {} + 1) − {} = {}",
                        g.m().max(g.n()),
                        g.n().min(g.m()),
                        g.t(),
                        r.distance,
                        code.dimension(),
                        r.singleton_defect
                    );
                    make(claim, opt(claimed), json!(r.singleton_defect), verdict, reason, bound_evidence(r, built))
                }
                None => make(claim, opt(built.claims.defect), Value::Null, Verdict::Inconclusive, "distance not certified".into(), Value::Null),
            },
            ClaimKind::Classification => {
                let claimed = built.claims.classification;
                let r = cover.as_ref().and_then(|c| c.radius);
                match (d_exact, r) {
                    (Some(d), Some(r)) => {
                        let class = classify(d, r);
                        let verdict = match claimed {
                            Some(c) if c != class => Verdict::Refuted,
                            _ => Verdict::Confirmed,
                        };
                        let reason = format!("d = {d}, R = {r}, ⌊(d−1)/2⌋ = {}", (d - 1) / 2);
                        make(claim, opt(claimed), json!(class), verdict, reason, json!({"distance": d, "covering_radius": r}))
                    }
                    _ => make(claim, opt(claimed), Value::Null, Verdict::Inconclusive, "distance or covering radius not certified".into(), Value::Null),
                }
            }
            ClaimKind::Density => match &report {
                Some(r) => make(
                    claim,
                    Value::Null,
                    json!(r.density.reduced),
                    Verdict::Confirmed,
                    format!("μ = {}/{}", r.density.numerator, r.density.denominator),
                    bound_evidence(r, built),
                ),
                None => make(claim, Value::Null, Value::Null, Verdict::Inconclusive, "distance not certified".into(), Value::Null),
            },
        };
        certs.push(cert);
    }
    Ok(Run { certificates: certs, timings })
}

fn bound_evidence(r: &BoundReport, built: &Built) -> Value {
    json!({ "bounds": r, "conditions": built.conditions })
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReplayError {
    #[error("certificate is for a different code")]
    CodeMismatch,
    #[error("run fingerprint does not match the certificate contents")]
    Tampered,
    #[error("malformed evidence: {0}")]
    Malformed(String),
    #[error("witness is not a codeword")]
    NotACodeword,
    #[error("recorded value {recorded} disagrees with recomputed {recomputed}")]
    Mismatch { recorded: String, recomputed: String },
}

fn mismatch(a: impl ToString, b: impl ToString) -> ReplayError {
    ReplayError::Mismatch { recorded: a.to_string(), recomputed: b.to_string() }
}

/// Re-checks a certificate without enumeration: witness membership and weight,
/// and every exact integer comparison.
pub fn replay(cert: &Certificate, built: &Built) -> Result<(), ReplayError> {
    if !cert.fingerprint_ok() {
        return Err(ReplayError::Tampered);
    }
    let code = &built.code;
    if cert.code.fingerprint != code.fingerprint() {
        return Err(ReplayError::CodeMismatch);
    }
    let malformed = |e: serde_json::Error| ReplayError::Malformed(e.to_string());
    match cert.claim {
        ClaimKind::Distance => {
            let ev: DistanceEvidence = serde_json::from_value(cert.evidence.clone()).map_err(malformed)?;
            if let Some(w) = &ev.witness {
                let entries: Vec<_> = w.blocks.iter().flatten().flatten().copied().collect();
                if entries.len() != code.word_len() {
                    return Err(ReplayError::Malformed("witness length".into()));
                }
                let word = code.word_from_entries(&entries);
                let member = code.member(&word).map_err(|e| ReplayError::Malformed(e.to_string()))?;
                let by_check = code.member_by_check(&word).map_err(|e| ReplayError::Malformed(e.to_string()))?;
                if !member || !by_check || wt_sr(&word) == 0 {
                    return Err(ReplayError::NotACodeword);
                }
                if wt_sr(&word) != w.weight || ev.upper_bound != Some(w.weight) {
                    return Err(mismatch(w.weight, wt_sr(&word)));
                }
            }
            if let Some(d) = ev.exact {
                if ev.upper_bound != Some(d) || ev.lower_bound != d {
                    return Err(mismatch(d, format!("[{}, {:?}]", ev.lower_bound, ev.upper_bound)));
                }
            }
            if cert.computed != opt(ev.exact) {
                return Err(mismatch(&cert.computed, opt(ev.exact)));
            }
        }
        ClaimKind::Codimension => {
            if cert.computed != json!(code.codimension()) {
                return Err(mismatch(&cert.computed, code.codimension()));
            }
        }
        ClaimKind::CoveringRadius => {
            let ev: CoveringEvidence = serde_json::from_value(cert.evidence.clone()).map_err(malformed)?;
            let expected = code.geometry().q().pow(code.codimension() as u32);
            if ev.syndromes != expected {
                return Err(mismatch(ev.syndromes, expected));
            }
            if let Some(r) = ev.radius {
                if ev.per_layer.len() != r + 1 || ev.per_layer.iter().sum::<u64>() != expected {
                    return Err(mismatch(format!("{:?}", ev.per_layer), expected));
                }
            }
        }
        ClaimKind::Optimality | ClaimKind::Defect | ClaimKind::Density => {
            if cert.evidence.is_null() {
                return Ok(());
            }
            let recorded: BoundReport = serde_json::from_value(cert.evidence["bounds"].clone()).map_err(malformed)?;
            let fresh = sphere_packing_check(code, recorded.distance);
            if fresh != recorded {
                return Err(mismatch(format!("{recorded:?}"), format!("{fresh:?}")));
            }
        }
        ClaimKind::Classification => {
            if cert.evidence.is_null() {
                return Ok(());
            }
            let d = cert.evidence["distance"].as_u64().ok_or(ReplayError::Malformed("distance".into()))?;
            let r = cert.evidence["covering_radius"].as_u64().ok_or(ReplayError::Malformed("radius".into()))?;
            let class = classify(d as usize, r as usize);
            if cert.computed != json!(class) {
                return Err(mismatch(&cert.computed, json!(class)));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests;
