use serde::{Deserialize, Serialize};

use super::{Budget, CertifyError};
use crate::cyclic::{min_distance_hamming, CyclicError, HammingDistanceCertificate};
use crate::gf::{EmbeddingKind, Felt};
use crate::search::{LayerOutcome, SearchError};
use crate::srspace::{wt_sr, SrError, SrWord, Structure, SumRankCode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Every word of weight below the distance is enumerated.
    Exhaustive,
    /// The lower bound comes from certified component distances; only the
    /// witness is searched for.
    Compositional,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerRecord {
    pub weight: usize,
    pub candidates: u128,
    pub empty: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentRecord {
    /// Location in the code, e.g. `second.C_0`.
    pub path: String,
    pub dimension: usize,
    pub distance: Option<usize>,
    pub searched: usize,
    pub candidates: u128,
    pub witness: Option<Vec<Felt>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub weight: usize,
    pub source: String,
    pub blocks: Vec<Vec<Vec<Felt>>>,
}

/// Evidence for the minimum sum-rank distance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceEvidence {
    pub mode: Mode,
    /// Every nonzero codeword has weight at least this.
    pub lower_bound: usize,
    pub lower_bound_source: String,
    /// Weight of the recorded witness.
    pub upper_bound: Option<usize>,
    pub exact: Option<usize>,
    pub layers: Vec<LayerRecord>,
    pub components: Vec<ComponentRecord>,
    pub witness: Option<WitnessRecord>,
    pub candidates: u128,
    /// Why the interval was left open, if it was.
    pub incomplete: Option<String>,
}

impl DistanceEvidence {
    fn new(mode: Mode, source: &str) -> Self {
        Self {
            mode,
            lower_bound: 1,
            lower_bound_source: source.to_string(),
            upper_bound: None,
            exact: None,
            layers: Vec::new(),
            components: Vec::new(),
            witness: None,
            candidates: 0,
            incomplete: None,
        }
    }

    fn close(&mut self) {
        if self.upper_bound.is_some() && self.upper_bound == Some(self.lower_bound) {
            self.exact = self.upper_bound;
        }
    }
}

fn record_witness(code: &SumRankCode, w: &SrWord, source: &str) -> WitnessRecord {
    debug_assert!(code.member(w).unwrap_or(false));
    WitnessRecord { weight: wt_sr(w), source: source.to_string(), blocks: w.to_nested() }
}

fn budget_note(e: &SearchError) -> Option<String> {
    match e {
        SearchError::BudgetExceeded { .. } => Some(e.to_string()),
        _ => None,
    }
}

/// Searches layers `from..=to` of `code` in order; returns the first witness.
/// Every empty layer is recorded.
fn layered(
    code: &SumRankCode,
    from: usize,
    to: usize,
    budget: &mut Budget,
    parallel: bool,
    layers: &mut Vec<LayerRecord>,
) -> Result<Option<SrWord>, CertifyError> {
    if from > to {
        return Ok(None);
    }
    let space = code.search_space()?;
    for w in from..=to.min(space.max_weight()) {
        match space.find_codeword(w, budget.remaining(), parallel)? {
            LayerOutcome::Empty { count } => {
                budget.spend(count);
                layers.push(LayerRecord { weight: w, candidates: count, empty: true });
            }
            LayerOutcome::Witness { word, count } => {
                budget.spend(count);
                layers.push(LayerRecord { weight: w, candidates: count, empty: false });
                return Ok(Some(code.word_from_ids(&word)));
            }
        }
    }
    Ok(None)
}

/// Exact minimum sum-rank distance, or the interval established within budget.
///
/// `expected` caps the exhaustive search: if no witness of weight `≤ expected`
/// exists, the evidence records `d > expected` and stops.
pub fn certify_dsr(
    code: &SumRankCode,
    expected: Option<usize>,
    mode: Mode,
    budget: u128,
    parallel: bool,
) -> Result<DistanceEvidence, CertifyError> {
    let mut budget = Budget::new(budget);
    let ev = match mode {
        Mode::Exhaustive => exhaustive(code, expected, &mut budget, parallel)?,
        Mode::Compositional => compositional(code, expected, &mut budget, parallel)?,
    };
    Ok(ev)
}

fn exhaustive(
    code: &SumRankCode,
    expected: Option<usize>,
    budget: &mut Budget,
    parallel: bool,
) -> Result<DistanceEvidence, CertifyError> {
    let mut ev = DistanceEvidence::new(Mode::Exhaustive, "enumeration");
    if code.dimension() == 0 {
        ev.incomplete = Some("the code has no nonzero words".into());
        return Ok(ev);
    }
    let max = code.geometry().n() * code.geometry().t();
    let to = expected.unwrap_or(max).min(max);
    let mut layers = Vec::new();
    let found = layered(code, 1, to, budget, parallel, &mut layers);
    ev.lower_bound = 1 + layers.iter().take_while(|l| l.empty).count();
    ev.layers = layers;
    ev.candidates = budget.spent();
    match found {
        Ok(Some(w)) => {
            let rec = record_witness(code, &w, "layer search");
            ev.upper_bound = Some(rec.weight);
            ev.witness = Some(rec);
        }
        Ok(None) => {
            ev.incomplete = Some(format!("no codeword of weight ≤ {to}"));
        }
        Err(CertifyError::Search(e)) if budget_note(&e).is_some() => {
            ev.incomplete = budget_note(&e);
        }
        Err(e) => return Err(e),
    }
    ev.close();
    Ok(ev)
}

/// Lower bounds per sub-code, as computed for the compositional mode.
enum Bounds {
    Components { lower: Option<usize>, witnesses: Vec<Option<Vec<Felt>>> },
    Plotkin { lower: Option<usize>, first: Box<Bounds>, second: Box<Bounds> },
}

impl Bounds {
    /// `None` means the code has no nonzero words.
    fn lower(&self) -> Option<usize> {
        match self {
            Bounds::Components { lower, .. } | Bounds::Plotkin { lower, .. } => *lower,
        }
    }
}

fn component_cert(
    comp: &crate::cyclic::LinearCode,
    w_max: usize,
    budget: &mut Budget,
    parallel: bool,
) -> Result<HammingDistanceCertificate, CertifyError> {
    match min_distance_hamming(comp, w_max, budget.remaining(), parallel) {
        Ok(c) => {
            budget.spend(c.candidates);
            Ok(c)
        }
        Err(CyclicError::Search(e)) => Err(CertifyError::Search(e)),
        Err(e) => Err(e.into()),
    }
}

fn lower_bounds(
    code: &SumRankCode,
    target: usize,
    path: &str,
    budget: &mut Budget,
    parallel: bool,
    records: &mut Vec<ComponentRecord>,
) -> Result<Bounds, CertifyError> {
    match code.structure() {
        Structure::Components(comps) => {
            if code.geometry().codec().phi().kind() != EmbeddingKind::Inclusion {
                return Err(CertifyError::CompositionalUnavailable(
                    "the component bound needs a multiplicative embedding".into(),
                ));
            }
            let mut lower: Option<usize> = None;
            let mut witnesses = Vec::new();
            for (j, comp) in comps.iter().enumerate() {
                if comp.dimension() == 0 {
                    witnesses.push(None);
                    continue;
                }
                // only whether (j+1)·d_j reaches the target matters
                let w_max = target.div_ceil(j + 1).max(1);
                let cert = component_cert(comp, w_max, budget, parallel)?;
                let bound = (j + 1) * cert.distance.unwrap_or(cert.searched + 1);
                lower = Some(lower.map_or(bound, |l| l.min(bound)));
                records.push(ComponentRecord {
                    path: format!("{path}C_{j}"),
                    dimension: comp.dimension(),
                    distance: cert.distance,
                    searched: cert.searched,
                    candidates: cert.candidates,
                    witness: cert.witness.clone(),
                });
                witnesses.push(cert.witness);
            }
            Ok(Bounds::Components { lower, witnesses })
        }
        Structure::Plotkin(a, b) => {
            let first =
                lower_bounds(a, target.div_ceil(2), &format!("{path}first."), budget, parallel, records)?;
            let second = lower_bounds(b, target, &format!("{path}second."), budget, parallel, records)?;
            let lower = match (first.lower(), second.lower()) {
                (Some(x), Some(y)) => Some((2 * x).min(y)),
                (Some(x), None) => Some(2 * x),
                (None, y) => y,
            };
            Ok(Bounds::Plotkin { lower, first: Box::new(first), second: Box::new(second) })
        }
    }
}

/// Best witness from structure, then layered search between the lower bound
/// and the structured weight. Returns the word, its source and the lower bound
/// raised by any empty layers.
fn witness(
    code: &SumRankCode,
    bounds: &Bounds,
    budget: &mut Budget,
    parallel: bool,
    layers: &mut Vec<LayerRecord>,
) -> Result<Option<(SrWord, String, usize)>, CertifyError> {
    let Some(lower) = bounds.lower() else {
        return Ok(None);
    };
    let g = code.geometry();
    let mut best: Option<(SrWord, String)> = None;
    let consider = |w: SrWord, src: String, best: &mut Option<(SrWord, String)>| {
        if best.as_ref().map_or(true, |(b, _)| wt_sr(&w) < wt_sr(b)) {
            *best = Some((w, src));
        }
    };
    match (code.structure(), bounds) {
        (Structure::Components(_), Bounds::Components { witnesses, .. }) => {
            for (j, c) in witnesses.iter().enumerate() {
                if let Some(c) = c {
                    let mut cw = g.zero_coeffs();
                    cw.coeffs[j] = c.clone();
                    consider(g.forward(&cw)?, format!("image of a C_{j} codeword"), &mut best);
                }
            }
        }
        (Structure::Plotkin(a, b), Bounds::Plotkin { first, second, .. }) => {
            if let Some((w, src, _)) = witness(a, first, budget, parallel, layers)? {
                consider(w.concat(&w), format!("(w | w) with w from the first half: {src}"), &mut best);
            }
            if let Some((w, src, _)) = witness(b, second, budget, parallel, layers)? {
                let zero = b.geometry().zero_word();
                consider(zero.concat(&w), format!("(0 | w) with w from the second half: {src}"), &mut best);
            }
        }
        _ => unreachable!("bounds follow the code structure"),
    }
    let ceiling = best.as_ref().map(|(w, _)| wt_sr(w));
    if ceiling == Some(lower) {
        let (w, s) = best.expect("ceiling set");
        return Ok(Some((w, s, lower)));
    }
    let to = ceiling.map_or(g.n() * g.t(), |c| c - 1);
    let mut own = Vec::new();
    let found = match layered(code, lower, to, budget, parallel, &mut own) {
        Ok(f) => f,
        Err(CertifyError::Sr(SrError::BlockSpaceTooLarge(_))) => None,
        Err(e) => return Err(e),
    };
    let raised = lower + own.iter().take_while(|l| l.empty).count();
    layers.extend(own);
    Ok(match found {
        Some(w) => Some((w, "layer search".to_string(), raised)),
        None => best.map(|(w, s)| (w, s, raised)),
    })
}

fn compositional(
    code: &SumRankCode,
    expected: Option<usize>,
    budget: &mut Budget,
    parallel: bool,
) -> Result<DistanceEvidence, CertifyError> {
    let mut ev = DistanceEvidence::new(Mode::Compositional, "components");
    let target = expected.unwrap_or(code.geometry().n() * code.geometry().t());
    let mut records = Vec::new();
    let bounds = match lower_bounds(code, target, "", budget, parallel, &mut records) {
        Ok(b) => b,
        Err(CertifyError::Search(e)) if budget_note(&e).is_some() => {
            ev.components = records;
            ev.candidates = budget.spent();
            ev.incomplete = budget_note(&e);
            return Ok(ev);
        }
        Err(e) => return Err(e),
    };
    ev.components = records;
    let Some(lower) = bounds.lower() else {
        ev.incomplete = Some("the code has no nonzero words".into());
        return Ok(ev);
    };
    ev.lower_bound = lower;
    let mut layers = Vec::new();
    let found = witness(code, &bounds, budget, parallel, &mut layers);
    ev.candidates = budget.spent();
    match found {
        Ok(Some((w, src, raised))) => {
            if raised > lower {
                ev.lower_bound_source = "components, then enumeration".into();
            }
            ev.lower_bound = raised;
            let rec = record_witness(code, &w, &src);
            ev.upper_bound = Some(rec.weight);
            ev.witness = Some(rec);
        }
        Ok(None) => ev.incomplete = Some("no witness found".into()),
        Err(CertifyError::Search(e)) if budget_note(&e).is_some() => ev.incomplete = budget_note(&e),
        Err(e) => return Err(e),
    }
    ev.layers = layers;
    ev.close();
    if ev.exact.is_none() && ev.incomplete.is_none() {
        ev.incomplete = Some("witness weight exceeds the proven lower bound".into());
    }
    Ok(ev)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclic::{cyclic_make, hamming_code_make, LinearCode};
    use crate::gf::Field;
    use crate::srspace::{Geometry, PhiSpec};

    const B: u128 = 1_000_000_000;

    fn thm61_small() -> SumRankCode {
        let f4 = Field::get(2, 2).unwrap();
        let g = Geometry::new(2, 2, 2, 5, &PhiSpec::default()).unwrap();
        SumRankCode::from_components(
            g,
            vec![hamming_code_make(&f4, 2).unwrap(), LinearCode::parity(&f4, 5)],
        )
        .unwrap()
    }

    #[test]
    fn exhaustive_and_compositional_agree() {
        let code = thm61_small();
        let ex = certify_dsr(&code, Some(3), Mode::Exhaustive, B, false).unwrap();
        assert_eq!(ex.exact, Some(3));
        assert_eq!(ex.layers.iter().filter(|l| l.empty).count(), 2);
        let co = certify_dsr(&code, Some(3), Mode::Compositional, B, false).unwrap();
        assert_eq!(co.exact, Some(3));
        assert_eq!(co.lower_bound_source, "components");
        let w = co.witness.unwrap();
        assert_eq!(w.weight, 3);
    }

    #[test]
    fn parallel_matches_serial() {
        let code = thm61_small();
        let a = certify_dsr(&code, Some(3), Mode::Exhaustive, B, true).unwrap();
        let b = certify_dsr(&code, Some(3), Mode::Exhaustive, B, false).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn wrong_expectation_leaves_interval() {
        let code = thm61_small();
        let ev = certify_dsr(&code, Some(2), Mode::Exhaustive, B, false).unwrap();
        assert_eq!(ev.exact, None);
        assert_eq!(ev.lower_bound, 3);
        assert!(ev.incomplete.is_some());
    }

    #[test]
    fn budget_leaves_interval() {
        let code = thm61_small();
        let ev = certify_dsr(&code, Some(3), Mode::Exhaustive, 50, false).unwrap();
        assert_eq!(ev.exact, None);
        assert!(ev.incomplete.unwrap().contains("budget"));
    }

    #[test]
    fn compositional_plotkin() {
        let f4 = Field::get(2, 2).unwrap();
        let g = Geometry::new(2, 2, 2, 3, &PhiSpec::default()).unwrap();
        let rep = cyclic_make(3, &f4, &[1]).unwrap().into_code();
        let c1 = SumRankCode::from_components(g.clone(), vec![LinearCode::parity(&f4, 3), rep.clone()])
            .unwrap();
        let c2 = SumRankCode::from_components(g, vec![rep, LinearCode::zero(&f4, 3)]).unwrap();
        let p = SumRankCode::plotkin(c1.clone(), c2.clone()).unwrap();
        let d1 = certify_dsr(&c1, None, Mode::Exhaustive, B, false).unwrap().exact.unwrap();
        let d2 = certify_dsr(&c2, None, Mode::Exhaustive, B, false).unwrap().exact.unwrap();
        let co = certify_dsr(&p, None, Mode::Compositional, B, false).unwrap();
        let ex = certify_dsr(&p, None, Mode::Exhaustive, B, false).unwrap();
        assert_eq!(co.exact, Some((2 * d1).min(d2)));
        assert_eq!(ex.exact, co.exact);
    }

    #[test]
    fn prefix_embedding_refuses_compositional() {
        let f8 = Field::get(2, 3).unwrap();
        let g = Geometry::new(2, 2, 3, 9, &PhiSpec::default()).unwrap();
        let code = SumRankCode::from_components(
            g,
            vec![hamming_code_make(&f8, 2).unwrap(), LinearCode::parity(&f8, 9)],
        )
        .unwrap();
        assert!(matches!(
            certify_dsr(&code, Some(3), Mode::Compositional, B, false),
            Err(CertifyError::CompositionalUnavailable(_))
        ));
    }
}
