use super::*;
use crate::cyclic::{covering_radius_hamming, cyclic_make, hamming_code_make, min_distance_hamming, LinearCode};
use crate::families::{build, FamilySpec, Thm61Params};
use crate::gf::Field;
use crate::srspace::{Geometry, PhiSpec};

const B: u128 = 1_000_000_000;

fn thm61(q: u64, m: usize, u: usize) -> Built {
    build(&FamilySpec::Thm61(Thm61Params { q, m, u, phi: PhiSpec::default() })).unwrap()
}

#[test]
fn exit_codes() {
    use Verdict::*;
    assert_eq!(exit_code(&[Confirmed, Confirmed]), 0);
    assert_eq!(exit_code(&[Confirmed, RefutedByCriterion]), 1);
    assert_eq!(exit_code(&[Refuted, Inconclusive]), 2);
    assert_eq!(exit_code(&[]), 0);
}

#[test]
fn quasi_perfect_pipeline() {
    let built = thm61(2, 2, 2);
    let run = certify_all(&built, &RunOptions { parallel: false, ..Default::default() }).unwrap();
    assert_eq!(run.get(ClaimKind::Distance).unwrap().computed, json!(3));
    assert_eq!(run.get(ClaimKind::CoveringRadius).unwrap().computed, json!(2));
    assert_eq!(run.get(ClaimKind::Classification).unwrap().computed, json!("QUASI_PERFECT"));
    assert_eq!(run.get(ClaimKind::Defect).unwrap().computed, json!(2));
    assert_eq!(run.get(ClaimKind::Density).unwrap().computed, json!("23/32"));
    let opt = run.get(ClaimKind::Optimality).unwrap();
    assert_eq!(opt.verdict, Verdict::RefutedByCriterion);
    assert_eq!(opt.evidence["bounds"]["optimality"]["volume"], json!("46"));
    assert_eq!(opt.evidence["bounds"]["radius_two"]["volume"], json!("886"));
    for c in &run.certificates {
        replay(c, &built).unwrap();
    }
}

#[test]
fn replay_detects_tampering() {
    let built = thm61(2, 2, 2);
    let run = certify_all(
        &built,
        &RunOptions { claims: Some(vec![ClaimKind::Distance]), parallel: false, ..Default::default() },
    )
    .unwrap();
    let mut cert = run.certificates[0].clone();
    cert.evidence["witness"]["blocks"][0][0][0] = json!(1 - cert.evidence["witness"]["blocks"][0][0][0].as_u64().unwrap());
    assert_eq!(replay(&cert, &built), Err(ReplayError::Tampered));
    let resealed = cert.seal();
    assert!(replay(&resealed, &built).is_err());
}

#[test]
fn whole_space_has_radius_zero() {
    let f4 = Field::get(2, 2).unwrap();
    let g = Geometry::new(2, 2, 2, 3, &PhiSpec::default()).unwrap();
    let code = SumRankCode::from_components(g, vec![LinearCode::trivial(&f4, 3), LinearCode::trivial(&f4, 3)])
        .unwrap();
    let ev = covering_radius_sr(&code, 2, B, false).unwrap();
    assert_eq!((ev.radius, ev.syndromes), (Some(0), 1));
    let d = certify_dsr(&code, None, Mode::Exhaustive, B, false).unwrap();
    assert_eq!(d.exact, Some(1));
}

#[test]
fn hamming_consistency_on_unit_blocks() {
    let cases: Vec<(u32, u32, LinearCode)> = vec![
        (2, 2, hamming_code_make(&Field::get(2, 2).unwrap(), 2).unwrap()),
        (3, 1, cyclic_make(13, &Field::get(3, 1).unwrap(), &[1]).unwrap().into_code()),
        (2, 2, cyclic_make(15, &Field::get(2, 2).unwrap(), &[0, 1, 5]).unwrap().into_code()),
        (2, 1, cyclic_make(15, &Field::get(2, 1).unwrap(), &[1, 3]).unwrap().into_code()),
    ];
    for (p, e, c) in cases {
        let q = (p as u64).pow(e);
        let g = Geometry::new(q, 1, 1, c.length(), &PhiSpec::default()).unwrap();
        let sr = SumRankCode::from_components(g, vec![c.clone()]).unwrap();
        let h = min_distance_hamming(&c, c.length(), B, false).unwrap();
        let s = certify_dsr(&sr, None, Mode::Exhaustive, B, false).unwrap();
        assert_eq!(h.distance, s.exact);
        let hr = covering_radius_hamming(&c, 6, B, false).unwrap();
        let sr_r = covering_radius_sr(&sr, 6, B, false).unwrap();
        assert_eq!(Some(hr.radius), sr_r.radius);
        assert_eq!(Some(hr.table_sha256), sr_r.table_sha256);
        assert!(hr.radius >= (h.distance.unwrap() - 1) / 2);
    }
}

#[test]
fn unit_block_hamming_code_is_perfect() {
    let f4 = Field::get(2, 2).unwrap();
    let g = Geometry::new(4, 1, 1, 5, &PhiSpec::default()).unwrap();
    let code = SumRankCode::from_components(g, vec![hamming_code_make(&f4, 2).unwrap()]).unwrap();
    let d = certify_dsr(&code, Some(3), Mode::Exhaustive, B, false).unwrap().exact.unwrap();
    let r = covering_radius_sr(&code, 3, B, false).unwrap().radius.unwrap();
    assert_eq!(classify(d, r), Classification::Perfect);
    assert_eq!(packing_density(&code, d), num_rational::BigRational::from_integer(1.into()));
}

#[test]
fn covering_cap_reports_lower_bound() {
    let f4 = Field::get(2, 2).unwrap();
    let g = Geometry::new(2, 2, 2, 3, &PhiSpec::default()).unwrap();
    let code = SumRankCode::from_components(g, vec![LinearCode::zero(&f4, 3), LinearCode::zero(&f4, 3)]).unwrap();
    let ev = covering_radius_sr(&code, 2, B, false).unwrap();
    assert_eq!((ev.radius, ev.lower_bound), (None, 3));
}
