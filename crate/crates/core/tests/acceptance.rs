//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! A `FAIL (known)` line is a pinned expectation that the exact computation
//! contradicts; the computed value is asserted instead so that any change in
//! it still fails the run.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use sumrank::certify::{certify_all, certify_dsr, ClaimKind, Mode, Run, RunOptions, Verdict};
use sumrank::cyclic::{ht_bound, LinearCode};
use sumrank::families::*;
use sumrank::gf::{Felt, Field};
use sumrank::matspace::{rank_count, vol_sr, vol_sr_lower_bound, MatFq, VolumeQuery};
use sumrank::srspace::{quaternary_pair_weight, wt_sr, CoeffWord, Geometry, PhiSpec, SrWord, SumRankCode};

const BUDGET: u128 = 1_000_000_000;

#[derive(Default)]
struct Outcome {
    checks: Vec<(String, bool)>,
    known: Vec<(String, String)>,
}

impl Outcome {
    fn check(&mut self, label: impl Into<String>, ok: bool) {
        self.checks.push((label.into(), ok));
    }

    /// A pinned expectation the computation contradicts.
    fn known(&mut self, label: impl Into<String>, why: impl Into<String>) {
        self.known.push((label.into(), why.into()));
    }
}

fn certify(spec: FamilySpec, mode: Mode, parallel: bool) -> (Built, Run) {
    let built = build(&spec).unwrap();
    let run = certify_all(&built, &RunOptions { mode, parallel, ..Default::default() }).unwrap();
    (built, run)
}

fn computed(run: &Run, kind: ClaimKind) -> serde_json::Value {
    run.get(kind).map_or(serde_json::Value::Null, |c| c.computed.clone())
}

fn verdict(run: &Run, kind: ClaimKind) -> Option<Verdict> {
    run.get(kind).map(|c| c.verdict)
}

fn volume(run: &Run, field: &str) -> String {
    let c = run.get(ClaimKind::Optimality).expect("optimality certificate");
    c.evidence["bounds"][field]["volume"].as_str().unwrap_or("").to_string()
}

fn c1(o: &mut Outcome) {
    let g = Geometry::new(2, 2, 2, 2, &PhiSpec::default()).unwrap();
    let mut agree = 0;
    for a in 0..16u32 {
        for b in 0..16u32 {
            let a0 = vec![a % 4, a / 4];
            let a1 = vec![b % 4, b / 4];
            let closed = quaternary_pair_weight(&a0, &a1).unwrap();
            let w = g.forward(&CoeffWord { coeffs: vec![a0, a1] }).unwrap();
            if closed == wt_sr(&w) {
                agree += 1;
            }
        }
    }
    o.check(format!("closed form = rank sum on {agree}/256 pairs"), agree == 256);
}

fn random_code(rng: &mut ChaCha8Rng, f: &std::sync::Arc<Field>, t: usize, k: usize) -> LinearCode {
    let rows: Vec<Vec<Felt>> =
        (0..k).map(|_| (0..t).map(|_| rng.gen_range(0..f.size())).collect()).collect();
    LinearCode::from_generator(f, t, &rows).unwrap()
}

fn hamming_distance(c: &LinearCode) -> Option<usize> {
    c.codewords().iter().map(|w| w.iter().filter(|&&x| x != 0).count()).filter(|&w| w > 0).min()
}

fn words(g: &Geometry, comps: &[LinearCode]) -> Vec<SrWord> {
    let mut out = vec![vec![]];
    for c in comps {
        let cws = c.codewords();
        out = out.into_iter().flat_map(|p: Vec<Vec<Felt>>| cws.iter().map(move |w| {
            let mut p = p.clone();
            p.push(w.clone());
            p
        })).collect();
    }
    out.into_iter().map(|coeffs| g.forward(&CoeffWord { coeffs }).unwrap()).collect()
}

fn brute_distance(ws: &[SrWord]) -> Option<usize> {
    ws.iter().map(wt_sr).filter(|&w| w > 0).min()
}

fn c2(o: &mut Outcome) {
    let f4 = Field::get(2, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    let (mut bound_ok, mut exact_ok, mut n) = (0, 0, 0);
    while n < 50 {
        let t = rng.gen_range(1..=4);
        let k0 = rng.gen_range(0..=t.min(2));
        let k1 = rng.gen_range(0..=t.min(2));
        let comps = vec![random_code(&mut rng, &f4, t, k0), random_code(&mut rng, &f4, t, k1)];
        if comps.iter().all(|c| c.dimension() == 0) {
            continue;
        }
        n += 1;
        let g = Geometry::new(2, 2, 2, t, &PhiSpec::default()).unwrap();
        let truth = brute_distance(&words(&g, &comps)).unwrap();
        let d0 = hamming_distance(&comps[0]).unwrap_or(usize::MAX);
        let d1 = hamming_distance(&comps[1]).map_or(usize::MAX, |d| 2 * d);
        if truth >= d0.min(d1) {
            bound_ok += 1;
        }
        let code = SumRankCode::from_components(g, comps).unwrap();
        if certify_dsr(&code, None, Mode::Exhaustive, BUDGET, true).unwrap().exact == Some(truth) {
            exact_ok += 1;
        }
    }
    o.check(format!("d ≥ min{{d_0, 2d_1}} on {bound_ok}/50 random configurations"), bound_ok == 50);
    o.check(format!("exhaustive certifier equals brute force on {exact_ok}/50"), exact_ok == 50);
}

fn c3(o: &mut Outcome) {
    let (b, run) = certify(
        FamilySpec::Thm31(Thm31Params { q: 4, m: 3, lambda: 1, epsilon: DEFAULT_EPSILON }),
        Mode::Exhaustive,
        true,
    );
    let dims: Vec<_> = b.components.iter().map(|c| (c.length, c.dimension)).collect();
    o.check(format!("code {dims:?} = [(63, 56)]"), dims == vec![(63, 56)]);
    o.check("d = 4", computed(&run, ClaimKind::Distance) == json!(4));
    o.check("V_H(4,2) = 17767", volume(&run, "optimality") == "17767");
    o.check("4^7 = 16384", run.get(ClaimKind::Optimality).unwrap().evidence["bounds"]["space_per_codeword"] == json!("16384"));
    o.check("distance-optimal CONFIRMED", verdict(&run, ClaimKind::Optimality) == Some(Verdict::Confirmed));
}

fn c4(o: &mut Outcome) {
    let (b, run) = certify(FamilySpec::Thm32(Thm32Params { q: 3, m: 3 }), Mode::Exhaustive, true);
    let dims: Vec<_> = b.components.iter().map(|c| (c.length, c.dimension)).collect();
    o.check(format!("code {dims:?} = [(26, 19)]"), dims == vec![(26, 19)]);
    o.check("d = 4", computed(&run, ClaimKind::Distance) == json!(4));
    o.check("V_H(3,2) = 1353", volume(&run, "optimality") == "1353");
    o.check("3^7 = 2187", run.get(ClaimKind::Optimality).unwrap().evidence["bounds"]["space_per_codeword"] == json!("2187"));
    o.check(
        "optimality REFUTED_BY_CRITERION",
        verdict(&run, ClaimKind::Optimality) == Some(Verdict::RefutedByCriterion),
    );
}

fn c5(o: &mut Outcome) {
    let (b, run) = certify(
        FamilySpec::Thm41(Thm41Params { q: 2, s: 3, m: 1, lambda: 1, epsilon: DEFAULT_EPSILON }),
        Mode::Exhaustive,
        false,
    );
    let ev = &run.get(ClaimKind::Distance).unwrap().evidence;
    let below: u128 = ev["layers"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|l| l["weight"].as_u64().unwrap() <= 3)
        .map(|l| l["candidates"].as_u64().unwrap() as u128)
        .sum();
    let empty = ev["layers"].as_array().unwrap().iter().filter(|l| l["weight"].as_u64().unwrap() <= 3).all(|l| l["empty"] == json!(true));
    o.check("d_sr = 4", computed(&run, ClaimKind::Distance) == json!(4));
    o.check(format!("weights ≤ 3 empty after {below} membership tests (4.0e6..5.6e6)"), empty && (4_000_000..5_600_000).contains(&below));
    o.check("V_sr(2,2) = 52823", volume(&run, "optimality") == "52823");
    o.check("distance-optimal CONFIRMED", verdict(&run, ClaimKind::Optimality) == Some(Verdict::Confirmed));
    o.check("codimension 5 over F_8", b.code.component_codimension() == Some(5));
}

fn c6(o: &mut Outcome) {
    let (b, run) = certify(FamilySpec::Thm51(Thm51Params { q: 2 }), Mode::Exhaustive, true);
    let t = b.components[0].defining_set.clone().unwrap_or_default();
    o.check(format!("T = {t:?}"), t == vec![0, 1, 4, 5]);
    o.check(format!("HT bound {} ≥ 4", ht_bound(&t, 15)), ht_bound(&t, 15) >= 4);
    o.check("d_sr = 4", computed(&run, ClaimKind::Distance) == json!(4));
    o.check("Singleton defect 4", computed(&run, ClaimKind::Defect) == json!(4));
    o.check("V = 8731 > 1024, CONFIRMED", volume(&run, "optimality") == "8731" && verdict(&run, ClaimKind::Optimality) == Some(Verdict::Confirmed));
}

fn c7(o: &mut Outcome) {
    let (_, run) = certify(
        FamilySpec::Thm61(Thm61Params { q: 2, m: 2, u: 2, phi: PhiSpec::default() }),
        Mode::Exhaustive,
        true,
    );
    let cov = &run.get(ClaimKind::CoveringRadius).unwrap().evidence;
    o.check("d_sr = 3", computed(&run, ClaimKind::Distance) == json!(3));
    o.check("R_sr = 2 over 64 syndromes", computed(&run, ClaimKind::CoveringRadius) == json!(2) && cov["syndromes"] == json!(64));
    o.check("QUASI_PERFECT", computed(&run, ClaimKind::Classification) == json!("QUASI_PERFECT"));
    o.check("defect 2", computed(&run, ClaimKind::Defect) == json!(2));
    let dens = &run.get(ClaimKind::Density).unwrap().evidence["bounds"]["density"];
    o.check("μ = 46/64", dens["numerator"] == json!("46") && dens["denominator"] == json!("64"));
    o.check("886·2^14 > 2^20", volume(&run, "radius_two") == "886" && 886u64 << 14 > 1 << 20);
    let v1 = volume(&run, "optimality");
    let opt = verdict(&run, ClaimKind::Optimality);
    o.check(format!("V(1) = {v1} computed exactly"), v1 == "46" && opt == Some(Verdict::RefutedByCriterion));
    o.known(
        "distance-optimal",
        "d = 3 needs V(⌊3/2⌋) = V(1) = 46 > 64 to exclude distance 4; the radius-2 comparison only excludes distance 5",
    );

    let g = Geometry::new(2, 2, 3, 1, &PhiSpec::default()).unwrap();
    let images: BTreeSet<u64> = (0..8)
        .flat_map(|a| (0..8).map(move |b| (a, b)))
        .map(|(a, b)| g.forward(&CoeffWord { coeffs: vec![vec![a], vec![b]] }).unwrap().blocks[0].index())
        .collect();
    o.check(format!("2×3 codec hits {} of 64 matrices", images.len()), images.len() == 64);
    let (_, run) = certify(
        FamilySpec::Thm61(Thm61Params { q: 2, m: 3, u: 2, phi: PhiSpec::default() }),
        Mode::Exhaustive,
        true,
    );
    let cov = &run.get(ClaimKind::CoveringRadius).unwrap().evidence;
    o.check("rectangular R_sr = 2 by full coverage", computed(&run, ClaimKind::CoveringRadius) == json!(2) && cov["radius"] == json!(2));
    o.check(format!("rectangular coverage over {} syndromes = 2^9", cov["syndromes"]), cov["syndromes"] == json!(512));
    o.known("4096-syndrome coverage", "codimension is 3 over F_8 = 9 over F_2, so there are 512 syndromes");
}

fn c8(o: &mut Outcome) {
    let (b, run) = certify(
        FamilySpec::Thm71(Thm71Params { c0: None, max_length: 21, input_budget: 100_000_000 }),
        Mode::Exhaustive,
        true,
    );
    let input = &b.components[0];
    o.check(
        format!("input [{}, {}]_4 certified d = 4, R_H = 2", input.length, input.dimension),
        b.evidence[0].distance.distance == Some(4) && b.evidence[0].covering.radius == 2,
    );
    o.check("combined d_sr = 4", computed(&run, ClaimKind::Distance) == json!(4));
    o.check("combined R_sr = 2", computed(&run, ClaimKind::CoveringRadius) == json!(2));
    let refused = [
        ExternalCode::Hamming { field: "2^2".into(), hamming_redundancy: 2 },
        ExternalCode::Cyclic { field: "2^2".into(), length: 5, defining_set: vec![0, 1] },
    ]
    .into_iter()
    .all(|c0| {
        matches!(
            thm71_code(&Thm71Params { c0: Some(c0), max_length: 21, input_budget: 100_000_000 }),
            Err(FamilyError::InputNotVerified(_))
        )
    });
    o.check("uncertified inputs refused", refused);
}

fn c9(o: &mut Outcome) {
    let f4 = Field::get(2, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0009);
    let (mut ok, mut n) = (0, 0);
    while n < 30 {
        let t = rng.gen_range(1..=3);
        let make = |rng: &mut ChaCha8Rng| {
            let (k0, k1) = (rng.gen_range(0..=t.min(2)), rng.gen_range(0..=t.min(2)));
            let comps = vec![random_code(rng, &f4, t, k0), random_code(rng, &f4, t, k1)];
            let g = Geometry::new(2, 2, 2, t, &PhiSpec::default()).unwrap();
            (words(&g, &comps), SumRankCode::from_components(g, comps).unwrap())
        };
        let (wa, a) = make(&mut rng);
        let (wb, b) = make(&mut rng);
        let (Some(d1), Some(d2)) = (brute_distance(&wa), brute_distance(&wb)) else { continue };
        n += 1;
        let plain: Vec<SrWord> = wa.iter().flat_map(|x| wb.iter().map(move |y| x.concat(&x.add(y)))).collect();
        let truth = brute_distance(&plain).unwrap();
        let p = SumRankCode::plotkin(a, b).unwrap();
        let cert = certify_dsr(&p, None, Mode::Exhaustive, BUDGET, true).unwrap().exact;
        if truth == (2 * d1).min(d2) && cert == Some(truth) {
            ok += 1;
        }
    }
    o.check(format!("Plotkin d = min{{2d_1, d_2}} on {ok}/30 instances"), ok == 30);

    let (b, run) = certify(FamilySpec::Cor81(Cor81Params { q: 2, s: 3, m: 1 }), Mode::Compositional, true);
    let ev = &run.get(ClaimKind::Distance).unwrap().evidence;
    o.check("block length 14", b.code.geometry().t() == 14);
    o.check("codimension 18", b.code.codimension() == 18);
    o.check(
        "compositional d_sr = 4 with witness",
        ev["mode"] == json!("compositional") && computed(&run, ClaimKind::Distance) == json!(4) && ev["witness"]["weight"] == json!(4),
    );
}

fn brute_census(q: u64, n: usize, m: usize) -> Vec<u64> {
    let f = Field::of_size(q).unwrap();
    let mut census = vec![0u64; n.min(m) + 1];
    for i in 0..q.pow((n * m) as u32) {
        census[MatFq::from_index(&f, n, m, i).rank()] += 1;
    }
    census
}

fn c10(o: &mut Outcome) {
    let shapes: Vec<(usize, usize)> = (1..=3).flat_map(|n| (1..=3).map(move |m| (n, m))).collect();
    let (mut cases, mut agree) = (0, 0);
    for q in [2u64, 3] {
        let census: Vec<Vec<u64>> = shapes.iter().map(|&(n, m)| brute_census(q, n, m)).collect();
        let mut tuples: Vec<Vec<usize>> = vec![vec![]];
        for _ in 0..3 {
            let next: Vec<Vec<usize>> = tuples
                .iter()
                .filter(|t| t.len() == tuples.last().unwrap().len())
                .flat_map(|t| (0..shapes.len()).map(move |s| [t.clone(), vec![s]].concat()))
                .collect();
            tuples.extend(next);
        }
        for tuple in tuples.iter().filter(|t| !t.is_empty()) {
            // distribution of total rank by direct convolution of enumerated censuses
            let mut dist = vec![1u128];
            for &s in tuple {
                let mut next = vec![0u128; dist.len() + census[s].len() - 1];
                for (i, a) in dist.iter().enumerate() {
                    for (j, b) in census[s].iter().enumerate() {
                        next[i + j] += a * *b as u128;
                    }
                }
                dist = next;
            }
            for r in 0..=3 {
                cases += 1;
                let brute: u128 = dist.iter().take(r + 1).sum();
                let query = VolumeQuery { q, block_sizes: tuple.iter().map(|&s| shapes[s]).collect(), radius: r };
                if vol_sr(&query) == brute.into() {
                    agree += 1;
                }
            }
        }
    }
    o.check(format!("vol_sr = enumeration on {agree}/{cases} cases"), agree == cases);

    let (mut total, mut good) = (0, 0);
    for q in [2u64, 3, 4, 5] {
        for n in 1..=4 {
            for m in 1..=4 {
                total += 1;
                let formula = (q.pow(n as u32) - 1) * (q.pow(m as u32) - 1) / (q - 1);
                if rank_count(q, n, m, 1).unwrap() == formula.into() {
                    good += 1;
                }
            }
        }
    }
    o.check(format!("rank-one count formula on {good}/{total}"), good == total);

    let (mut total, mut good) = (0, 0);
    for q in [2u64, 3, 4, 5] {
        for s in 1..=4 {
            for t in 1..=20 {
                total += 1;
                let exact = vol_sr(&VolumeQuery::uniform(q, t, s, s, 2));
                let lb = vol_sr_lower_bound(q, s, t);
                if lb <= num_rational::BigRational::from_integer(exact.into()) {
                    good += 1;
                }
            }
        }
    }
    o.check(format!("lower bound ≤ vol_sr on {good}/{total}"), good == total);
}

fn certificate_files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.file_name().unwrap() != "timing.json")
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap()))
        .collect();
    out.sort();
    out
}

fn c11(o: &mut Outcome) {
    let tmp = tempfile::tempdir().unwrap();
    let configs = [
        ("thm41", "family = \"THM41\"\nparams = { q = 2, s = 3, m = 1, lambda = 1 }"),
        ("thm51", "family = \"THM51\"\nparams = { q = 2 }"),
        ("thm61", "family = \"THM61\"\nparams = { q = 2, m = 2, u = 2 }"),
        ("thm61r", "family = \"THM61\"\nparams = { q = 2, m = 3, u = 2 }"),
    ];
    let bin = env!("CARGO_BIN_EXE_sumrank");
    for (name, code) in configs {
        let cfg = tmp.path().join(format!("{name}.toml"));
        fs::write(&cfg, format!("schema_version = 1\n[code]\n{code}\n")).unwrap();
        let mut trees = Vec::new();
        for (run, serial) in [("a", false), ("b", false), ("s", true)] {
            let out = tmp.path().join(format!("{name}-{run}"));
            let mut cmd = Command::new(bin);
            cmd.args(["certify", "--config"]).arg(&cfg).arg("--out").arg(&out);
            if serial {
                cmd.arg("--serial");
            }
            let status = cmd.output().unwrap().status;
            assert!(status.code().is_some_and(|c| c <= 1), "{name}: {status}");
            trees.push(certificate_files(&out));
        }
        o.check(
            format!("{name}: {} certificates identical across 2 parallel runs and 1 serial run", trees[0].len()),
            !trees[0].is_empty() && trees[0] == trees[1] && trees[0] == trees[2],
        );
    }
}

fn main() {
    let criteria: Vec<(u32, &str, Duration, fn(&mut Outcome))> = vec![
        (1, "pair weight closed form", Duration::from_secs(1), c1),
        (2, "component distance bound", Duration::from_secs(60), c2),
        (3, "THM31 (4,3,1)", Duration::from_secs(60), c3),
        (4, "THM32 (3,3)", Duration::from_secs(60), c4),
        (5, "THM41 (2,3,1,1), serial", Duration::from_secs(300), c5),
        (6, "THM51 (2)", Duration::from_secs(300), c6),
        (7, "THM61 (2,2,2) and (2,3,2)", Duration::from_secs(360), c7),
        (8, "THM71 pipeline", Duration::from_secs(300), c8),
        (9, "Plotkin sum and COR81 (2,3,1)", Duration::from_secs(300), c9),
        (10, "volume oracle", Duration::from_secs(60), c10),
        (11, "determinism", Duration::from_secs(900), c11),
    ];
    let mut unexpected = 0;
    for (n, name, limit, f) in criteria {
        let mut o = Outcome::default();
        let start = Instant::now();
        f(&mut o);
        let elapsed = start.elapsed();
        o.check(format!("{:.2}s ≤ {}s", elapsed.as_secs_f64(), limit.as_secs()), elapsed <= limit);
        let failed: Vec<_> = o.checks.iter().filter(|c| !c.1).collect();
        let status = if !failed.is_empty() {
            unexpected += 1;
            "FAIL"
        } else if !o.known.is_empty() {
            "FAIL (known)"
        } else {
            "PASS"
        };
        println!("{status} criterion {n}: {name}");
        for (label, ok) in &o.checks {
            println!("    [{}] {label}", if *ok { "ok" } else { "FAIL" });
        }
        for (label, why) in &o.known {
            println!("    [FAIL] {label}: {why}");
        }
    }
    if unexpected > 0 {
        println!("{unexpected} criteria failed unexpectedly");
        std::process::exit(1);
    }
}
