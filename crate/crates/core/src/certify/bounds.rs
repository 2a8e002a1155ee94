use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Pow};
use serde::{Deserialize, Serialize};

use crate::matspace::{vol_sr, VolumeQuery};
use crate::srspace::SumRankCode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Classification {
    Perfect,
    QuasiPerfect,
    Neither,
}

/// Perfect iff `r = ⌊(d-1)/2⌋`, quasi-perfect iff `r = ⌊(d-1)/2⌋ + 1`.
pub fn classify(d: usize, r: usize) -> Classification {
    let e = (d.max(1) - 1) / 2;
    if r == e {
        Classification::Perfect
    } else if r == e + 1 {
        Classification::QuasiPerfect
    } else {
        Classification::Neither
    }
}

/// One ball-volume comparison against `q^codim`, integers as decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VolumeComparison {
    pub radius: usize,
    pub volume: String,
    pub exceeds: bool,
}

/// Exact sphere-packing data for a code of certified distance `d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub q: u64,
    pub n: usize,
    pub m: usize,
    pub t: usize,
    pub distance: usize,
    pub codimension: usize,
    /// `q^codimension` over `F_q`.
    pub space_per_codeword: String,
    /// `V(⌊d/2⌋) > q^codim`: no code of the same size has distance `d + 1`.
    pub optimality: VolumeComparison,
    /// `V(⌊(d-1)/2⌋)`, the packing radius ball.
    pub packing: VolumeComparison,
    /// `V(2)`, the radius used by the construction's own volume estimate.
    pub radius_two: VolumeComparison,
    pub optimal: bool,
    pub singleton_defect: i64,
    pub density: Density,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Density {
    pub numerator: String,
    pub denominator: String,
    pub reduced: String,
}

fn ball(code: &SumRankCode, radius: usize) -> BigUint {
    let g = code.geometry();
    vol_sr(&VolumeQuery::uniform(g.q(), g.t(), g.n(), g.m(), radius))
}

fn compare(code: &SumRankCode, radius: usize, bound: &BigUint) -> VolumeComparison {
    let v = ball(code, radius);
    VolumeComparison { radius, exceeds: &v > bound, volume: v.to_string() }
}

/// `m(n·t − d + 1) − dim_q C`, the gap to the Singleton-like bound.
pub fn singleton_defect(code: &SumRankCode, d: usize) -> i64 {
    let g = code.geometry();
    let (n, m) = (g.n().min(g.m()), g.n().max(g.m()));
    (m * (n * g.t() + 1)) as i64 - (m * d) as i64 - code.dimension() as i64
}

/// `μ = V(⌊(d-1)/2⌋) / q^codim`.
pub fn packing_density(code: &SumRankCode, d: usize) -> BigRational {
    let g = code.geometry();
    let num = ball(code, (d.max(1) - 1) / 2);
    let den = BigUint::from(g.q()).pow(code.codimension() as u32);
    BigRational::new(num.into(), den.into())
}

pub fn sphere_packing_check(code: &SumRankCode, d: usize) -> BoundReport {
    let g = code.geometry();
    let space = BigUint::from(g.q()).pow(code.codimension() as u32);
    let optimality = compare(code, d / 2, &space);
    let packing = compare(code, (d.max(1) - 1) / 2, &space);
    let radius_two = compare(code, 2, &space);
    let mu = packing_density(code, d);
    let reduced = if mu.denom().is_one() {
        mu.numer().to_string()
    } else {
        format!("{}/{}", mu.numer(), mu.denom())
    };
    BoundReport {
        q: g.q(),
        n: g.n(),
        m: g.m(),
        t: g.t(),
        distance: d,
        codimension: code.codimension(),
        space_per_codeword: space.to_string(),
        optimal: optimality.exceeds,
        optimality,
        density: Density {
            numerator: packing.volume.clone(),
            denominator: space.to_string(),
            reduced,
        },
        packing,
        radius_two,
        singleton_defect: singleton_defect(code, d),
    }
}
