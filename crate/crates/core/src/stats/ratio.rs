//! Complex spacing ratios `Z = (λ_NN - λ)/(λ_NNN - λ)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::neighbors::{PlaneIndex, DUPLICATE_TOL};

pub const POISSON_MEAN_R: f64 = 2.0 / 3.0;
pub const POISSON_MEAN_NEG_COS: f64 = 0.0;
pub const GINUE_MEAN_R: f64 = 0.74;
pub const GINUE_MEAN_NEG_COS: f64 = 0.24;

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct RatioSample {
    /// Position of the reference point in the input slice.
    pub index: usize,
    pub z: Complex64,
    pub r: f64,
    /// `arg Z` in `(-π, π]`.
    pub theta: f64,
}

impl RatioSample {
    pub fn from_z(index: usize, z: Complex64) -> Self {
        let mut theta = z.arg();
        if theta <= -PI {
            theta = PI;
        }
        RatioSample { index, z, r: z.norm(), theta }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RatioSet {
    pub samples: Vec<RatioSample>,
    pub duplicates: usize,
}

pub fn complex_ratios(points: &[Complex64]) -> Result<RatioSet> {
    if points.len() < 3 {
        return Err(Error::InsufficientSamples { needed: 3, got: points.len() });
    }
    let index = PlaneIndex::new(points);
    let mut set = RatioSet::default();
    for (i, &lambda) in points.iter().enumerate() {
        let (nbrs, dups) = index.distinct_neighbors(i, 2, DUPLICATE_TOL);
        if dups > 0 {
            set.duplicates += 1;
            continue;
        }
        if nbrs.len() < 2 {
            continue;
        }
        let z = (points[nbrs[0].0] - lambda) / (points[nbrs[1].0] - lambda);
        set.samples.push(RatioSample::from_z(i, z));
    }
    Ok(set)
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioAverages {
    pub mean_r: f64,
    pub mean_neg_cos: f64,
    pub count: usize,
}

pub fn ratio_averages(samples: &[RatioSample]) -> Result<RatioAverages> {
    if samples.is_empty() {
        return Err(Error::InsufficientSamples { needed: 1, got: 0 });
    }
    let n = samples.len() as f64;
    let mean_r = samples.iter().map(|s| s.r).sum::<f64>() / n;
    let mean_neg_cos = -samples.iter().map(|s| s.theta.cos()).sum::<f64>() / n;
    Ok(RatioAverages { mean_r, mean_neg_cos, count: samples.len() })
}
