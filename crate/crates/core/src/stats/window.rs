//! Statistics over moving windows of a modulus-sorted spectrum.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::anderson::{anderson_darling_unsorted, AndersonDarling};
use super::distributions::ReferenceDistribution;
use super::ratio::{complex_ratios, ratio_averages, RatioSample};
use super::spacing::{normalize_mean, unfold, SpacingSample};
use crate::error::{Error, Result};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WindowStatistic {
    MeanR,
    MeanNegCos,
    AdPoisson,
    AdGinue,
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindowPoint {
    /// Mean `|λ|` over the window.
    pub center: f64,
    pub value: f64,
}

/// Per-eigenvalue ratios and unfolded spacings of a modulus-sorted spectrum.
/// Both are computed once on the full set; windows then select by index.
#[derive(Clone, Debug)]
pub struct SpectrumAnalysis {
    pub moduli: Vec<f64>,
    ratios: Vec<Option<RatioSample>>,
    spacings: Vec<Option<SpacingSample>>,
    pub duplicates: usize,
    pub edge_flagged: usize,
}

impl SpectrumAnalysis {
    pub fn new(sorted: &[Complex64], k_neighbors: usize) -> Result<Self> {
        let n = sorted.len();
        let rs = complex_ratios(sorted)?;
        let sp = unfold(sorted, k_neighbors)?;
        let mut ratios = vec![None; n];
        for s in rs.samples {
            ratios[s.index] = Some(s);
        }
        let mut spacings = vec![None; n];
        for s in &sp.samples {
            spacings[s.index] = Some(*s);
        }
        Ok(SpectrumAnalysis {
            moduli: sorted.iter().map(|z| z.norm()).collect(),
            ratios,
            spacings,
            duplicates: rs.duplicates.max(sp.duplicates),
            edge_flagged: sp.edge_flagged,
        })
    }

    pub fn len(&self) -> usize {
        self.moduli.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moduli.is_empty()
    }

    pub fn ratios(&self, range: std::ops::Range<usize>) -> Vec<RatioSample> {
        self.ratios[range].iter().flatten().copied().collect()
    }

    /// Unfolded spacings of the index range, renormalised to unit mean
    /// within the range.
    pub fn unfolded(&self, range: std::ops::Range<usize>) -> Vec<f64> {
        let mut s: Vec<SpacingSample> = self.spacings[range].iter().flatten().copied().collect();
        normalize_mean(&mut s);
        s.into_iter().map(|x| x.unfolded).collect()
    }

    pub fn anderson_darling(
        &self,
        range: std::ops::Range<usize>,
        reference: ReferenceDistribution,
    ) -> Result<AndersonDarling> {
        anderson_darling_unsorted(&self.unfolded(range), |s| reference.cdf(s))
    }

    pub fn statistic(&self, range: std::ops::Range<usize>, stat: WindowStatistic) -> Result<f64> {
        Ok(match stat {
            WindowStatistic::MeanR => ratio_averages(&self.ratios(range))?.mean_r,
            WindowStatistic::MeanNegCos => ratio_averages(&self.ratios(range))?.mean_neg_cos,
            WindowStatistic::AdPoisson => {
                self.anderson_darling(range, ReferenceDistribution::POISSON_2D)?.a2
            }
            WindowStatistic::AdGinue => {
                self.anderson_darling(range, ReferenceDistribution::GINUE_SCALED)?.a2
            }
        })
    }

    /// Contiguous index windows `[start, start + size)` with the given
    /// stride; a trailing partial window is dropped.
    pub fn windows(&self, size: usize, stride: usize) -> Result<Vec<std::ops::Range<usize>>> {
        window_ranges(self.len(), size, stride)
    }

    pub fn center(&self, range: std::ops::Range<usize>) -> f64 {
        let len = range.len() as f64;
        self.moduli[range].iter().sum::<f64>() / len
    }

    pub fn series(&self, size: usize, stride: usize, stat: WindowStatistic) -> Result<Vec<WindowPoint>> {
        self.windows(size, stride)?
            .into_iter()
            .map(|r| Ok(WindowPoint { center: self.center(r.clone()), value: self.statistic(r, stat)? }))
            .collect()
    }
}

pub fn window_ranges(n: usize, size: usize, stride: usize) -> Result<Vec<std::ops::Range<usize>>> {
    if size == 0 || stride == 0 {
        return Err(Error::InvalidArgument("window size and stride must be positive".into()));
    }
    if size > n {
        return Err(Error::InsufficientSamples { needed: size, got: n });
    }
    Ok((0..=n - size).step_by(stride).map(|s| s..s + size).collect())
}

/// Windowed statistic of a modulus-sorted spectrum; see [`SpectrumAnalysis`].
pub fn moving_window_average(
    sorted: &[Complex64],
    window_size: usize,
    stride: usize,
    stat: WindowStatistic,
    k_neighbors: usize,
) -> Result<Vec<WindowPoint>> {
    if window_size > sorted.len() {
        return Err(Error::InsufficientSamples { needed: window_size, got: sorted.len() });
    }
    SpectrumAnalysis::new(sorted, k_neighbors)?.series(window_size, stride, stat)
}
