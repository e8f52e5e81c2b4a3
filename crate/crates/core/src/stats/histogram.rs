//! Density-normalised histograms and CSV table writers.

use std::io::Write;

use serde::{Deserialize, Serialize};

use super::window::WindowPoint;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub lower: f64,
    pub bin_width: f64,
    pub density: Vec<f64>,
    /// Samples outside the range, not counted.
    pub dropped: usize,
}

impl Histogram {
    pub fn centers(&self) -> Vec<f64> {
        (0..self.density.len()).map(|i| self.lower + (i as f64 + 0.5) * self.bin_width).collect()
    }

    pub fn area(&self) -> f64 {
        self.density.iter().sum::<f64>() * self.bin_width
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "s,density")?;
        for (c, d) in self.centers().iter().zip(&self.density) {
            writeln!(out, "{c},{d}")?;
        }
        Ok(())
    }
}

/// Histogram normalised to unit area over the counted samples. The default
/// range is `[0, max]`.
pub fn histogram(samples: &[f64], bin_width: f64, range: Option<(f64, f64)>) -> Result<Histogram> {
    if !(bin_width > 0.0) {
        return Err(Error::InvalidArgument(format!("bin width must be positive, got {bin_width}")));
    }
    if samples.is_empty() {
        return Err(Error::InsufficientSamples { needed: 1, got: 0 });
    }
    let (lo, hi) = range.unwrap_or_else(|| (0.0, samples.iter().copied().fold(0.0, f64::max)));
    if !(hi >= lo) {
        return Err(Error::InvalidArgument(format!("empty range [{lo}, {hi}]")));
    }
    let bins = (((hi - lo) / bin_width).ceil() as usize).max(1);
    let mut counts = vec![0usize; bins];
    let mut dropped = 0;
    for &s in samples {
        if !(s >= lo && s <= hi) {
            dropped += 1;
            continue;
        }
        counts[(((s - lo) / bin_width) as usize).min(bins - 1)] += 1;
    }
    let kept = samples.len() - dropped;
    if kept == 0 {
        return Err(Error::InsufficientSamples { needed: 1, got: 0 });
    }
    let norm = 1.0 / (kept as f64 * bin_width);
    Ok(Histogram {
        lower: lo,
        bin_width,
        density: counts.into_iter().map(|c| c as f64 * norm).collect(),
        dropped,
    })
}

pub fn write_window_series_csv<W: Write>(series: &[WindowPoint], mut out: W) -> std::io::Result<()> {
    writeln!(out, "lambda_center,value")?;
    for p in series {
        writeln!(out, "{},{}", p.center, p.value)?;
    }
    Ok(())
}
