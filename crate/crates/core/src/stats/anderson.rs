//! Anderson-Darling goodness-of-fit statistic.

use crate::error::{Error, Result};

/// `A²` above this value rejects the candidate law at 95% confidence.
pub const AD_THRESHOLD: f64 = 2.5;

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct AndersonDarling {
    pub a2: f64,
    pub n: usize,
    /// Samples whose CDF value hit 0 or 1 and was clamped.
    pub clamped: usize,
}

impl AndersonDarling {
    pub fn rejects(&self) -> bool {
        self.a2 > AD_THRESHOLD
    }
}

/// `A² = -N - Σ_k (2k-1)/N · (ln F(s_k) + ln(1 - F(s_{N+1-k})))` over
/// ascending samples. CDF values are clamped to `[ε, 1-ε]`.
pub fn anderson_darling<F: Fn(f64) -> f64>(sorted: &[f64], cdf: F) -> Result<AndersonDarling> {
    let n = sorted.len();
    if n == 0 {
        return Err(Error::InsufficientSamples { needed: 1, got: 0 });
    }
    if sorted.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(Error::InvalidArgument("samples must be sorted ascending".into()));
    }
    let eps = f64::EPSILON;
    let mut clamped = 0;
    let f: Vec<f64> = sorted
        .iter()
        .map(|&s| {
            let v = cdf(s);
            if v <= 0.0 || v >= 1.0 || v.is_nan() {
                clamped += 1;
            }
            if v.is_nan() { 0.5 } else { v.clamp(eps, 1.0 - eps) }
        })
        .collect();
    let nf = n as f64;
    let mut sum = 0.0;
    for k in 0..n {
        let w = (2 * k + 1) as f64 / nf;
        sum += w * (f[k].ln() + (-f[n - 1 - k]).ln_1p());
    }
    Ok(AndersonDarling { a2: -nf - sum, n, clamped })
}

/// Sorts a copy of the samples and applies [`anderson_darling`].
pub fn anderson_darling_unsorted<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> Result<AndersonDarling> {
    let mut s = samples.to_vec();
    s.sort_by(f64::total_cmp);
    anderson_darling(&s, cdf)
}
