//! Reference nearest-neighbour spacing laws for complex spectra: the 2D
//! Poisson law (linear repulsion) and the Ginibre unitary ensemble law
//! (cubic repulsion), plus the unit-mean rescaling of the latter.

use std::f64::consts::PI;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Truncation used for the cached GinUE table.
pub const GINUE_K_MAX: usize = 200;
/// Largest spacing tabulated; the GinUE density is below 1e-300 beyond it.
pub const GINUE_S_MAX: f64 = 8.0;
/// Grid step of the cached CDF table.
pub const GINUE_TABLE_STEP: f64 = 1e-3;
/// Allowed deficit `1 - Γ(k_max+1, s²)/k_max!` of the last product factor.
pub const GINUE_TAIL_TOL: f64 = 1e-13;

/// `P_2DP(s) = (π/2) s exp(-π s²/4)`.
pub fn p_2dp(s: f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    0.5 * PI * s * (-0.25 * PI * s * s).exp()
}

/// `F_2DP(s) = 1 - exp(-π s²/4)`.
pub fn cdf_2dp(s: f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    -(-0.25 * PI * s * s).exp_m1()
}

/// Inverse of [`cdf_2dp`].
pub fn quantile_2dp(u: f64) -> f64 {
    (-4.0 * (-u).ln_1p() / PI).sqrt()
}

/// GinUE spacing density truncated at `k_max` terms in both the product and
/// the sum,
///
/// ```text
/// P(s) = Π_{k=1}^{k_max} Γ(1+k, s²)/k!  ·  Σ_{k=1}^{k_max} 2 s^{2k+1} e^{-s²} / Γ(1+k, s²).
/// ```
///
/// `Γ(1+k, x)/k!` is the Poisson(x) distribution function at `k`, which is
/// accumulated from the pmf: forward from `m = 0` while it is small, and as
/// one minus the backward tail sum once it approaches one.
pub fn p_ginue(s: f64, k_max: usize) -> Result<f64> {
    if k_max == 0 {
        return Err(Error::InvalidArgument("k_max must be at least 1".into()));
    }
    if !(s >= 0.0) {
        return Err(Error::InvalidArgument(format!("spacing must be non-negative, got {s}")));
    }
    if s == 0.0 {
        return Ok(0.0);
    }
    if s > 2.0 * GINUE_S_MAX {
        return Ok(0.0);
    }
    let x = s * s;
    let lnx = x.ln();
    let top = k_max.max((x + 20.0 * x.sqrt() + 60.0).ceil() as usize) + 1;

    let mut ln_pmf = Vec::with_capacity(top + 1);
    let mut ln_fact = 0.0;
    for m in 0..=top {
        if m > 0 {
            ln_fact += (m as f64).ln();
        }
        ln_pmf.push(m as f64 * lnx - x - ln_fact);
    }
    let pmf: Vec<f64> = ln_pmf.iter().map(|l| l.exp()).collect();

    let mut tail = vec![0.0; top + 1];
    let mut acc = 0.0;
    for m in (0..top).rev() {
        acc += pmf[m + 1];
        tail[m] = acc;
    }

    let deficit = tail[k_max];
    if deficit > GINUE_TAIL_TOL {
        return Err(Error::TruncationTooSmall { k_max, s, deficit });
    }

    let mut lower = 0.0;
    let mut ln_product = 0.0;
    let mut sum = 0.0;
    for k in 0..=k_max {
        lower += pmf[k];
        if k == 0 {
            continue;
        }
        let ln_q = if lower < 0.5 { lower.ln() } else { (-tail[k]).ln_1p() };
        ln_product += ln_q;
        sum += (ln_pmf[k] - ln_q).exp();
    }
    Ok(2.0 * s * sum * ln_product.exp())
}

/// Adaptive Simpson quadrature on `[a, b]`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn step<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
                + step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
        }
    }
    let (fa, fb) = (f(a), f(b));
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    step(f, a, b, fa, fm, fb, whole, tol, 40)
}

/// GinUE distribution function by adaptive quadrature of [`p_ginue`].
pub fn cdf_ginue(s: f64, k_max: usize) -> Result<f64> {
    if !(s >= 0.0) {
        return Err(Error::InvalidArgument(format!("spacing must be non-negative, got {s}")));
    }
    // surface truncation errors before integrating
    p_ginue(s.min(2.0 * GINUE_S_MAX), k_max)?;
    let f = |t: f64| p_ginue(t, k_max).unwrap_or(0.0);
    let upper = s.min(GINUE_S_MAX);
    // split at unit intervals so the adaptive rule sees the bulk
    let mut total = 0.0;
    let mut a = 0.0;
    while a < upper {
        let b = (a + 1.0).min(upper);
        total += adaptive_simpson(&f, a, b, 1e-14);
        a = b;
    }
    Ok(total.min(1.0))
}

/// Cached GinUE table: CDF on a uniform grid plus the first moment.
struct GinueTable {
    cdf: Vec<f64>,
    mean: f64,
}

fn ginue_table() -> &'static GinueTable {
    static TABLE: OnceLock<GinueTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        let n = (GINUE_S_MAX / GINUE_TABLE_STEP).round() as usize;
        let f = |t: f64| p_ginue(t, GINUE_K_MAX).expect("k_max covers the tabulated range");
        let g = |t: f64| t * f(t);
        let mut cdf = Vec::with_capacity(n + 1);
        cdf.push(0.0);
        let mut acc = 0.0;
        let mut mean = 0.0;
        for i in 0..n {
            let a = i as f64 * GINUE_TABLE_STEP;
            let b = a + GINUE_TABLE_STEP;
            acc += adaptive_simpson(&f, a, b, 1e-17);
            mean += adaptive_simpson(&g, a, b, 1e-17);
            cdf.push(acc);
        }
        GinueTable { cdf, mean }
    })
}

/// Tabulated GinUE distribution function (linear interpolation).
pub fn cdf_ginue_table(s: f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    let t = ginue_table();
    let x = s / GINUE_TABLE_STEP;
    let i = x.floor() as usize;
    if i + 1 >= t.cdf.len() {
        return *t.cdf.last().expect("non-empty table");
    }
    let w = x - i as f64;
    t.cdf[i] * (1.0 - w) + t.cdf[i + 1] * w
}

/// First moment `s̄ = ∫ s P_GinUE(s) ds`.
pub fn ginue_mean() -> f64 {
    ginue_table().mean
}

/// Unit-mean GinUE density `s̄ P(s̄ s)`.
pub fn p_ginue_scaled(s: f64) -> f64 {
    let m = ginue_mean();
    m * p_ginue(m * s, GINUE_K_MAX).unwrap_or(0.0)
}

pub fn cdf_ginue_scaled(s: f64) -> f64 {
    cdf_ginue_table(ginue_mean() * s)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ReferenceKind {
    Poisson2D,
    Ginue,
    GinueScaled,
}

/// Density, distribution function and first moment of a reference law.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct ReferenceDistribution {
    pub kind: ReferenceKind,
}

impl ReferenceDistribution {
    pub const POISSON_2D: Self = ReferenceDistribution { kind: ReferenceKind::Poisson2D };
    pub const GINUE: Self = ReferenceDistribution { kind: ReferenceKind::Ginue };
    pub const GINUE_SCALED: Self = ReferenceDistribution { kind: ReferenceKind::GinueScaled };

    pub fn density(&self, s: f64) -> f64 {
        match self.kind {
            ReferenceKind::Poisson2D => p_2dp(s),
            ReferenceKind::Ginue => p_ginue(s, GINUE_K_MAX).unwrap_or(0.0),
            ReferenceKind::GinueScaled => p_ginue_scaled(s),
        }
    }

    pub fn cdf(&self, s: f64) -> f64 {
        match self.kind {
            ReferenceKind::Poisson2D => cdf_2dp(s),
            ReferenceKind::Ginue => cdf_ginue_table(s),
            ReferenceKind::GinueScaled => cdf_ginue_scaled(s),
        }
    }

    pub fn mean(&self) -> f64 {
        match self.kind {
            ReferenceKind::Poisson2D | ReferenceKind::GinueScaled => 1.0,
            ReferenceKind::Ginue => ginue_mean(),
        }
    }

    /// Inverse distribution function. For the GinUE laws this inverts the
    /// tabulated CDF exactly, so `cdf(quantile(u)) = u` up to rounding.
    pub fn quantile(&self, u: f64) -> f64 {
        assert!((0.0..1.0).contains(&u), "quantile argument must lie in [0, 1)");
        match self.kind {
            ReferenceKind::Poisson2D => quantile_2dp(u),
            ReferenceKind::Ginue => ginue_table_quantile(u),
            ReferenceKind::GinueScaled => ginue_table_quantile(u) / ginue_mean(),
        }
    }
}

fn ginue_table_quantile(u: f64) -> f64 {
    let cdf = &ginue_table().cdf;
    // first grid point with cdf >= u
    let i = cdf.partition_point(|&c| c < u);
    if i == 0 {
        return 0.0;
    }
    if i >= cdf.len() {
        return GINUE_S_MAX;
    }
    let (c0, c1) = (cdf[i - 1], cdf[i]);
    let w = if c1 > c0 { (u - c0) / (c1 - c0) } else { 0.0 };
    (i as f64 - 1.0 + w) * GINUE_TABLE_STEP
}
