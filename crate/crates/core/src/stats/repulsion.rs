//! Small-spacing repulsion exponent `P(s) ∝ s^β`.

use crate::error::{Error, Result};

pub const MIN_REPULSION_SAMPLES: usize = 10_000;
const BINS: usize = 12;

/// Least-squares slope of `ln P` against `ln s` over the smallest decile of
/// spacings, using logarithmically spaced bins. A quadratic nuisance term
/// `c s²` absorbs the leading curvature of `ln P` so that the slope is the
/// limiting exponent rather than an average over the decile.
pub fn fit_repulsion_exponent(samples: &[f64]) -> Result<f64> {
    if samples.len() < MIN_REPULSION_SAMPLES {
        return Err(Error::InsufficientSamples { needed: MIN_REPULSION_SAMPLES, got: samples.len() });
    }
    let mut s: Vec<f64> = samples.iter().copied().filter(|x| *x > 0.0 && x.is_finite()).collect();
    s.sort_by(f64::total_cmp);
    let n = s.len();
    let decile = &s[..n / 10];
    let lo = decile[decile.len() / 100];
    let hi = decile[decile.len() - 1];
    if !(hi > lo) {
        return Err(Error::InsufficientSamples { needed: MIN_REPULSION_SAMPLES, got: decile.len() });
    }
    let (llo, lhi) = (lo.ln(), hi.ln());
    let width = (lhi - llo) / BINS as f64;
    let mut counts = [0usize; BINS];
    for &x in decile {
        if x < lo || x > hi {
            continue;
        }
        let b = (((x.ln() - llo) / width) as usize).min(BINS - 1);
        counts[b] += 1;
    }
    let mut rows = Vec::new();
    for (b, &c) in counts.iter().enumerate() {
        if c < 10 {
            continue;
        }
        let a = (llo + b as f64 * width).exp();
        let e = (llo + (b + 1) as f64 * width).exp();
        let density = c as f64 / (n as f64 * (e - a));
        let centre = (a * e).sqrt();
        rows.push([1.0, centre.ln(), centre * centre, density.ln()]);
    }
    if rows.len() < 4 {
        return Err(Error::InsufficientSamples { needed: 4, got: rows.len() });
    }
    let coef = least_squares3(&rows)?;
    Ok(coef[1])
}

/// Normal-equation solve for three regressors; each row is `[x0, x1, x2, y]`.
fn least_squares3(rows: &[[f64; 4]]) -> Result<[f64; 3]> {
    let mut a = [[0.0; 4]; 3];
    for r in rows {
        for i in 0..3 {
            for j in 0..3 {
                a[i][j] += r[i] * r[j];
            }
            a[i][3] += r[i] * r[3];
        }
    }
    for col in 0..3 {
        let piv = (col..3)
            .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
            .expect("non-empty range");
        a.swap(col, piv);
        if a[col][col].abs() < 1e-300 {
            return Err(Error::InvalidArgument("degenerate repulsion fit".into()));
        }
        for row in 0..3 {
            if row != col {
                let f = a[row][col] / a[col][col];
                for k in col..4 {
                    a[row][k] -= f * a[col][k];
                }
            }
        }
    }
    Ok([a[0][3] / a[0][0], a[1][3] / a[1][1], a[2][3] / a[2][2]])
}
