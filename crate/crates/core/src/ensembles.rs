//! Synthetic reference spectra: planar Poisson processes, Ginibre matrices
//! and direct draws from the reference spacing laws.

use faer::Mat;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::Result;
use crate::spectra::dense_eigenvalues;
use crate::stats::ReferenceDistribution;

/// `n` points uniform in the disk of radius `radius` about the origin.
pub fn poisson_disk<R: Rng + ?Sized>(n: usize, radius: f64, rng: &mut R) -> Vec<Complex64> {
    (0..n)
        .map(|_| {
            let r = radius * rng.random::<f64>().sqrt();
            let t = std::f64::consts::TAU * rng.random::<f64>();
            Complex64::from_polar(r, t)
        })
        .collect()
}

/// `n` points uniform in `[0, side)²`.
pub fn poisson_square<R: Rng + ?Sized>(n: usize, side: f64, rng: &mut R) -> Vec<Complex64> {
    (0..n)
        .map(|_| Complex64::new(side * rng.random::<f64>(), side * rng.random::<f64>()))
        .collect()
}

/// Eigenvalues of an `n × n` complex Ginibre matrix with entry variance
/// `1/n`, so the spectrum fills the unit disk.
pub fn ginibre_eigenvalues<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Vec<Complex64>> {
    let scale = (0.5 / n as f64).sqrt();
    let mut draw = || -> f64 { StandardNormal.sample(&mut *rng) };
    let m = Mat::<Complex64>::from_fn(n, n, |_, _| Complex64::new(scale * draw(), scale * draw()));
    dense_eigenvalues(&m)
}

/// Independent draws from a reference spacing law by inversion.
pub fn sample_reference<R: Rng + ?Sized>(
    dist: ReferenceDistribution,
    n: usize,
    rng: &mut R,
) -> Vec<f64> {
    (0..n).map(|_| dist.quantile(rng.random::<f64>())).collect()
}

/// Gaps of `n` uniform points on `[0, n)`: a 1D sequence without repulsion.
pub fn poisson_line_spacings<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    let mut x: Vec<f64> = (0..n).map(|_| n as f64 * rng.random::<f64>()).collect();
    x.sort_by(f64::total_cmp);
    x.windows(2).map(|w| w[1] - w[0]).collect()
}
