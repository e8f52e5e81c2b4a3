//! Nearest-neighbour spacings of planar point sets and their local unfolding.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::neighbors::{PlaneIndex, DUPLICATE_TOL};

pub const DEFAULT_UNFOLD_NEIGHBORS: usize = 30;

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct SpacingSample {
    /// Position of the reference point in the input slice.
    pub index: usize,
    pub raw: f64,
    /// Unfolded and mean-normalised spacing; equals `raw` when no unfolding
    /// was requested.
    pub unfolded: f64,
    /// The k-th neighbour disk reaches outside the convex hull.
    pub near_edge: bool,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SpacingSet {
    pub samples: Vec<SpacingSample>,
    /// Reference points dropped because another point coincides with them.
    pub duplicates: usize,
    pub edge_flagged: usize,
}

impl SpacingSet {
    pub fn raw(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.raw).collect()
    }

    pub fn unfolded(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.unfolded).collect()
    }
}

/// Euclidean distance from each point to its nearest distinct neighbour.
pub fn nn_spacings(points: &[Complex64]) -> Result<SpacingSet> {
    if points.len() < 3 {
        return Err(Error::InsufficientSamples { needed: 3, got: points.len() });
    }
    let index = PlaneIndex::new(points);
    let mut set = SpacingSet::default();
    for i in 0..points.len() {
        let (nn, dups) = index.distinct_neighbors(i, 1, DUPLICATE_TOL);
        if dups > 0 {
            set.duplicates += 1;
            continue;
        }
        if let Some(&(_, d)) = nn.first() {
            set.samples.push(SpacingSample { index: i, raw: d, unfolded: d, near_edge: false });
        }
    }
    Ok(set)
}

/// Local unfolding with a k-nearest-neighbour density estimate
/// `ρ = k / (π d_k²)`: each spacing is multiplied by `√ρ` and the result is
/// rescaled to unit mean.
pub fn unfold(points: &[Complex64], k_neighbors: usize) -> Result<SpacingSet> {
    if k_neighbors < 4 {
        return Err(Error::InvalidArgument(format!(
            "unfolding needs at least 4 neighbours, got {k_neighbors}"
        )));
    }
    let needed = 10 * k_neighbors;
    if points.len() < needed {
        return Err(Error::InsufficientSamples { needed, got: points.len() });
    }
    let index = PlaneIndex::new(points);
    let hull = convex_hull(points);
    let mut set = SpacingSet::default();
    for i in 0..points.len() {
        let (nbrs, dups) = index.distinct_neighbors(i, k_neighbors, DUPLICATE_TOL);
        if dups > 0 {
            set.duplicates += 1;
            continue;
        }
        let raw = nbrs[0].1;
        let dk = nbrs[nbrs.len() - 1].1;
        let scaled = raw * (k_neighbors as f64 / PI).sqrt() / dk;
        let near_edge = distance_to_hull_boundary(&hull, points[i]) < dk;
        if near_edge {
            set.edge_flagged += 1;
        }
        set.samples.push(SpacingSample { index: i, raw, unfolded: scaled, near_edge });
    }
    normalize_mean(&mut set.samples);
    Ok(set)
}

/// Rescales `unfolded` to unit mean.
pub fn normalize_mean(samples: &mut [SpacingSample]) {
    if samples.is_empty() {
        return;
    }
    let mean = samples.iter().map(|s| s.unfolded).sum::<f64>() / samples.len() as f64;
    if mean > 0.0 {
        for s in samples {
            s.unfolded /= mean;
        }
    }
}

fn cross(o: Complex64, a: Complex64, b: Complex64) -> f64 {
    (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
}

/// Counter-clockwise convex hull (monotone chain).
pub fn convex_hull(points: &[Complex64]) -> Vec<Complex64> {
    let mut pts: Vec<Complex64> = points.to_vec();
    pts.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Complex64> = Vec::with_capacity(2 * pts.len());
    for &p in &pts {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

fn distance_to_hull_boundary(hull: &[Complex64], z: Complex64) -> f64 {
    if hull.len() < 2 {
        return 0.0;
    }
    let mut best = f64::INFINITY;
    for i in 0..hull.len() {
        let a = hull[i];
        let b = hull[(i + 1) % hull.len()];
        let ab = b - a;
        let len2 = ab.norm_sqr();
        let t = if len2 > 0.0 { (((z - a) * ab.conj()).re / len2).clamp(0.0, 1.0) } else { 0.0 };
        best = best.min((z - (a + ab * t)).norm());
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lattice(n: usize) -> Vec<Complex64> {
        let mut v = Vec::new();
        for i in 0..n {
            for j in 0..n {
                v.push(Complex64::new(i as f64, j as f64));
            }
        }
        v
    }

    #[test]
    fn square_lattice_spacings() {
        let s = nn_spacings(&lattice(5)).unwrap();
        assert_eq!(s.samples.len(), 25);
        assert!(s.samples.iter().all(|x| (x.raw - 1.0).abs() < 1e-15));
    }

    #[test]
    fn triangle_example() {
        let pts = [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(0.0, 2.0)];
        let s = nn_spacings(&pts).unwrap();
        assert_eq!(s.raw(), vec![1.0, 1.0, 2.0]);
    }

    #[test]
    fn too_few_points() {
        assert!(matches!(
            nn_spacings(&[Complex64::new(0.0, 0.0); 2]),
            Err(Error::InsufficientSamples { .. })
        ));
        assert!(unfold(&lattice(10), 30).is_err());
    }

    #[test]
    fn coincident_points_excluded() {
        let mut pts = lattice(4);
        pts.push(Complex64::new(0.0, 0.0));
        let s = nn_spacings(&pts).unwrap();
        assert_eq!(s.duplicates, 2);
        assert_eq!(s.samples.len(), 15);
    }

    #[test]
    fn hull_of_lattice() {
        let h = convex_hull(&lattice(4));
        assert_eq!(h.len(), 4);
        assert!((distance_to_hull_boundary(&h, Complex64::new(1.0, 1.5)) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn lattice_unfolds_to_unit_spacings() {
        let s = unfold(&lattice(30), 8).unwrap();
        assert!(s.samples.iter().filter(|x| !x.near_edge).all(|x| (x.unfolded - 1.0).abs() < 0.1));
        let mean: f64 = s.unfolded().iter().sum::<f64>() / s.samples.len() as f64;
        assert!((mean - 1.0).abs() < 1e-12);
        assert!(s.edge_flagged > 0 && s.edge_flagged < s.samples.len());
    }
}
