//! Nearest-neighbour queries for points in the complex plane.

use std::num::NonZeroUsize;

use kiddo::{ImmutableKdTree, SquaredEuclidean};
use num_complex::Complex64;

/// Eigenvalues closer than this are treated as the same point.
pub const DUPLICATE_TOL: f64 = 1e-14;

pub struct PlaneIndex {
    tree: ImmutableKdTree<f64, 2>,
    points: Vec<[f64; 2]>,
}

impl PlaneIndex {
    pub fn new(points: &[Complex64]) -> Self {
        let points: Vec<[f64; 2]> = points.iter().map(|z| [z.re, z.im]).collect();
        let tree = ImmutableKdTree::new_from_slice(&points).expect("kd-tree construction");
        PlaneIndex { tree, points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Up to `k` nearest neighbours of point `i` that are farther than
    /// `dup_tol`, as `(index, distance)` sorted by distance then index.
    /// The second value counts the coincident points skipped on the way.
    pub fn distinct_neighbors(&self, i: usize, k: usize, dup_tol: f64) -> (Vec<(usize, f64)>, usize) {
        let n = self.points.len();
        let mut want = (k + 2).min(n);
        loop {
            let found = self
                .tree
                .query(&self.points[i])
                .nearest_n::<SquaredEuclidean<f64>>(NonZeroUsize::new(want).expect("want > 0"))
                .execute();
            let mut all: Vec<(usize, f64)> = found
                .iter()
                .map(|r| (r.item as usize, r.distance.sqrt()))
                .filter(|&(j, _)| j != i)
                .collect();
            all.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
            let dups = all.iter().take_while(|&&(_, d)| d <= dup_tol).count();
            let distinct: Vec<(usize, f64)> = all[dups..].iter().copied().collect();
            if distinct.len() >= k || want >= n {
                let mut distinct = distinct;
                distinct.truncate(k);
                return (distinct, dups);
            }
            want = (want * 2).min(n);
        }
    }
}
