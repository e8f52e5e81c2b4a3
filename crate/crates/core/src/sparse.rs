//! Coordinate-sorted sparse complex matrices.
//!
//! Rows and columns are 0-based in memory. The text dump uses 1-based
//! coordinates so it lines up with the basis labels.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{BufRead, Write};

use faer::Mat;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Square sparse matrix with unique, row-major sorted coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseComplexMatrix {
    dim: usize,
    entries: Vec<(usize, usize, Complex64)>,
}

impl SparseComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        SparseComplexMatrix { dim, entries: Vec::new() }
    }

    pub fn identity(dim: usize) -> Self {
        let entries = (0..dim).map(|i| (i, i, Complex64::new(1.0, 0.0))).collect();
        SparseComplexMatrix { dim, entries }
    }

    /// Sums duplicate coordinates and drops entries with `|v| <= drop_tol`.
    /// With `drop_tol = 0` only exact zeros are removed.
    pub fn from_triplets(
        dim: usize,
        triplets: impl IntoIterator<Item = (usize, usize, Complex64)>,
        drop_tol: f64,
    ) -> Self {
        let mut acc: BTreeMap<(usize, usize), Complex64> = BTreeMap::new();
        for (r, c, v) in triplets {
            assert!(r < dim && c < dim, "entry ({r}, {c}) outside a {dim}x{dim} matrix");
            *acc.entry((r, c)).or_default() += v;
        }
        let entries = acc
            .into_iter()
            .filter(|(_, v)| v.norm() > drop_tol)
            .map(|((r, c), v)| (r, c, v))
            .collect();
        SparseComplexMatrix { dim, entries }
    }

    pub fn from_real_triplets(
        dim: usize,
        triplets: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Self {
        Self::from_triplets(
            dim,
            triplets.into_iter().map(|(r, c, v)| (r, c, Complex64::new(v, 0.0))),
            0.0,
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[(usize, usize, Complex64)] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        match self.entries.binary_search_by(|&(r, c, _)| (r, c).cmp(&(row, col))) {
            Ok(i) => self.entries[i].2,
            Err(_) => Complex64::new(0.0, 0.0),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|e| e.2.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::from_triplets(self.dim, self.entries.iter().map(|&(r, c, v)| (r, c, v * s)), 0.0)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        Self::from_triplets(
            self.dim,
            self.entries.iter().chain(other.entries.iter()).copied(),
            0.0,
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn transpose(&self) -> Self {
        Self::from_triplets(self.dim, self.entries.iter().map(|&(r, c, v)| (c, r, v)), 0.0)
    }

    pub fn conj(&self) -> Self {
        Self::from_triplets(self.dim, self.entries.iter().map(|&(r, c, v)| (r, c, v.conj())), 0.0)
    }

    pub fn adjoint(&self) -> Self {
        self.transpose().conj()
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut rows: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); other.dim];
        for &(r, c, v) in &other.entries {
            rows[r].push((c, v));
        }
        let triplets = self.entries.iter().flat_map(|&(r, k, a)| {
            rows[k].iter().map(move |&(c, b)| (r, c, a * b))
        });
        Self::from_triplets(self.dim, triplets, 0.0)
    }

    /// Kronecker product `self ⊗ other`, with row index `i * dim_b + k`.
    pub fn kron(&self, other: &Self) -> Self {
        let db = other.dim;
        let mut entries = Vec::with_capacity(self.nnz() * other.nnz());
        for &(r1, c1, v1) in &self.entries {
            for &(r2, c2, v2) in &other.entries {
                entries.push((r1 * db + r2, c1 * db + c2, v1 * v2));
            }
        }
        Self::from_triplets(self.dim * db, entries, 0.0)
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.dim);
        let mut y = vec![Complex64::new(0.0, 0.0); self.dim];
        for &(r, c, v) in &self.entries {
            y[r] += v * x[c];
        }
        y
    }

    /// Row vector times matrix, `xᵀ A`.
    pub fn vecmat(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.dim);
        let mut y = vec![Complex64::new(0.0, 0.0); self.dim];
        for &(r, c, v) in &self.entries {
            y[c] += x[r] * v;
        }
        y
    }

    pub fn is_real(&self) -> bool {
        self.entries.iter().all(|e| e.2.im == 0.0)
    }

    pub fn to_dense(&self) -> Mat<Complex64> {
        let mut m = Mat::<Complex64>::zeros(self.dim, self.dim);
        for &(r, c, v) in &self.entries {
            m[(r, c)] = v;
        }
        m
    }

    /// Maximum entrywise distance to another matrix of the same size.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.sub(other).max_abs()
    }

    /// Plain-text dump: header `dim nnz`, then `row col re im` per entry,
    /// 1-based, shortest round-trip float formatting.
    pub fn write_coordinate<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{} {}", self.dim, self.nnz())?;
        let mut line = String::new();
        for &(r, c, v) in &self.entries {
            line.clear();
            let _ = writeln!(line, "{} {} {:e} {:e}", r + 1, c + 1, v.re, v.im);
            out.write_all(line.as_bytes())?;
        }
        Ok(())
    }

    pub fn read_coordinate<R: BufRead>(input: R) -> Result<Self> {
        let mut lines = input.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty matrix dump".into()))?
            .map_err(|e| Error::Parse(e.to_string()))?;
        let mut h = header.split_whitespace();
        let dim: usize = parse_field(h.next(), "dim")?;
        let nnz: usize = parse_field(h.next(), "nnz")?;
        let mut triplets = Vec::with_capacity(nnz);
        for line in lines {
            let line = line.map_err(|e| Error::Parse(e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            let r: usize = parse_field(it.next(), "row")?;
            let c: usize = parse_field(it.next(), "col")?;
            let re: f64 = parse_field(it.next(), "re")?;
            let im: f64 = parse_field(it.next(), "im")?;
            if r == 0 || c == 0 || r > dim || c > dim {
                return Err(Error::Parse(format!("coordinate ({r}, {c}) outside 1..={dim}")));
            }
            triplets.push((r - 1, c - 1, Complex64::new(re, im)));
        }
        if triplets.len() != nnz {
            return Err(Error::Parse(format!("header says {nnz} entries, found {}", triplets.len())));
        }
        Ok(Self::from_triplets(dim, triplets, 0.0))
    }
}

fn parse_field<T: std::str::FromStr>(tok: Option<&str>, name: &str) -> Result<T> {
    tok.ok_or_else(|| Error::Parse(format!("missing field `{name}`")))?
        .parse()
        .map_err(|_| Error::Parse(format!("bad value for `{name}`")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn duplicates_are_summed_and_zeros_dropped() {
        let m = SparseComplexMatrix::from_triplets(
            2,
            vec![(1, 0, c(1.0, 0.0)), (0, 1, c(2.0, 1.0)), (1, 0, c(-1.0, 0.0))],
            0.0,
        );
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.get(0, 1), c(2.0, 1.0));
        assert_eq!(m.get(1, 0), c(0.0, 0.0));
    }

    #[test]
    fn kron_matches_dense_definition() {
        let a = SparseComplexMatrix::from_triplets(
            2,
            vec![(0, 0, c(1.0, 0.0)), (0, 1, c(0.0, 2.0)), (1, 1, c(3.0, 0.0))],
            0.0,
        );
        let b = SparseComplexMatrix::from_triplets(
            3,
            vec![(0, 2, c(1.0, 1.0)), (2, 1, c(-1.0, 0.0)), (1, 1, c(0.5, 0.0))],
            0.0,
        );
        let k = a.kron(&b);
        for i in 0..2 {
            for j in 0..2 {
                for p in 0..3 {
                    for q in 0..3 {
                        assert_eq!(k.get(i * 3 + p, j * 3 + q), a.get(i, j) * b.get(p, q));
                    }
                }
            }
        }
    }

    #[test]
    fn coordinate_dump_round_trips() {
        let m = SparseComplexMatrix::from_triplets(
            3,
            vec![(2, 0, c(0.1, -1e-17)), (0, 0, c(std::f64::consts::PI, 0.0))],
            0.0,
        );
        let mut buf = Vec::new();
        m.write_coordinate(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("3 2\n1 1 "));
        let back = SparseComplexMatrix::read_coordinate(&buf[..]).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn malformed_dump_is_rejected() {
        assert!(SparseComplexMatrix::read_coordinate(&b""[..]).is_err());
        assert!(SparseComplexMatrix::read_coordinate(&b"2 1\n3 1 0 0\n"[..]).is_err());
        assert!(SparseComplexMatrix::read_coordinate(&b"2 2\n1 1 0 1\n"[..]).is_err());
    }
}
