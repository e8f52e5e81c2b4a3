//! Dense diagonalization of Liouvillian parity sectors and the
//! two-truncation convergence filter.

use std::fmt::Write as _;
use std::io::{BufRead, Write};

use faer::Mat;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::basis::{ModelParams, Parity, Spin};
use crate::error::{Error, Result};
use crate::liouvillian::{build_liouvillian, hermitian_real_form, project_sector};
use crate::sparse::SparseComplexMatrix;

/// Knobs of [`converged_eigenvalues`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ConvergenceConfig {
    pub sector: Parity,
    /// Extra photons in the comparison run. Zero compares a run with itself.
    pub delta_nmax: usize,
    /// Absolute pairing tolerance.
    pub tol_match: f64,
    /// Largest sector dimension handed to the dense solver.
    pub dim_cap: usize,
}

impl Default for ConvergenceConfig {
    fn default() -> Self {
        ConvergenceConfig {
            sector: Parity::Positive,
            delta_nmax: 10,
            tol_match: 1e-6,
            dim_cap: 12_000,
        }
    }
}

/// Below this many converged eigenvalues the bulk statistics are unreliable.
pub const MIN_RELIABLE_CONVERGED: usize = 100;

/// Eigenvalues of one parity sector, with the convergence mask.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexSpectrum {
    pub eigenvalues: Vec<Complex64>,
    pub converged_mask: Vec<bool>,
    pub sector: Parity,
    pub params: ModelParams,
    pub delta_nmax: usize,
    pub tol_match: f64,
}

impl ComplexSpectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn converged_count(&self) -> usize {
        self.converged_mask.iter().filter(|&&c| c).count()
    }

    /// Converged eigenvalues in stored order.
    pub fn converged(&self) -> Vec<Complex64> {
        self.eigenvalues
            .iter()
            .zip(&self.converged_mask)
            .filter(|(_, &c)| c)
            .map(|(&z, _)| z)
            .collect()
    }

    pub fn is_reliable(&self) -> bool {
        self.converged_count() >= MIN_RELIABLE_CONVERGED
    }

    pub fn max_modulus(&self) -> f64 {
        self.eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Header lines (without the `# ` prefix) describing how the spectrum
    /// was produced.
    pub fn header_lines(&self) -> Vec<String> {
        let p = &self.params;
        vec![
            format!(
                "omega={:e} omega0={:e} gamma_minus={:e} gamma_plus={:e} kappa={:e} j={:e} n_max={}",
                p.omega,
                p.omega0,
                p.gamma_minus,
                p.gamma_plus,
                p.kappa,
                p.j.value(),
                p.n_max
            ),
            format!(
                "sector={} delta_nmax={} tol_match={:e} converged={} total={}",
                self.sector.sign(),
                self.delta_nmax,
                self.tol_match,
                self.converged_count(),
                self.len()
            ),
        ]
    }

    /// Plain-text dump: `#`-prefixed header, then `re im converged` per line.
    pub fn write_dump<W: Write>(&self, mut out: W, extra_header: &[String]) -> std::io::Result<()> {
        for line in extra_header {
            writeln!(out, "# {line}")?;
        }
        for line in self.header_lines() {
            writeln!(out, "# {line}")?;
        }
        writeln!(out, "# re im converged")?;
        let mut buf = String::new();
        for (z, &c) in self.eigenvalues.iter().zip(&self.converged_mask) {
            buf.clear();
            let _ = writeln!(buf, "{:e} {:e} {}", z.re, z.im, u8::from(c));
            out.write_all(buf.as_bytes())?;
        }
        Ok(())
    }

    pub fn read_dump<R: BufRead>(input: R) -> Result<Self> {
        let mut kv = std::collections::HashMap::new();
        let mut eigenvalues = Vec::new();
        let mut converged_mask = Vec::new();
        for line in input.lines() {
            let line = line.map_err(|e| Error::Parse(e.to_string()))?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(h) = line.strip_prefix('#') {
                for tok in h.split_whitespace() {
                    if let Some((k, v)) = tok.split_once('=') {
                        kv.insert(k.to_string(), v.to_string());
                    }
                }
                continue;
            }
            let mut it = line.split_whitespace();
            let re = parse_tok::<f64>(it.next(), "re")?;
            let im = parse_tok::<f64>(it.next(), "im")?;
            let c = parse_tok::<u8>(it.next(), "converged")?;
            eigenvalues.push(Complex64::new(re, im));
            converged_mask.push(c != 0);
        }
        let get = |k: &str| -> Result<&String> {
            kv.get(k).ok_or_else(|| Error::Parse(format!("header is missing `{k}`")))
        };
        let num = |k: &str| -> Result<f64> {
            get(k)?.parse().map_err(|_| Error::Parse(format!("bad header value for `{k}`")))
        };
        let params = ModelParams::new(
            num("omega")?,
            num("omega0")?,
            num("gamma_minus")?,
            num("gamma_plus")?,
            num("kappa")?,
            Spin::from_f64(num("j")?)?,
            num("n_max")? as usize,
        )?;
        Ok(ComplexSpectrum {
            eigenvalues,
            converged_mask,
            sector: Parity::from_sign(num("sector")? as i32)?,
            params,
            delta_nmax: num("delta_nmax")? as usize,
            tol_match: num("tol_match")?,
        })
    }
}

fn parse_tok<T: std::str::FromStr>(tok: Option<&str>, name: &str) -> Result<T> {
    tok.ok_or_else(|| Error::Parse(format!("missing column `{name}`")))?
        .parse()
        .map_err(|_| Error::Parse(format!("bad value in column `{name}`")))
}

fn check_cap(dim: usize, cap: usize) -> Result<()> {
    if dim > cap {
        Err(Error::DimensionOverCap { dim, cap })
    } else {
        Ok(())
    }
}

/// All eigenvalues of a general complex matrix (unordered).
pub fn eigenvalues(matrix: &SparseComplexMatrix, dim_cap: usize) -> Result<Vec<Complex64>> {
    check_cap(matrix.dim(), dim_cap)?;
    dense_eigenvalues(&matrix.to_dense())
}

pub fn dense_eigenvalues(matrix: &Mat<Complex64>) -> Result<Vec<Complex64>> {
    if matrix.nrows() == 0 {
        return Ok(Vec::new());
    }
    matrix.eigenvalues().map_err(|e| Error::EigenSolver(format!("{e:?}")))
}

/// All eigenvalues of a real matrix; complex ones come in exact conjugate pairs.
pub fn real_dense_eigenvalues(matrix: &Mat<f64>) -> Result<Vec<Complex64>> {
    if matrix.nrows() == 0 {
        return Ok(Vec::new());
    }
    matrix.eigenvalues().map_err(|e| Error::EigenSolver(format!("{e:?}")))
}

/// Spectrum of one Liouvillian parity sector at `params.n_max`.
///
/// The sector is rewritten in its real Hermitian basis before the dense
/// solve.
pub fn sector_eigenvalues(params: &ModelParams, sector: Parity, dim_cap: usize) -> Result<Vec<Complex64>> {
    let basis = params.basis();
    check_cap(basis.sector_dim(sector), dim_cap)?;
    let l = build_liouvillian(params)?;
    let (block, map) = project_sector(&l, &basis, sector)?;
    drop(l);
    let real = hermitian_real_form(&block, &map, &basis)?;
    let scale = block.max_abs().max(1.0);
    if real.imag_residual > 1e-10 * scale {
        return Err(Error::EigenSolver(format!(
            "real form has imaginary residue {:e}",
            real.imag_residual
        )));
    }
    drop(block);
    let dense = real.to_dense();
    drop(real);
    real_dense_eigenvalues(&dense)
}

/// Greedy nearest-pair matching. Sources are visited by ascending modulus
/// (ties by real then imaginary part); each takes its nearest unused target
/// (ties by lower target position after the same ordering). A source is
/// converged when its pair lies closer than `tol`.
pub fn match_converged(source: &[Complex64], target: &[Complex64], tol: f64) -> Vec<bool> {
    let mut order: Vec<usize> = (0..source.len()).collect();
    order.sort_by(|&a, &b| modulus_order(&source[a], &source[b]));
    let mut targets: Vec<Complex64> = target.to_vec();
    targets.sort_by(modulus_order);
    let mut used = vec![false; targets.len()];
    let mut mask = vec![false; source.len()];
    for i in order {
        let z = source[i];
        let mut best: Option<(usize, f64)> = None;
        for (k, t) in targets.iter().enumerate() {
            if used[k] {
                continue;
            }
            let d = (t - z).norm();
            if best.is_none_or(|(_, bd)| d < bd) {
                best = Some((k, d));
            }
        }
        if let Some((k, d)) = best {
            used[k] = true;
            mask[i] = d < tol;
        }
    }
    mask
}

/// Diagonalizes the chosen sector at `n_max` and `n_max + delta_nmax` and
/// keeps the eigenvalues of the smaller run that survive the matching.
/// The result is ordered by modulus.
pub fn converged_eigenvalues(params: &ModelParams, config: &ConvergenceConfig) -> Result<ComplexSpectrum> {
    params.validate()?;
    let small = sector_eigenvalues(params, config.sector, config.dim_cap)?;
    let mask = if config.delta_nmax == 0 {
        vec![true; small.len()]
    } else {
        let larger = params.with_n_max(params.n_max + config.delta_nmax);
        let large = sector_eigenvalues(&larger, config.sector, config.dim_cap)?;
        match_converged(&small, &large, config.tol_match)
    };
    let spectrum = sort_by_modulus(ComplexSpectrum {
        eigenvalues: small,
        converged_mask: mask,
        sector: config.sector,
        params: params.clone(),
        delta_nmax: config.delta_nmax,
        tol_match: config.tol_match,
    });
    if !spectrum.is_reliable() {
        log::warn!(
            "only {} converged eigenvalues (< {MIN_RELIABLE_CONVERGED}); statistics will be unreliable",
            spectrum.converged_count()
        );
    }
    Ok(spectrum)
}

/// Ascending `|λ|`, ties by `(Re λ, Im λ)`.
pub fn modulus_order(a: &Complex64, b: &Complex64) -> std::cmp::Ordering {
    a.norm()
        .total_cmp(&b.norm())
        .then(a.re.total_cmp(&b.re))
        .then(a.im.total_cmp(&b.im))
}

/// Stable sort by modulus, carrying the convergence mask along.
pub fn sort_by_modulus(mut spectrum: ComplexSpectrum) -> ComplexSpectrum {
    let mut pairs: Vec<(Complex64, bool)> = spectrum
        .eigenvalues
        .iter()
        .copied()
        .zip(spectrum.converged_mask.iter().copied())
        .collect();
    pairs.sort_by(|a, b| modulus_order(&a.0, &b.0));
    spectrum.eigenvalues = pairs.iter().map(|p| p.0).collect();
    spectrum.converged_mask = pairs.iter().map(|p| p.1).collect();
    spectrum
}

/// Plain eigenvalue list sorted by modulus.
pub fn sorted_by_modulus(values: &[Complex64]) -> Vec<Complex64> {
    let mut v = values.to_vec();
    v.sort_by(modulus_order);
    v
}
