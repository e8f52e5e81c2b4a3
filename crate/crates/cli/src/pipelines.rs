//! The seven pipelines behind the CLI subcommands. Each returns its rows so
//! that callers and tests can inspect them, and writes its tables under the
//! configured output directory.

use std::path::PathBuf;

use anyhow::Context;
use dicke_core::classical::{integrate, AttractorKind, AttractorVerdict, SampleTimes, Trajectory};
use dicke_core::spectra::sorted_by_modulus;
use dicke_core::stats::{
    histogram, ratio_averages, Histogram, ReferenceDistribution, SpectrumAnalysis, WindowStatistic,
};
use dicke_core::ComplexSpectrum;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cells::{cell_attractor, cell_params, cell_spectrum};
use crate::config::{Pipeline, RunConfig, VerdictConfig};
use crate::output::Table;

/// Rows of a pipeline, the files written and the per-cell failures.
#[derive(Debug)]
pub struct Outcome<T> {
    pub rows: Vec<T>,
    pub files: Vec<PathBuf>,
    pub failures: Vec<String>,
}

fn pipeline_config(cfg: &RunConfig, pipeline: Pipeline) -> anyhow::Result<RunConfig> {
    let mut cfg = cfg.clone();
    cfg.pipeline = pipeline;
    cfg.validate()?;
    Ok(cfg)
}

/// Runs `f` over the grid in a pool of `execution.parallelism` workers,
/// keeping grid order.
fn over_grid<T, F>(cfg: &RunConfig, f: F) -> anyhow::Result<Vec<((f64, f64), anyhow::Result<T>)>>
where
    T: Send,
    F: Fn(f64, f64) -> anyhow::Result<T> + Sync,
{
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cfg.execution.parallelism).build()?;
    let points = cfg.grid.points();
    Ok(pool.install(|| points.par_iter().map(|&(gm, gp)| ((gm, gp), f(gm, gp))).collect()))
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "nan".to_string(), |x| x.to_string())
}

pub fn run_spectrum(cfg: &RunConfig) -> anyhow::Result<Outcome<ComplexSpectrum>> {
    let cfg = pipeline_config(cfg, Pipeline::Spectrum)?;
    let spec = cell_spectrum(&cfg, &cfg.model)?;
    let mut order: Vec<usize> = (0..spec.len()).collect();
    order.sort_by(|&a, &b| dicke_core::spectra::modulus_order(&spec.eigenvalues[a], &spec.eigenvalues[b]));
    let mut t = Table::new(&["re", "im", "modulus", "converged"]);
    for i in order {
        let z = spec.eigenvalues[i];
        t.push([z.re.to_string(), z.im.to_string(), z.norm().to_string(), u8::from(spec.converged_mask[i]).to_string()]);
    }
    let file = t.write(&cfg, "spectrum.csv", &[])?;
    Ok(Outcome { rows: vec![spec], files: vec![file], failures: Vec::new() })
}

/// Ratios and unfolded spacings of the converged, modulus-sorted eigenvalues.
pub fn analyse(spec: &ComplexSpectrum, cfg: &RunConfig) -> anyhow::Result<SpectrumAnalysis> {
    let sorted = sorted_by_modulus(&spec.converged());
    if !spec.is_reliable() {
        log::warn!("only {} converged eigenvalues; statistics are unreliable", sorted.len());
    }
    Ok(SpectrumAnalysis::new(&sorted, cfg.stats.k_neighbors)?)
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindowRow {
    pub lambda_center: f64,
    pub mean_r: f64,
    pub mean_neg_cos: f64,
    pub a2_poisson: f64,
    pub a2_ginue: f64,
}

pub fn window_rows(an: &SpectrumAnalysis, cfg: &RunConfig) -> anyhow::Result<Vec<WindowRow>> {
    an.windows(cfg.stats.window_size, cfg.stats.stride)?
        .into_par_iter()
        .map(|w| {
            let r = ratio_averages(&an.ratios(w.clone()))?;
            Ok(WindowRow {
                lambda_center: an.center(w.clone()),
                mean_r: r.mean_r,
                mean_neg_cos: r.mean_neg_cos,
                a2_poisson: an.statistic(w.clone(), WindowStatistic::AdPoisson)?,
                a2_ginue: an.statistic(w, WindowStatistic::AdGinue)?,
            })
        })
        .collect()
}

/// Histogram of unfolded spacings over the window nearest
/// `stats.histogram_center`, or over everything.
pub fn spacing_histogram(an: &SpectrumAnalysis, cfg: &RunConfig) -> anyhow::Result<Histogram> {
    let range = match cfg.stats.histogram_center {
        Some(c) => an
            .windows(cfg.stats.window_size, cfg.stats.stride)?
            .into_iter()
            .min_by(|a, b| (an.center(a.clone()) - c).abs().total_cmp(&(an.center(b.clone()) - c).abs()))
            .context("no window")?,
        None => 0..an.len(),
    };
    Ok(histogram(&an.unfolded(range), cfg.stats.bin_width, None)?)
}

/// Moving-window ratio averages and AD statistics against `|λ|`, plus the
/// unfolded spacing histogram.
pub fn run_lambda_window_scan(cfg: &RunConfig) -> anyhow::Result<Outcome<WindowRow>> {
    let cfg = pipeline_config(cfg, Pipeline::Stats)?;
    let spec = cell_spectrum(&cfg, &cfg.model)?;
    let an = analyse(&spec, &cfg)?;
    let rows = window_rows(&an, &cfg)?;
    let mut t = Table::new(&["lambda_center", "mean_r", "mean_neg_cos", "A2_poisson", "A2_ginue"]);
    for r in &rows {
        t.push([r.lambda_center, r.mean_r, r.mean_neg_cos, r.a2_poisson, r.a2_ginue]);
    }
    let f1 = t.write(&cfg, "window_scan.csv", &[])?;
    let h = spacing_histogram(&an, &cfg)?;
    let mut t = Table::new(&["s", "density"]);
    for (c, d) in h.centers().iter().zip(&h.density) {
        t.push([c, d]);
    }
    let f2 = t.write(&cfg, "histogram.csv", &[])?;
    Ok(Outcome { rows, files: vec![f1, f2], failures: Vec::new() })
}

pub fn ad_table(rows: &[WindowRow], threshold: f64) -> Table {
    let mut t = Table::new(&["lambda_center", "A2_poisson", "A2_ginue", "threshold"]);
    for r in rows {
        t.push([r.lambda_center, r.a2_poisson, r.a2_ginue, threshold]);
    }
    t
}

pub fn run_ad_scan(cfg: &RunConfig) -> anyhow::Result<Outcome<WindowRow>> {
    let cfg = pipeline_config(cfg, Pipeline::AdScan)?;
    let spec = cell_spectrum(&cfg, &cfg.model)?;
    let rows = window_rows(&analyse(&spec, &cfg)?, &cfg)?;
    let file = ad_table(&rows, cfg.verdict.ad_threshold).write(&cfg, "ad_scan.csv", &[])?;
    Ok(Outcome { rows, files: vec![file], failures: Vec::new() })
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuantumClass {
    Ginue,
    Poisson,
    Neither,
}

impl QuantumClass {
    pub fn as_str(self) -> &'static str {
        match self {
            QuantumClass::Ginue => "ginue",
            QuantumClass::Poisson => "poisson",
            QuantumClass::Neither => "neither",
        }
    }
}

/// Statistics of all converged eigenvalues of one grid cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuantumCell {
    pub gamma_minus: f64,
    pub gamma_plus: f64,
    pub n_converged: usize,
    pub mean_r: f64,
    pub mean_neg_cos: f64,
    pub a2_poisson: f64,
    pub a2_ginue: f64,
    pub ginue_consistent: bool,
    pub poisson_consistent: bool,
    pub class: QuantumClass,
}

/// Class from AD tests and ratio averages. A cell passing both references
/// goes to the one whose ratio averages are closer.
pub fn classify_quantum(
    mean_r: f64,
    mean_neg_cos: f64,
    a2_poisson: f64,
    a2_ginue: f64,
    v: &VerdictConfig,
) -> (bool, bool, QuantumClass) {
    let dist = |r: f64, c: f64| (mean_r - r).abs().max((mean_neg_cos - c).abs());
    let d_g = dist(v.ginue_mean_r, v.ginue_mean_neg_cos);
    let d_p = dist(v.poisson_mean_r, v.poisson_mean_neg_cos);
    let ginue = a2_ginue < v.ad_threshold || d_g < v.ratio_tolerance;
    let poisson = a2_poisson < v.ad_threshold || d_p < v.ratio_tolerance;
    let class = match (ginue, poisson) {
        (true, false) => QuantumClass::Ginue,
        (false, true) => QuantumClass::Poisson,
        (false, false) => QuantumClass::Neither,
        (true, true) if d_g <= d_p => QuantumClass::Ginue,
        (true, true) => QuantumClass::Poisson,
    };
    (ginue, poisson, class)
}

pub fn summarise_spectrum(spec: &ComplexSpectrum, cfg: &RunConfig) -> anyhow::Result<QuantumCell> {
    let an = analyse(spec, cfg)?;
    let all = 0..an.len();
    let r = ratio_averages(&an.ratios(all.clone()))?;
    let a2_poisson = an.anderson_darling(all.clone(), ReferenceDistribution::POISSON_2D)?.a2;
    let a2_ginue = an.anderson_darling(all, ReferenceDistribution::GINUE_SCALED)?.a2;
    let (ginue_consistent, poisson_consistent, class) =
        classify_quantum(r.mean_r, r.mean_neg_cos, a2_poisson, a2_ginue, &cfg.verdict);
    Ok(QuantumCell {
        gamma_minus: spec.params.gamma_minus,
        gamma_plus: spec.params.gamma_plus,
        n_converged: an.len(),
        mean_r: r.mean_r,
        mean_neg_cos: r.mean_neg_cos,
        a2_poisson,
        a2_ginue,
        ginue_consistent,
        poisson_consistent,
        class,
    })
}

pub fn quantum_cell(cfg: &RunConfig, gamma_minus: f64, gamma_plus: f64) -> anyhow::Result<QuantumCell> {
    let spec = cell_spectrum(cfg, &cell_params(cfg, gamma_minus, gamma_plus))?;
    summarise_spectrum(&spec, cfg)
}

fn failure(pipeline: Pipeline, gm: f64, gp: f64, e: &anyhow::Error) -> String {
    format!("{} cell (gamma_minus={gm}, gamma_plus={gp}): {e:#}", pipeline.name())
}

/// `⟨r⟩`, `−⟨cos θ⟩` and AD statistics over all converged eigenvalues for
/// every grid cell. Failed cells are reported and left out of the rows.
pub fn run_ratio_map(cfg: &RunConfig) -> anyhow::Result<Outcome<QuantumCell>> {
    let cfg = pipeline_config(cfg, Pipeline::RatioMap)?;
    let results = over_grid(&cfg, |gm, gp| quantum_cell(&cfg, gm, gp))?;
    let mut t = Table::new(&[
        "gamma_minus", "gamma_plus", "n_converged", "mean_r", "mean_neg_cos", "A2_poisson", "A2_ginue", "class",
    ]);
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for ((gm, gp), res) in results {
        match res {
            Ok(c) => {
                t.push([
                    gm.to_string(),
                    gp.to_string(),
                    c.n_converged.to_string(),
                    c.mean_r.to_string(),
                    c.mean_neg_cos.to_string(),
                    c.a2_poisson.to_string(),
                    c.a2_ginue.to_string(),
                    c.class.as_str().to_string(),
                ]);
                rows.push(c);
            }
            Err(e) => {
                t.push([gm.to_string(), gp.to_string(), "0".into(), fmt_opt(None), fmt_opt(None), fmt_opt(None), fmt_opt(None), "failed".into()]);
                failures.push(failure(Pipeline::RatioMap, gm, gp, &e));
            }
        }
    }
    let file = t.write(&cfg, "ratio_map.csv", &failures)?;
    Ok(Outcome { rows, files: vec![file], failures })
}

/// Trajectory from the configured initial state at the model couplings.
pub fn run_classical(cfg: &RunConfig) -> anyhow::Result<Outcome<Trajectory>> {
    let cfg = pipeline_config(cfg, Pipeline::Classical)?;
    let c = &cfg.classical;
    let traj = integrate(&c.initial_state, &cfg.model, c.t_final, c.tolerances, &SampleTimes::Uniform(c.sample_dt))?;
    let mut t = Table::new(&["t", "q", "p", "Jx", "Jy", "Jz"]);
    for (time, s) in traj.times.iter().zip(&traj.states) {
        t.push([*time, s.q, s.p, s.jx, s.jy, s.jz]);
    }
    let file = t.write(&cfg, "trajectory.csv", &[])?;
    Ok(Outcome { rows: vec![traj], files: vec![file], failures: Vec::new() })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassicalCell {
    pub gamma_minus: f64,
    pub gamma_plus: f64,
    pub verdict: AttractorVerdict,
}

pub fn run_lyapunov_map(cfg: &RunConfig) -> anyhow::Result<Outcome<ClassicalCell>> {
    let cfg = pipeline_config(cfg, Pipeline::LyapunovMap)?;
    let results = over_grid(&cfg, |gm, gp| cell_attractor(&cfg, &cell_params(&cfg, gm, gp)))?;
    let mut t = Table::new(&["gamma_minus", "gamma_plus", "verdict", "lyapunov_max", "late_speed", "section_clusters"]);
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for ((gm, gp), res) in results {
        match res {
            Ok(v) => {
                t.push([
                    gm.to_string(),
                    gp.to_string(),
                    v.kind.to_string(),
                    v.lyapunov_max.to_string(),
                    v.late_speed.to_string(),
                    v.section_clusters.to_string(),
                ]);
                rows.push(ClassicalCell { gamma_minus: gm, gamma_plus: gp, verdict: v });
            }
            Err(e) => {
                t.push([gm.to_string(), gp.to_string(), "failed".into(), fmt_opt(None), fmt_opt(None), "0".into()]);
                failures.push(failure(Pipeline::LyapunovMap, gm, gp, &e));
            }
        }
    }
    let file = t.write(&cfg, "lyapunov_map.csv", &failures)?;
    Ok(Outcome { rows, files: vec![file], failures })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GhsVerdictRow {
    pub gamma_minus: f64,
    pub gamma_plus: f64,
    pub quantum: QuantumCell,
    pub classical: AttractorVerdict,
    /// Chaotic attractor if and only if GinUE-consistent statistics.
    pub ghs_agrees: bool,
}

impl GhsVerdictRow {
    pub fn new(quantum: QuantumCell, classical: AttractorVerdict) -> Self {
        let chaotic = classical.kind == AttractorKind::Chaotic;
        GhsVerdictRow {
            gamma_minus: quantum.gamma_minus,
            gamma_plus: quantum.gamma_plus,
            ghs_agrees: chaotic == quantum.ginue_consistent,
            quantum,
            classical,
        }
    }
}

pub fn run_ghs_compare(cfg: &RunConfig) -> anyhow::Result<Outcome<GhsVerdictRow>> {
    let cfg = pipeline_config(cfg, Pipeline::GhsCompare)?;
    let results = over_grid(&cfg, |gm, gp| {
        let q = quantum_cell(&cfg, gm, gp)?;
        let c = cell_attractor(&cfg, &cell_params(&cfg, gm, gp))?;
        Ok(GhsVerdictRow::new(q, c))
    })?;
    let mut t = Table::new(&[
        "gamma_minus", "gamma_plus", "n_converged", "mean_r", "mean_neg_cos", "A2_poisson", "A2_ginue",
        "quantum_class", "ginue_consistent", "attractor", "lyapunov_max", "ghs_agrees",
    ]);
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for ((gm, gp), res) in results {
        match res {
            Ok(r) => {
                let q = &r.quantum;
                t.push([
                    gm.to_string(),
                    gp.to_string(),
                    q.n_converged.to_string(),
                    q.mean_r.to_string(),
                    q.mean_neg_cos.to_string(),
                    q.a2_poisson.to_string(),
                    q.a2_ginue.to_string(),
                    q.class.as_str().to_string(),
                    q.ginue_consistent.to_string(),
                    r.classical.kind.to_string(),
                    r.classical.lyapunov_max.to_string(),
                    r.ghs_agrees.to_string(),
                ]);
                rows.push(r);
            }
            Err(e) => failures.push(failure(Pipeline::GhsCompare, gm, gp, &e)),
        }
    }
    let file = t.write(&cfg, "ghs_compare.csv", &failures)?;
    Ok(Outcome { rows, files: vec![file], failures })
}
