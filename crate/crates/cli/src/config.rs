//! Run configuration: TOML file, defaults, and validation.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use dicke_core::classical::{AttractorProtocol, ClassicalState, LyapunovConfig, Tolerances};
use dicke_core::stats::DEFAULT_UNFOLD_NEIGHBORS;
use dicke_core::{ConvergenceConfig, ModelParams};
use serde::{Deserialize, Serialize};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pipeline {
    Spectrum,
    Stats,
    RatioMap,
    AdScan,
    Classical,
    LyapunovMap,
    GhsCompare,
}

impl Pipeline {
    pub fn name(self) -> &'static str {
        match self {
            Pipeline::Spectrum => "spectrum",
            Pipeline::Stats => "stats",
            Pipeline::RatioMap => "ratio-map",
            Pipeline::AdScan => "ad-scan",
            Pipeline::Classical => "classical",
            Pipeline::LyapunovMap => "lyapunov-map",
            Pipeline::GhsCompare => "ghs-compare",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StatsConfig {
    pub k_neighbors: usize,
    pub window_size: usize,
    pub stride: usize,
    pub bin_width: f64,
    /// Histogram the window whose center is closest to this `|λ|`; the
    /// whole converged set when absent.
    pub histogram_center: Option<f64>,
}

impl Default for StatsConfig {
    fn default() -> Self {
        StatsConfig {
            k_neighbors: DEFAULT_UNFOLD_NEIGHBORS,
            window_size: 500,
            stride: 250,
            bin_width: 0.1,
            histogram_center: None,
        }
    }
}

/// Coupling grid: the product of the two lists, or an explicit cell list.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub gamma_minus: Vec<f64>,
    pub gamma_plus: Vec<f64>,
    pub cells: Vec<[f64; 2]>,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig { gamma_minus: vec![1.0, 2.0], gamma_plus: vec![0.0, 2.0], cells: Vec::new() }
    }
}

impl GridConfig {
    pub fn points(&self) -> Vec<(f64, f64)> {
        if !self.cells.is_empty() {
            return self.cells.iter().map(|c| (c[0], c[1])).collect();
        }
        let mut out = Vec::new();
        for &gm in &self.gamma_minus {
            for &gp in &self.gamma_plus {
                out.push((gm, gp));
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClassicalConfig {
    pub initial_state: ClassicalState,
    pub t_final: f64,
    pub sample_dt: f64,
    pub tolerances: Tolerances,
    pub lyapunov: LyapunovConfig,
    pub protocol: AttractorProtocol,
}

impl Default for ClassicalConfig {
    fn default() -> Self {
        ClassicalConfig {
            initial_state: ClassicalState::new(0.0, 0.0, 0.001, 0.0, -1.0),
            t_final: 200.0,
            sample_dt: 0.05,
            tolerances: Tolerances::default(),
            lyapunov: LyapunovConfig::default(),
            protocol: AttractorProtocol::default(),
        }
    }
}

/// Thresholds that turn quantum statistics into a GinUE / Poisson class.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerdictConfig {
    pub ad_threshold: f64,
    pub ratio_tolerance: f64,
    pub ginue_mean_r: f64,
    pub ginue_mean_neg_cos: f64,
    pub poisson_mean_r: f64,
    pub poisson_mean_neg_cos: f64,
}

impl Default for VerdictConfig {
    fn default() -> Self {
        VerdictConfig {
            ad_threshold: dicke_core::stats::AD_THRESHOLD,
            ratio_tolerance: 0.02,
            ginue_mean_r: dicke_core::stats::GINUE_MEAN_R,
            ginue_mean_neg_cos: dicke_core::stats::GINUE_MEAN_NEG_COS,
            poisson_mean_r: dicke_core::stats::POISSON_MEAN_R,
            poisson_mean_neg_cos: dicke_core::stats::POISSON_MEAN_NEG_COS,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExecutionConfig {
    /// Grid cells solved concurrently; each dense eigensolve is memory heavy.
    pub parallelism: usize,
    /// Reuse per-cell results found in `<output_dir>/cells`.
    pub checkpoint: bool,
}

impl Default for ExecutionConfig {
    fn default() -> Self {
        ExecutionConfig { parallelism: 1, checkpoint: true }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub pipeline: Pipeline,
    pub output_dir: PathBuf,
    pub model: ModelParams,
    pub convergence: ConvergenceConfig,
    pub stats: StatsConfig,
    pub grid: GridConfig,
    pub classical: ClassicalConfig,
    pub verdict: VerdictConfig,
    pub execution: ExecutionConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            pipeline: Pipeline::Spectrum,
            output_dir: PathBuf::from("out"),
            model: ModelParams::default(),
            convergence: ConvergenceConfig::default(),
            stats: StatsConfig::default(),
            grid: GridConfig::default(),
            classical: ClassicalConfig::default(),
            verdict: VerdictConfig::default(),
            execution: ExecutionConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> anyhow::Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        Self::from_toml_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serialises to TOML")
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        self.model.validate()?;
        let s = &self.stats;
        if s.k_neighbors < 4 {
            bail!("stats.k_neighbors must be at least 4");
        }
        if s.window_size == 0 || s.stride == 0 {
            bail!("stats.window_size and stats.stride must be positive");
        }
        if !(s.bin_width > 0.0) {
            bail!("stats.bin_width must be positive");
        }
        if matches!(self.pipeline, Pipeline::RatioMap | Pipeline::LyapunovMap | Pipeline::GhsCompare)
            && self.grid.points().is_empty()
        {
            bail!("the coupling grid is empty");
        }
        if self.grid.points().iter().any(|&(a, b)| !(a >= 0.0 && b >= 0.0)) {
            bail!("grid couplings must be non-negative");
        }
        if self.execution.parallelism == 0 {
            bail!("execution.parallelism must be at least 1");
        }
        if !(self.classical.t_final > 0.0 && self.classical.sample_dt > 0.0) {
            bail!("classical.t_final and classical.sample_dt must be positive");
        }
        Ok(())
    }
}
