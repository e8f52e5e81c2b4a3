use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dicke_cli::config::{Pipeline, RunConfig};
use dicke_cli::pipelines;
use dicke_core::classical::ClassicalState;
use dicke_core::{Parity, Spin};

#[derive(Parser)]
#[command(name = "dicke-lab", version, about = "Liouvillian spectra, level statistics and classical attractors of the open Dicke model")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Converged eigenvalues of one parity sector.
    Spectrum(Overrides),
    /// Moving-window ratio and AD statistics against |λ|, plus the spacing histogram.
    Stats(Overrides),
    /// Ratio averages and AD statistics over a coupling grid.
    RatioMap(Overrides),
    /// Moving-window AD statistics against both references.
    AdScan(Overrides),
    /// Mean-field trajectory.
    Classical(Overrides),
    /// Attractor verdicts over a coupling grid.
    LyapunovMap(Overrides),
    /// Quantum statistics against classical attractors on a coupling grid.
    GhsCompare(Overrides),
}

fn parse_cell(c: &str) -> Result<[f64; 2], String> {
    let (a, b) = c.split_once(':').ok_or_else(|| format!("cell `{c}` is not gm:gp"))?;
    Ok([a.trim().parse().map_err(|e| format!("{a}: {e}"))?, b.trim().parse().map_err(|e| format!("{b}: {e}"))?])
}

/// Flags override values read from `--config`.
#[derive(Args, Default)]
struct Overrides {
    /// TOML run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    output_dir: Option<PathBuf>,
    #[arg(long)]
    omega: Option<f64>,
    #[arg(long)]
    omega0: Option<f64>,
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long)]
    gamma_minus: Option<f64>,
    #[arg(long)]
    gamma_plus: Option<f64>,
    /// Pseudospin length, e.g. 1 or 1.5.
    #[arg(long)]
    j: Option<f64>,
    #[arg(long)]
    n_max: Option<usize>,
    /// Parity sector, +1 or -1.
    #[arg(long, allow_hyphen_values = true)]
    sector: Option<i32>,
    #[arg(long)]
    delta_nmax: Option<usize>,
    #[arg(long)]
    tol_match: Option<f64>,
    #[arg(long)]
    dim_cap: Option<usize>,
    #[arg(long)]
    k_neighbors: Option<usize>,
    #[arg(long)]
    window_size: Option<usize>,
    #[arg(long)]
    stride: Option<usize>,
    #[arg(long)]
    bin_width: Option<f64>,
    #[arg(long)]
    histogram_center: Option<f64>,
    /// Comma-separated γ₋ values of the grid.
    #[arg(long, value_delimiter = ',')]
    grid_gamma_minus: Option<Vec<f64>>,
    /// Comma-separated γ₊ values of the grid.
    #[arg(long, value_delimiter = ',')]
    grid_gamma_plus: Option<Vec<f64>>,
    /// Explicit grid cells `gm:gp,gm:gp,...`, replacing the product grid.
    #[arg(long, value_delimiter = ',', value_parser = parse_cell)]
    cells: Option<Vec<[f64; 2]>>,
    /// Initial state `q,p,Jx,Jy,Jz`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    initial_state: Option<Vec<f64>>,
    #[arg(long)]
    t_final: Option<f64>,
    #[arg(long)]
    sample_dt: Option<f64>,
    #[arg(long)]
    rtol: Option<f64>,
    #[arg(long)]
    atol: Option<f64>,
    /// Seed of the Lyapunov perturbation direction.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    parallelism: Option<usize>,
    /// Recompute cells even when a checkpoint exists.
    #[arg(long)]
    no_checkpoint: bool,
}

impl Overrides {
    fn resolve(self, pipeline: Pipeline) -> anyhow::Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        cfg.pipeline = pipeline;
        macro_rules! set {
            ($src:expr => $dst:expr) => {
                if let Some(v) = $src {
                    $dst = v;
                }
            };
        }
        set!(self.output_dir => cfg.output_dir);
        set!(self.omega => cfg.model.omega);
        set!(self.omega0 => cfg.model.omega0);
        set!(self.kappa => cfg.model.kappa);
        set!(self.gamma_minus => cfg.model.gamma_minus);
        set!(self.gamma_plus => cfg.model.gamma_plus);
        if let Some(j) = self.j {
            cfg.model.j = Spin::from_f64(j)?;
        }
        set!(self.n_max => cfg.model.n_max);
        if let Some(s) = self.sector {
            cfg.convergence.sector = Parity::from_sign(s)?;
        }
        set!(self.delta_nmax => cfg.convergence.delta_nmax);
        set!(self.tol_match => cfg.convergence.tol_match);
        set!(self.dim_cap => cfg.convergence.dim_cap);
        set!(self.k_neighbors => cfg.stats.k_neighbors);
        set!(self.window_size => cfg.stats.window_size);
        set!(self.stride => cfg.stats.stride);
        set!(self.bin_width => cfg.stats.bin_width);
        if self.histogram_center.is_some() {
            cfg.stats.histogram_center = self.histogram_center;
        }
        set!(self.grid_gamma_minus => cfg.grid.gamma_minus);
        set!(self.grid_gamma_plus => cfg.grid.gamma_plus);
        set!(self.cells => cfg.grid.cells);
        if let Some(v) = self.initial_state {
            anyhow::ensure!(v.len() == 5, "--initial-state needs five values q,p,Jx,Jy,Jz");
            cfg.classical.initial_state = ClassicalState::from_slice(&v);
        }
        set!(self.t_final => cfg.classical.t_final);
        set!(self.sample_dt => cfg.classical.sample_dt);
        if let Some(r) = self.rtol {
            cfg.classical.tolerances.rtol = r;
            cfg.classical.lyapunov.tolerances.rtol = r;
            cfg.classical.protocol.tolerances.rtol = r;
            cfg.classical.protocol.lyapunov.tolerances.rtol = r;
        }
        if let Some(a) = self.atol {
            cfg.classical.tolerances.atol = a;
            cfg.classical.lyapunov.tolerances.atol = a;
            cfg.classical.protocol.tolerances.atol = a;
            cfg.classical.protocol.lyapunov.tolerances.atol = a;
        }
        if let Some(s) = self.seed {
            cfg.classical.lyapunov.seed = s;
            cfg.classical.protocol.lyapunov.seed = s;
        }
        set!(self.parallelism => cfg.execution.parallelism);
        if self.no_checkpoint {
            cfg.execution.checkpoint = false;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn report<T>(o: pipelines::Outcome<T>) -> ExitCode {
    for f in &o.files {
        println!("wrote {}", f.display());
    }
    if o.failures.is_empty() {
        ExitCode::SUCCESS
    } else {
        eprintln!("{} cell(s) failed:", o.failures.len());
        for f in &o.failures {
            eprintln!("  {f}");
        }
        ExitCode::FAILURE
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    Ok(match cli.command {
        Command::Spectrum(o) => report(pipelines::run_spectrum(&o.resolve(Pipeline::Spectrum)?)?),
        Command::Stats(o) => report(pipelines::run_lambda_window_scan(&o.resolve(Pipeline::Stats)?)?),
        Command::RatioMap(o) => report(pipelines::run_ratio_map(&o.resolve(Pipeline::RatioMap)?)?),
        Command::AdScan(o) => report(pipelines::run_ad_scan(&o.resolve(Pipeline::AdScan)?)?),
        Command::Classical(o) => report(pipelines::run_classical(&o.resolve(Pipeline::Classical)?)?),
        Command::LyapunovMap(o) => report(pipelines::run_lyapunov_map(&o.resolve(Pipeline::LyapunovMap)?)?),
        Command::GhsCompare(o) => report(pipelines::run_ghs_compare(&o.resolve(Pipeline::GhsCompare)?)?),
    })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cells_parse_as_pairs() {
        assert_eq!(parse_cell("1:2.5"), Ok([1.0, 2.5]));
        assert!(parse_cell("1,2").is_err());
        assert!(parse_cell("a:2").is_err());
    }

    #[test]
    fn flags_override_defaults() {
        let cli = Cli::try_parse_from([
            "dicke-lab", "ghs-compare", "--cells", "1:2,2:2", "--sector", "-1", "--initial-state", "0,0,0.001,0,-1",
            "--n-max", "12", "--no-checkpoint",
        ])
        .unwrap();
        let Command::GhsCompare(o) = cli.command else { panic!("wrong subcommand") };
        let cfg = o.resolve(Pipeline::GhsCompare).unwrap();
        assert_eq!(cfg.grid.cells, vec![[1.0, 2.0], [2.0, 2.0]]);
        assert_eq!(cfg.convergence.sector, Parity::Negative);
        assert_eq!(cfg.classical.initial_state.jz, -1.0);
        assert_eq!(cfg.model.n_max, 12);
        assert!(!cfg.execution.checkpoint);
    }
}
