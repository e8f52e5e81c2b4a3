//! Per-cell results checkpointed under `<output_dir>/cells`.

use std::fs;
use std::io::BufReader;
use std::path::PathBuf;

use anyhow::Context;
use dicke_core::classical::{classify_attractor, AttractorVerdict, ClassicalState};
use dicke_core::{converged_eigenvalues, ComplexSpectrum, ModelParams};
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::output::write_atomic;

fn cells_dir(cfg: &RunConfig) -> PathBuf {
    cfg.output_dir.join("cells")
}

fn params_key(p: &ModelParams) -> String {
    format!(
        "j{}_n{}_gm{}_gp{}_w{}_wz{}_k{}",
        p.j.value(),
        p.n_max,
        p.gamma_minus,
        p.gamma_plus,
        p.omega,
        p.omega0,
        p.kappa
    )
}

pub fn cell_params(cfg: &RunConfig, gamma_minus: f64, gamma_plus: f64) -> ModelParams {
    cfg.model.with_couplings(gamma_minus, gamma_plus)
}

pub fn spectrum_path(cfg: &RunConfig, params: &ModelParams) -> PathBuf {
    let c = &cfg.convergence;
    cells_dir(cfg).join(format!(
        "spectrum_{}_s{}_d{}_t{:e}.dat",
        params_key(params),
        c.sector.sign(),
        c.delta_nmax,
        c.tol_match
    ))
}

/// Converged spectrum of one parameter point, read from the checkpoint when
/// an identical run is already on disk.
pub fn cell_spectrum(cfg: &RunConfig, params: &ModelParams) -> anyhow::Result<ComplexSpectrum> {
    let path = spectrum_path(cfg, params);
    let c = &cfg.convergence;
    if cfg.execution.checkpoint {
        if let Ok(f) = fs::File::open(&path) {
            if let Ok(s) = ComplexSpectrum::read_dump(BufReader::new(f)) {
                if &s.params == params
                    && s.sector == c.sector
                    && s.delta_nmax == c.delta_nmax
                    && s.tol_match == c.tol_match
                {
                    log::info!("reusing {}", path.display());
                    return Ok(s);
                }
            }
        }
    }
    log::info!("diagonalising {}", params_key(params));
    let s = converged_eigenvalues(params, &cfg.convergence)
        .with_context(|| format!("spectrum at {}", params_key(params)))?;
    if cfg.execution.checkpoint {
        fs::create_dir_all(cells_dir(cfg))?;
        let mut buf = Vec::new();
        s.write_dump(&mut buf, &[])?;
        write_atomic(&path, &buf)?;
    }
    Ok(s)
}

#[derive(Serialize, Deserialize)]
struct AttractorRecord {
    params: ModelParams,
    initial_state: ClassicalState,
    verdict: AttractorVerdict,
}

/// Attractor verdict of one parameter point, checkpointed like spectra.
pub fn cell_attractor(cfg: &RunConfig, params: &ModelParams) -> anyhow::Result<AttractorVerdict> {
    let path = cells_dir(cfg).join(format!("attractor_{}.json", params_key(params)));
    let protocol = &cfg.classical.protocol;
    let start = cfg.classical.initial_state;
    if cfg.execution.checkpoint {
        if let Ok(text) = fs::read_to_string(&path) {
            if let Ok(rec) = serde_json::from_str::<AttractorRecord>(&text) {
                if &rec.params == params && rec.initial_state == start && &rec.verdict.protocol == protocol {
                    return Ok(rec.verdict);
                }
            }
        }
    }
    let verdict = classify_attractor(&start, params, protocol)
        .with_context(|| format!("attractor at {}", params_key(params)))?;
    if cfg.execution.checkpoint {
        fs::create_dir_all(cells_dir(cfg))?;
        let rec = AttractorRecord { params: params.clone(), initial_state: start, verdict: verdict.clone() };
        write_atomic(&path, serde_json::to_string_pretty(&rec)?.as_bytes())?;
    }
    Ok(verdict)
}
