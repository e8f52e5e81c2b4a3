//! Orchestration for the open Dicke model study: configuration, per-cell
//! checkpoints and the table-emitting pipelines behind `dicke-lab`.

pub mod cells;
pub mod config;
pub mod output;
pub mod pipelines;

pub use config::{Pipeline, RunConfig};
pub use pipelines::{
    run_ad_scan, run_classical, run_ghs_compare, run_lambda_window_scan, run_lyapunov_map,
    run_ratio_map, run_spectrum, GhsVerdictRow, Outcome, QuantumCell, QuantumClass, WindowRow,
};
