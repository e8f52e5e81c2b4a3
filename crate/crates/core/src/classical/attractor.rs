//! Classification of long-time attractors of the mean-field flow.

use serde::{Deserialize, Serialize};

use super::integrator::{Dopri5, Tolerances};
use super::lyapunov::{largest_lyapunov, LyapunovConfig};
use super::{flow, ClassicalState, MeanFieldSystem};
use crate::basis::ModelParams;
use crate::error::Result;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AttractorKind {
    FixedPoint,
    LimitCycle,
    Chaotic,
    Undetermined,
}

impl AttractorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            AttractorKind::FixedPoint => "fixed_point",
            AttractorKind::LimitCycle => "limit_cycle",
            AttractorKind::Chaotic => "chaotic",
            AttractorKind::Undetermined => "undetermined",
        }
    }
}

impl std::fmt::Display for AttractorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AttractorProtocol {
    /// Time discarded before any measurement.
    pub t_transient: f64,
    pub lyapunov: LyapunovConfig,
    pub chaos_threshold: f64,
    pub eps_fixed_point: f64,
    pub eps_cycle: f64,
    /// Integration time used for the Poincaré section.
    pub t_section: f64,
    /// Most distinct section points still read as a periodic orbit.
    pub max_cycle_points: usize,
    pub tolerances: Tolerances,
}

impl Default for AttractorProtocol {
    fn default() -> Self {
        AttractorProtocol {
            t_transient: 200.0,
            lyapunov: LyapunovConfig { t_total: 2000.0, t_transient: 100.0, ..Default::default() },
            chaos_threshold: 0.01,
            eps_fixed_point: 1e-6,
            eps_cycle: 1e-3,
            t_section: 500.0,
            max_cycle_points: 16,
            tolerances: Tolerances::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AttractorVerdict {
    pub kind: AttractorKind,
    pub lyapunov_max: f64,
    /// `‖flow‖` at the end of the Lyapunov run.
    pub late_speed: f64,
    pub section_crossings: usize,
    pub section_clusters: usize,
    /// Index into `(q, p, Jx, Jy, Jz)` of the section coordinate.
    pub section_coordinate: usize,
    pub protocol: AttractorProtocol,
}

pub fn classify_attractor(
    state0: &ClassicalState,
    params: &ModelParams,
    protocol: &AttractorProtocol,
) -> Result<AttractorVerdict> {
    let sys = MeanFieldSystem::new(params);
    let mut solver = Dopri5::new(&sys, 0.0, &state0.to_array(), protocol.tolerances);
    solver.advance_to(protocol.t_transient, |_| {})?;
    let settled = ClassicalState::from_slice(solver.y());

    let lyap = largest_lyapunov(&settled, params, &protocol.lyapunov)?;
    let late = ClassicalState::from_slice(&lyap.final_state);
    let speed = flow(&late, params).to_array().iter().map(|v| v * v).sum::<f64>().sqrt();
    let mut verdict = AttractorVerdict {
        kind: AttractorKind::Undetermined,
        lyapunov_max: lyap.exponent,
        late_speed: speed,
        section_crossings: 0,
        section_clusters: 0,
        section_coordinate: 4,
        protocol: *protocol,
    };
    if speed < protocol.eps_fixed_point {
        verdict.kind = AttractorKind::FixedPoint;
        return Ok(verdict);
    }
    if lyap.exponent > protocol.chaos_threshold {
        verdict.kind = AttractorKind::Chaotic;
        return Ok(verdict);
    }
    let section = poincare_section(&sys, &late, protocol)?;
    verdict.section_coordinate = section.coordinate;
    verdict.section_crossings = section.points.len();
    let clusters = cluster_count(&section.points, protocol.eps_cycle);
    verdict.section_clusters = clusters;
    if clusters >= 1 && clusters <= protocol.max_cycle_points && section.points.len() >= 2 * clusters {
        verdict.kind = AttractorKind::LimitCycle;
    }
    Ok(verdict)
}

struct Section {
    coordinate: usize,
    points: Vec<[f64; 5]>,
}

/// Upward crossings of `Jz = ⟨Jz⟩`. When `Jz` is constant along the orbit,
/// as for the uniformly rotating solutions of the Tavis-Cummings limit, the
/// coordinate with the largest spread is used instead.
fn poincare_section(sys: &MeanFieldSystem, start: &ClassicalState, protocol: &AttractorProtocol) -> Result<Section> {
    let y0 = start.to_array();
    let mut solver = Dopri5::new(sys, 0.0, &y0, protocol.tolerances);
    let mut mean = [0.0; 5];
    let mut sq = [0.0; 5];
    let mut prev = y0;
    solver.advance_to(protocol.t_section, |d| {
        let mut end = [0.0; 5];
        d.eval(d.t1(), &mut end);
        for i in 0..5 {
            let avg = 0.5 * (prev[i] + end[i]);
            mean[i] += avg * d.h;
            sq[i] += avg * avg * d.h;
        }
        prev = end;
    })?;
    let t = protocol.t_section;
    let spread: Vec<f64> = (0..5).map(|i| (sq[i] / t - (mean[i] / t).powi(2)).max(0.0).sqrt()).collect();
    let coordinate = if spread[4] > 1e-6 {
        4
    } else {
        (0..5).max_by(|&a, &b| spread[a].total_cmp(&spread[b])).expect("five coordinates")
    };
    let level = mean[coordinate] / t;

    let mut solver = Dopri5::new(sys, 0.0, &y0, protocol.tolerances);
    let mut points = Vec::new();
    let mut a = [0.0; 5];
    let mut b = [0.0; 5];
    let mut m = [0.0; 5];
    solver.advance_to(protocol.t_section, |d| {
        d.eval(d.t0, &mut a);
        d.eval(d.t1(), &mut b);
        if a[coordinate] < level && b[coordinate] >= level {
            let (mut lo, mut hi) = (d.t0, d.t1());
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                d.eval(mid, &mut m);
                if m[coordinate] < level {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            d.eval(0.5 * (lo + hi), &mut m);
            points.push(m);
        }
    })?;
    Ok(Section { coordinate, points })
}

fn cluster_count(points: &[[f64; 5]], eps: f64) -> usize {
    let mut reps: Vec<[f64; 5]> = Vec::new();
    for p in points {
        let close = reps.iter().any(|r| (0..5).map(|i| (r[i] - p[i]).powi(2)).sum::<f64>().sqrt() < eps);
        if !close {
            reps.push(*p);
        }
    }
    reps.len()
}
