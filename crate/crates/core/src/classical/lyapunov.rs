//! Largest Lyapunov exponent by two-trajectory renormalisation.

use rand::rngs::StdRng;
use rand::SeedableRng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::integrator::{Dopri5, OdeSystem, Tolerances};
use super::{ClassicalState, MeanFieldSystem};
use crate::basis::ModelParams;
use crate::error::{Error, Result};

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LyapunovConfig {
    /// Total integration time, transient included.
    pub t_total: f64,
    pub t_renorm: f64,
    pub d0: f64,
    /// Growth before this time is discarded while the separation aligns.
    pub t_transient: f64,
    pub seed: u64,
    pub tolerances: Tolerances,
}

impl Default for LyapunovConfig {
    fn default() -> Self {
        LyapunovConfig {
            t_total: 2000.0,
            t_renorm: 1.0,
            d0: 1e-8,
            t_transient: 200.0,
            seed: 0x5eed,
            tolerances: Tolerances::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LyapunovEstimate {
    pub exponent: f64,
    pub renormalizations: usize,
    /// Reference trajectory at `t_total`.
    pub final_state: Vec<f64>,
}

struct Pair<'a, S: OdeSystem + ?Sized>(&'a S);

impl<S: OdeSystem + ?Sized> OdeSystem for Pair<'_, S> {
    fn dim(&self) -> usize {
        2 * self.0.dim()
    }

    fn rhs(&self, t: f64, y: &[f64], dy: &mut [f64]) {
        let n = self.0.dim();
        let (ya, yb) = y.split_at(n);
        let (da, db) = dy.split_at_mut(n);
        self.0.rhs(t, ya, da);
        self.0.rhs(t, yb, db);
    }
}

/// Benettin estimate for a generic flow: the perturbed copy starts at
/// `y0 + d0 · direction / ‖direction‖` and is pulled back to distance `d0`
/// every `t_renorm`.
pub fn benettin<S: OdeSystem + ?Sized>(
    sys: &S,
    y0: &[f64],
    direction: &[f64],
    cfg: &LyapunovConfig,
) -> Result<LyapunovEstimate> {
    let n = sys.dim();
    if !(cfg.t_renorm > 0.0 && cfg.d0 > 0.0 && cfg.t_total > cfg.t_transient && cfg.t_transient >= 0.0) {
        return Err(Error::InvalidArgument(format!("inconsistent Lyapunov settings {cfg:?}")));
    }
    let norm = direction.iter().map(|v| v * v).sum::<f64>().sqrt();
    if !(norm > 0.0) {
        return Err(Error::InvalidArgument("perturbation direction must be nonzero".into()));
    }
    let mut y = Vec::with_capacity(2 * n);
    y.extend_from_slice(y0);
    y.extend(y0.iter().zip(direction).map(|(a, d)| a + cfg.d0 * d / norm));

    let pair = Pair(sys);
    let mut solver = Dopri5::new(&pair, 0.0, &y, cfg.tolerances);
    let mut sum = 0.0;
    let mut counted_time = 0.0;
    let mut renorms = 0;
    let mut t = 0.0;
    while t < cfg.t_total - 1e-12 {
        let t_next = (t + cfg.t_renorm).min(cfg.t_total);
        solver.advance_to(t_next, |_| {})?;
        y.copy_from_slice(solver.y());
        let d = (0..n).map(|i| (y[n + i] - y[i]).powi(2)).sum::<f64>().sqrt();
        if !d.is_finite() || d == 0.0 {
            return Err(Error::NumericEscape(t_next));
        }
        if t >= cfg.t_transient - 1e-12 {
            sum += (d / cfg.d0).ln();
            counted_time += t_next - t;
        }
        for i in 0..n {
            y[n + i] = y[i] + (y[n + i] - y[i]) * cfg.d0 / d;
        }
        solver.reset(t_next, &y);
        renorms += 1;
        t = t_next;
    }
    Ok(LyapunovEstimate {
        exponent: sum / counted_time,
        renormalizations: renorms,
        final_state: y[..n].to_vec(),
    })
}

/// Random unit perturbation of the mean-field state whose spin part is
/// tangent to the sphere through `state`.
pub fn tangent_direction(state: &ClassicalState, seed: u64) -> [f64; 5] {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut d = [0.0; 5];
    for v in d.iter_mut() {
        *v = StandardNormal.sample(&mut rng);
    }
    let j = [state.jx, state.jy, state.jz];
    let jj = state.spin_norm_sq();
    if jj > 0.0 {
        let dot = d[2] * j[0] + d[3] * j[1] + d[4] * j[2];
        for k in 0..3 {
            d[2 + k] -= dot / jj * j[k];
        }
    }
    let norm = d.iter().map(|v| v * v).sum::<f64>().sqrt();
    d.map(|v| v / norm)
}

pub fn largest_lyapunov(
    state0: &ClassicalState,
    params: &ModelParams,
    cfg: &LyapunovConfig,
) -> Result<LyapunovEstimate> {
    let sys = MeanFieldSystem::new(params);
    benettin(&sys, &state0.to_array(), &tangent_direction(state0, cfg.seed), cfg)
}
