//! Mean-field limit of the open Dicke model: the dissipative flow for the
//! cavity quadratures and the scaled collective spin.

pub mod attractor;
pub mod critical;
pub mod integrator;
pub mod lyapunov;

use serde::{Deserialize, Serialize};

use crate::basis::ModelParams;

pub use attractor::{classify_attractor, AttractorKind, AttractorProtocol, AttractorVerdict};
pub use critical::{critical_coupling_closed, critical_coupling_open};
pub use integrator::{integrate, Dopri5, OdeSystem, SampleTimes, Tolerances, Trajectory};
pub use lyapunov::{largest_lyapunov, LyapunovConfig, LyapunovEstimate};

/// `(q, p, Jx, Jy, Jz)` with `J = ⟨Ĵ⟩ / j`.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassicalState {
    pub q: f64,
    pub p: f64,
    pub jx: f64,
    pub jy: f64,
    pub jz: f64,
}

impl ClassicalState {
    pub const SOUTH_POLE: Self = ClassicalState { q: 0.0, p: 0.0, jx: 0.0, jy: 0.0, jz: -1.0 };
    pub const NORTH_POLE: Self = ClassicalState { q: 0.0, p: 0.0, jx: 0.0, jy: 0.0, jz: 1.0 };

    pub fn new(q: f64, p: f64, jx: f64, jy: f64, jz: f64) -> Self {
        ClassicalState { q, p, jx, jy, jz }
    }

    pub fn to_array(self) -> [f64; 5] {
        [self.q, self.p, self.jx, self.jy, self.jz]
    }

    pub fn from_slice(y: &[f64]) -> Self {
        ClassicalState { q: y[0], p: y[1], jx: y[2], jy: y[3], jz: y[4] }
    }

    pub fn spin_norm_sq(&self) -> f64 {
        self.jx * self.jx + self.jy * self.jy + self.jz * self.jz
    }
}

/// Couplings of the flow, extracted once from [`ModelParams`].
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct MeanFieldSystem {
    pub omega: f64,
    pub omega0: f64,
    pub kappa: f64,
    pub gamma_minus: f64,
    pub gamma_plus: f64,
}

impl MeanFieldSystem {
    pub fn new(params: &ModelParams) -> Self {
        MeanFieldSystem {
            omega: params.omega,
            omega0: params.omega0,
            kappa: params.kappa,
            gamma_minus: params.gamma_minus,
            gamma_plus: params.gamma_plus,
        }
    }

    pub fn rhs(&self, y: &[f64], dy: &mut [f64]) {
        let [q, p, jx, jy, jz] = [y[0], y[1], y[2], y[3], y[4]];
        let gd = self.gamma_minus - self.gamma_plus;
        let gs = self.gamma_minus + self.gamma_plus;
        dy[0] = -self.kappa * q + self.omega * p - gd * jy;
        dy[1] = -self.kappa * p - self.omega * q - gs * jx;
        dy[2] = -self.omega0 * jy - gd * p * jz;
        dy[3] = self.omega0 * jx - gs * q * jz;
        dy[4] = gs * q * jy + gd * p * jx;
    }
}

impl OdeSystem for MeanFieldSystem {
    fn dim(&self) -> usize {
        5
    }

    fn rhs(&self, _t: f64, y: &[f64], dy: &mut [f64]) {
        MeanFieldSystem::rhs(self, y, dy)
    }
}

pub fn flow(state: &ClassicalState, params: &ModelParams) -> ClassicalState {
    let mut dy = [0.0; 5];
    MeanFieldSystem::new(params).rhs(&state.to_array(), &mut dy);
    ClassicalState::from_slice(&dy)
}

/// Energy per spin of the closed system.
pub fn classical_hamiltonian(state: &ClassicalState, params: &ModelParams) -> f64 {
    let gd = params.gamma_minus - params.gamma_plus;
    let gs = params.gamma_minus + params.gamma_plus;
    0.5 * params.omega * (state.q * state.q + state.p * state.p)
        + params.omega0 * state.jz
        + gs * state.q * state.jx
        - gd * state.p * state.jy
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::Spin;

    fn params(gm: f64, gp: f64) -> ModelParams {
        ModelParams::unit(gm, gp, Spin::from_twice(2).unwrap(), 1).unwrap()
    }

    #[test]
    fn poles_are_fixed_points() {
        let p = params(1.3, 0.4);
        for s in [ClassicalState::SOUTH_POLE, ClassicalState::NORTH_POLE] {
            assert_eq!(flow(&s, &p).to_array(), [0.0; 5]);
        }
        assert_eq!(classical_hamiltonian(&ClassicalState::SOUTH_POLE, &p), -1.0);
    }

    #[test]
    fn decoupled_rotation() {
        let mut p = params(0.0, 0.0);
        p.kappa = 0.0;
        let s = ClassicalState::new(0.3, -0.2, 0.6, 0.0, 0.8);
        let d = flow(&s, &p);
        assert_eq!(d.to_array(), [-0.2, -0.3, 0.0, 0.6, 0.0]);
    }

    #[test]
    fn energy_example() {
        let mut p = params(1.0, 1.0);
        p.omega0 = 1.0;
        let s = ClassicalState::new(1.0, 0.0, 1.0, 0.0, 0.0);
        assert!((classical_hamiltonian(&s, &p) - 2.5).abs() < 1e-15);
    }
}
