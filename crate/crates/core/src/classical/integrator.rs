//! Dormand-Prince 5(4) integrator with step-size control and the standard
//! fourth-order continuous extension.

use serde::{Deserialize, Serialize};

use super::{classical_hamiltonian, ClassicalState, MeanFieldSystem};
use crate::basis::ModelParams;
use crate::error::{Error, Result};

pub trait OdeSystem {
    fn dim(&self) -> usize;
    fn rhs(&self, t: f64, y: &[f64], dy: &mut [f64]);
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
    pub h_max: f64,
}

// At 1e-10/1e-12 the spin-norm drift over t = 1000 reaches 2e-7 on
// chaotic conservative runs; these defaults keep it below 2e-9.
impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { rtol: 1e-12, atol: 1e-14, h_max: f64::MAX }
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

/// Continuous extension over one accepted step `[t0, t0 + h]`.
#[derive(Clone, Debug)]
pub struct DenseStep {
    pub t0: f64,
    pub h: f64,
    coeffs: [Vec<f64>; 5],
}

impl DenseStep {
    pub fn t1(&self) -> f64 {
        self.t0 + self.h
    }

    pub fn eval(&self, t: f64, out: &mut [f64]) {
        let th = (t - self.t0) / self.h;
        let th1 = 1.0 - th;
        let [r1, r2, r3, r4, r5] = &self.coeffs;
        for i in 0..out.len() {
            out[i] = r1[i] + th * (r2[i] + th1 * (r3[i] + th * (r4[i] + th1 * r5[i])));
        }
    }
}

pub struct Dopri5<'a, S: OdeSystem + ?Sized> {
    sys: &'a S,
    tol: Tolerances,
    t: f64,
    y: Vec<f64>,
    h: f64,
    k: [Vec<f64>; 7],
    ytmp: Vec<f64>,
    ynew: Vec<f64>,
    pub accepted: usize,
    pub rejected: usize,
}

impl<'a, S: OdeSystem + ?Sized> Dopri5<'a, S> {
    pub fn new(sys: &'a S, t0: f64, y0: &[f64], tol: Tolerances) -> Self {
        let n = sys.dim();
        assert_eq!(y0.len(), n);
        let z = vec![0.0; n];
        let mut s = Dopri5 {
            sys,
            tol,
            t: t0,
            y: y0.to_vec(),
            h: 0.0,
            k: [z.clone(), z.clone(), z.clone(), z.clone(), z.clone(), z.clone(), z.clone()],
            ytmp: z.clone(),
            ynew: z,
            accepted: 0,
            rejected: 0,
        };
        s.reset(t0, y0);
        s
    }

    /// Restarts from a new state, keeping the counters.
    pub fn reset(&mut self, t: f64, y: &[f64]) {
        self.t = t;
        self.y.copy_from_slice(y);
        self.sys.rhs(t, &self.y, &mut self.k[0]);
        self.h = self.initial_step();
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    fn scale(&self, a: f64, b: f64) -> f64 {
        self.tol.atol + self.tol.rtol * a.abs().max(b.abs())
    }

    fn initial_step(&mut self) -> f64 {
        let n = self.y.len() as f64;
        let mut d0 = 0.0;
        let mut d1 = 0.0;
        for i in 0..self.y.len() {
            let sc = self.scale(self.y[i], self.y[i]);
            d0 += (self.y[i] / sc).powi(2);
            d1 += (self.k[0][i] / sc).powi(2);
        }
        let (d0, d1) = ((d0 / n).sqrt(), (d1 / n).sqrt());
        let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        for i in 0..self.y.len() {
            self.ytmp[i] = self.y[i] + h0 * self.k[0][i];
        }
        self.sys.rhs(self.t + h0, &self.ytmp, &mut self.k[1]);
        let mut d2 = 0.0;
        for i in 0..self.y.len() {
            let sc = self.scale(self.y[i], self.y[i]);
            d2 += ((self.k[1][i] - self.k[0][i]) / sc).powi(2);
        }
        let d2 = (d2 / n).sqrt() / h0;
        let h1 = if d1.max(d2) <= 1e-15 {
            (h0 * 1e-3).max(1e-6)
        } else {
            (0.01 / d1.max(d2)).powf(0.2)
        };
        (100.0 * h0).min(h1).min(self.tol.h_max)
    }

    /// Advances by one accepted step that does not pass `t_limit`.
    pub fn step(&mut self, t_limit: f64) -> Result<DenseStep> {
        let n = self.y.len();
        let mut last_reject = false;
        loop {
            let remaining = t_limit - self.t;
            let mut h = self.h.min(self.tol.h_max);
            let hits_limit = h >= remaining;
            if hits_limit {
                h = remaining;
            }
            if h <= 1e-14 * self.t.abs().max(1.0) {
                return Err(Error::StepSizeUnderflow { t: self.t, h });
            }
            self.stages(h);
            let mut err = 0.0;
            for i in 0..n {
                let e = h
                    * (E1 * self.k[0][i] + E3 * self.k[2][i] + E4 * self.k[3][i]
                        + E5 * self.k[4][i] + E6 * self.k[5][i] + E7 * self.k[6][i]);
                let sc = self.scale(self.y[i], self.ynew[i]);
                err += (e / sc).powi(2);
            }
            let err = (err / n as f64).sqrt();
            if !err.is_finite() || self.ynew.iter().any(|v| !v.is_finite()) {
                if !self.y.iter().all(|v| v.is_finite()) {
                    return Err(Error::NumericEscape(self.t));
                }
                self.h = 0.1 * h;
                self.rejected += 1;
                last_reject = true;
                continue;
            }
            let mut fac = (0.9 * err.powf(-0.2)).clamp(0.2, 10.0);
            if err <= 1.0 {
                if last_reject {
                    fac = fac.min(1.0);
                }
                let dense = self.dense(h);
                self.t = if hits_limit { t_limit } else { self.t + h };
                std::mem::swap(&mut self.y, &mut self.ynew);
                self.k.swap(0, 6);
                if !hits_limit || fac * h < self.h {
                    self.h = fac * h;
                }
                self.accepted += 1;
                if self.y.iter().any(|v| v.abs() > 1e150) {
                    return Err(Error::NumericEscape(self.t));
                }
                return Ok(dense);
            }
            self.h = fac.min(1.0) * h;
            self.rejected += 1;
            last_reject = true;
        }
    }

    fn stages(&mut self, h: f64) {
        let n = self.y.len();
        let t = self.t;
        let (k, y, ytmp) = (&mut self.k, &self.y, &mut self.ytmp);
        for i in 0..n {
            ytmp[i] = y[i] + h * A21 * k[0][i];
        }
        self.sys.rhs(t + C2 * h, ytmp, &mut k[1]);
        for i in 0..n {
            ytmp[i] = y[i] + h * (A31 * k[0][i] + A32 * k[1][i]);
        }
        self.sys.rhs(t + C3 * h, ytmp, &mut k[2]);
        for i in 0..n {
            ytmp[i] = y[i] + h * (A41 * k[0][i] + A42 * k[1][i] + A43 * k[2][i]);
        }
        self.sys.rhs(t + C4 * h, ytmp, &mut k[3]);
        for i in 0..n {
            ytmp[i] = y[i] + h * (A51 * k[0][i] + A52 * k[1][i] + A53 * k[2][i] + A54 * k[3][i]);
        }
        self.sys.rhs(t + C5 * h, ytmp, &mut k[4]);
        for i in 0..n {
            ytmp[i] = y[i]
                + h * (A61 * k[0][i] + A62 * k[1][i] + A63 * k[2][i] + A64 * k[3][i] + A65 * k[4][i]);
        }
        self.sys.rhs(t + h, ytmp, &mut k[5]);
        for i in 0..n {
            self.ynew[i] = y[i]
                + h * (A71 * k[0][i] + A73 * k[2][i] + A74 * k[3][i] + A75 * k[4][i] + A76 * k[5][i]);
        }
        self.sys.rhs(t + h, &self.ynew, &mut k[6]);
    }

    fn dense(&self, h: f64) -> DenseStep {
        let n = self.y.len();
        let k = &self.k;
        let mut c = [vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]];
        for i in 0..n {
            let ydiff = self.ynew[i] - self.y[i];
            let bspl = h * k[0][i] - ydiff;
            c[0][i] = self.y[i];
            c[1][i] = ydiff;
            c[2][i] = bspl;
            c[3][i] = ydiff - h * k[6][i] - bspl;
            c[4][i] = h
                * (D1 * k[0][i] + D3 * k[2][i] + D4 * k[3][i] + D5 * k[4][i] + D6 * k[5][i]
                    + D7 * k[6][i]);
        }
        DenseStep { t0: self.t, h, coeffs: c }
    }

    /// Integrates to `t_end`, calling `observe` with each accepted step.
    pub fn advance_to<F: FnMut(&DenseStep)>(&mut self, t_end: f64, mut observe: F) -> Result<()> {
        while self.t < t_end {
            let d = self.step(t_end)?;
            observe(&d);
        }
        Ok(())
    }
}

/// Output times of [`integrate`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleTimes {
    /// Every accepted step.
    Steps,
    Uniform(f64),
    Explicit(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<ClassicalState>,
    /// Largest `|‖J(t)‖² − ‖J(0)‖²|` over accepted steps.
    pub spin_norm_drift: f64,
    /// Largest `|h(t) − h(0)|` over accepted steps, for `κ = 0` runs.
    pub energy_drift: Option<f64>,
    pub steps: usize,
}

impl Trajectory {
    pub fn write_csv<W: std::io::Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "t,q,p,Jx,Jy,Jz")?;
        for (t, s) in self.times.iter().zip(&self.states) {
            writeln!(out, "{t},{},{},{},{},{}", s.q, s.p, s.jx, s.jy, s.jz)?;
        }
        Ok(())
    }
}

pub fn integrate(
    state0: &ClassicalState,
    params: &ModelParams,
    t_final: f64,
    tol: Tolerances,
    samples: &SampleTimes,
) -> Result<Trajectory> {
    if !(t_final > 0.0) {
        return Err(Error::InvalidArgument(format!("t_final must be positive, got {t_final}")));
    }
    let mut requested: Vec<f64> = match samples {
        SampleTimes::Steps => Vec::new(),
        SampleTimes::Uniform(dt) => {
            if !(*dt > 0.0) {
                return Err(Error::InvalidArgument(format!("sample step must be positive, got {dt}")));
            }
            let n = (t_final / dt + 1e-9).floor() as usize;
            (1..=n).map(|i| i as f64 * dt).collect()
        }
        SampleTimes::Explicit(ts) => {
            let mut ts: Vec<f64> = ts.iter().copied().filter(|&t| t > 0.0 && t <= t_final).collect();
            ts.sort_by(f64::total_cmp);
            ts.dedup();
            ts
        }
    };
    requested.reverse();

    let sys = MeanFieldSystem::new(params);
    let y0 = state0.to_array();
    let mut solver = Dopri5::new(&sys, 0.0, &y0, tol);
    let norm0 = state0.spin_norm_sq();
    let conservative = params.kappa == 0.0;
    let h0 = classical_hamiltonian(state0, params);
    let mut traj = Trajectory {
        times: vec![0.0],
        states: vec![*state0],
        spin_norm_drift: 0.0,
        energy_drift: conservative.then_some(0.0),
        steps: 0,
    };
    let mut buf = [0.0; 5];
    while solver.t() < t_final {
        let d = solver.step(t_final)?;
        let s = ClassicalState::from_slice(solver.y());
        traj.spin_norm_drift = traj.spin_norm_drift.max((s.spin_norm_sq() - norm0).abs());
        if let Some(e) = traj.energy_drift.as_mut() {
            *e = e.max((classical_hamiltonian(&s, params) - h0).abs());
        }
        match samples {
            SampleTimes::Steps => {
                traj.times.push(solver.t());
                traj.states.push(s);
            }
            _ => {
                while let Some(&t) = requested.last() {
                    if t > d.t1() {
                        break;
                    }
                    if t >= d.t1() {
                        traj.states.push(s);
                    } else {
                        d.eval(t, &mut buf);
                        traj.states.push(ClassicalState::from_slice(&buf));
                    }
                    traj.times.push(t);
                    requested.pop();
                }
            }
        }
    }
    traj.steps = solver.accepted;
    Ok(traj)
}
