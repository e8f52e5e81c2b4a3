use dicke_core::classical::{
    classical_hamiltonian, critical_coupling_closed, critical_coupling_open, flow, integrate,
    ClassicalState, SampleTimes, Tolerances,
};
use dicke_core::{ModelParams, Spin};
use proptest::prelude::*;

fn params() -> impl Strategy<Value = ModelParams> {
    (0.0..3.0f64, 0.0..3.0f64, 0.0..2.0f64, 0.2..3.0f64, 0.2..3.0f64).prop_map(|(gm, gp, k, w, w0)| {
        ModelParams::new(w, w0, gm, gp, k, Spin::from_twice(2).unwrap(), 1).unwrap()
    })
}

fn state() -> impl Strategy<Value = ClassicalState> {
    (-2.0..2.0f64, -2.0..2.0f64, 0.0..std::f64::consts::PI, 0.0..std::f64::consts::TAU)
        .prop_map(|(q, p, th, ph)| ClassicalState::new(q, p, th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn spin_norm_is_stationary(s in state(), p in params()) {
        let d = flow(&s, &p);
        let dot = s.jx * d.jx + s.jy * d.jy + s.jz * d.jz;
        prop_assert!(dot.abs() < 1e-14 * (1.0 + d.to_array().iter().map(|v| v.abs()).fold(0.0, f64::max)));
    }

    #[test]
    fn poles_are_fixed(p in params()) {
        for s in [ClassicalState::SOUTH_POLE, ClassicalState::NORTH_POLE] {
            prop_assert_eq!(flow(&s, &p).to_array(), [0.0; 5]);
        }
    }

    #[test]
    fn energy_change_is_pure_dissipation(s in state(), p in params()) {
        // dh/dt = ∇h · flow, and only the κ terms contribute
        let eps = 1e-6;
        let y = s.to_array();
        let d = flow(&s, &p).to_array();
        let shifted = |t: f64| {
            let mut z = y;
            for i in 0..5 { z[i] += t * d[i]; }
            classical_hamiltonian(&ClassicalState::from_slice(&z), &p)
        };
        let dh = (shifted(eps) - shifted(-eps)) / (2.0 * eps);
        let gd = p.gamma_minus - p.gamma_plus;
        let gs = p.gamma_minus + p.gamma_plus;
        let dq = p.omega * s.q + gs * s.jx;
        let dp = p.omega * s.p - gd * s.jy;
        let expected = -p.kappa * (s.q * dq + s.p * dp);
        prop_assert!((dh - expected).abs() < 1e-6 * (1.0 + expected.abs()));
    }

    #[test]
    fn closed_coupling_scales_as_square_root(d in 0.0..5.0f64, w in 0.1..5.0f64, w0 in 0.1..5.0f64) {
        let a = critical_coupling_closed(d, w, w0).unwrap();
        let b = critical_coupling_closed(d, 4.0 * w, w0).unwrap();
        prop_assert!((b - 2.0 * a).abs() < 1e-14 * b);
    }

    #[test]
    fn lossless_open_coupling_is_closed_one(d in 0.0..5.0f64, w in 0.1..5.0f64, w0 in 0.1..5.0f64) {
        let a = critical_coupling_open(d, w, w0, 0.0).unwrap();
        let b = critical_coupling_closed(d, w, w0).unwrap();
        prop_assert!((a - b).abs() < 1e-12 * b);
    }
}

#[test]
fn invariants_over_long_runs() {
    let cases = [
        (ModelParams::unit(1.0, 2.0, Spin::from_twice(2).unwrap(), 1).unwrap(), ClassicalState::new(0.0, 0.0, 0.001, 0.0, -1.0)),
        (ModelParams::unit(2.0, 2.0, Spin::from_twice(2).unwrap(), 1).unwrap(), ClassicalState::new(0.3, -0.1, 0.6, 0.0, -0.8)),
    ];
    for (p, s0) in cases {
        let tr = integrate(&s0, &p, 1000.0, Tolerances::default(), &SampleTimes::Uniform(100.0)).unwrap();
        assert!(tr.spin_norm_drift <= 1e-8, "drift {}", tr.spin_norm_drift);
        let mut closed = p.clone();
        closed.kappa = 0.0;
        let tr = integrate(&s0, &closed, 1000.0, Tolerances::default(), &SampleTimes::Uniform(100.0)).unwrap();
        assert!(tr.energy_drift.unwrap() <= 1e-8, "energy drift {}", tr.energy_drift.unwrap());
    }
}

/// At γ₋ = γ₊ = 2 the trajectory from near the south pole spirals into the
/// superradiant fixed point `Jy = 0`, `Jz = −ω₀ω/(γ₊+γ₋)² · (1 + κ²/ω²) = −1/8`,
/// whose slowest mode decays at a rate of only ~5e-4.
#[test]
fn isotropic_superradiant_point_is_a_weak_focus() {
    let p = ModelParams::unit(2.0, 2.0, Spin::from_twice(2).unwrap(), 1).unwrap();
    let jz = -0.125f64;
    let jx = (1.0 - jz * jz).sqrt();
    let fixed = ClassicalState::new(-2.0 * jx, -2.0 * jx, jx, 0.0, jz);
    assert!(flow(&fixed, &p).to_array().iter().all(|v| v.abs() < 1e-15));

    let y = fixed.to_array();
    let mut jac = faer::Mat::<f64>::zeros(5, 5);
    for i in 0..5 {
        let mut a = y;
        let mut b = y;
        a[i] += 1e-6;
        b[i] -= 1e-6;
        let (fa, fb) = (flow(&ClassicalState::from_slice(&a), &p).to_array(), flow(&ClassicalState::from_slice(&b), &p).to_array());
        for r in 0..5 {
            jac[(r, i)] = (fa[r] - fb[r]) / 2e-6;
        }
    }
    let ev = dicke_core::spectra::real_dense_eigenvalues(&jac).unwrap();
    let slow = ev.iter().filter(|z| z.im.abs() > 1.0 && z.re > -0.1).collect::<Vec<_>>();
    assert_eq!(slow.len(), 2);
    assert!(slow.iter().all(|z| z.re < 0.0 && z.re > -1e-3 && (z.im.abs() - 8.0).abs() < 0.01), "{slow:?}");
}
