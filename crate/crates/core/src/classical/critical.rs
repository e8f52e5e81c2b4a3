//! Critical couplings of the superradiant transition.

use crate::error::{Error, Result};

/// `γ_c = √(ω ω₀) / (1 + δ)` for the closed model.
pub fn critical_coupling_closed(delta: f64, omega: f64, omega0: f64) -> Result<f64> {
    if !(delta >= 0.0) {
        return Err(Error::InvalidArgument(format!("delta must be non-negative, got {delta}")));
    }
    Ok((omega * omega0).sqrt() / (1.0 + delta))
}

/// Critical coupling with cavity loss `κ`,
///
/// ```text
/// γ_c^os = γ_c / |1 − δ| · √(1 + δ² − 2δ √(1 − (1−δ²)² κ² / (4 δ² ω²)))
/// ```
///
/// Rationalising the outer root gives
///
/// ```text
/// (γ_c^os)² = ω₀ (ω² + κ²) / (ω (1 + δ²) + √(4 δ² ω² − (1−δ²)² κ²))
/// ```
///
/// which is what is evaluated: it has no `0/0` at `δ = 1`, where it equals
/// `½ √(ω₀ (ω² + κ²) / ω)`. Requires `|1 − δ²| κ ≤ 2 δ ω`.
pub fn critical_coupling_open(delta: f64, omega: f64, omega0: f64, kappa: f64) -> Result<f64> {
    Ok(open_coupling_squared(delta, omega, omega0, kappa)?.sqrt())
}

fn open_coupling_squared(delta: f64, omega: f64, omega0: f64, kappa: f64) -> Result<f64> {
    if !(delta >= 0.0) {
        return Err(Error::InvalidArgument(format!("delta must be non-negative, got {delta}")));
    }
    let one_minus = 1.0 - delta * delta;
    let disc = 4.0 * delta * delta * omega * omega - one_minus * one_minus * kappa * kappa;
    if disc < 0.0 {
        return Err(Error::OutOfDomain(format!(
            "|1 - δ²| κ > 2 δ ω at δ = {delta}, ω = {omega}, κ = {kappa}"
        )));
    }
    let num = omega0 * (omega * omega + kappa * kappa);
    Ok(num / (omega * (1.0 + delta * delta) + disc.sqrt()))
}

/// The unrationalised expression, kept as an independent check.
#[cfg(test)]
pub(crate) fn critical_coupling_open_literal(delta: f64, omega: f64, omega0: f64, kappa: f64) -> f64 {
    let gc = (omega * omega0).sqrt() / (1.0 + delta);
    let u = (1.0 - delta * delta).powi(2) * kappa * kappa / (4.0 * delta * delta * omega * omega);
    gc / (1.0 - delta).abs() * (1.0 + delta * delta - 2.0 * delta * (1.0 - u).sqrt()).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_values() {
        assert_eq!(critical_coupling_closed(1.0, 1.0, 1.0).unwrap(), 0.5);
        assert_eq!(critical_coupling_closed(0.0, 1.0, 1.0).unwrap(), 1.0);
        let a = critical_coupling_closed(0.3, 0.7, 1.1).unwrap();
        let b = critical_coupling_closed(0.3, 2.8, 1.1).unwrap();
        assert!((b - 2.0 * a).abs() < 1e-15);
        assert!(critical_coupling_closed(-0.1, 1.0, 1.0).is_err());
    }

    #[test]
    fn isotropic_limit() {
        let g = critical_coupling_open(1.0, 1.0, 1.0, 1.0).unwrap();
        assert!((g - 0.5f64.sqrt()).abs() < 1e-15);
        // slope -√2/4 at δ = 1 puts δ = 0.99 about 3.5e-3 above the limit
        let near = critical_coupling_open(0.99, 1.0, 1.0, 1.0).unwrap();
        assert!((near - critical_coupling_open_literal(0.99, 1.0, 1.0, 1.0)).abs() < 1e-12);
        assert!((near - 0.5f64.sqrt() - 0.01 * 2f64.sqrt() / 4.0).abs() < 1e-4);
    }

    #[test]
    fn matches_literal_form_away_from_isotropy() {
        for &(d, w, w0, k) in &[(0.5, 1.0, 1.0, 0.3), (2.0, 1.3, 0.7, 1.0), (0.8, 1.0, 2.0, 0.5)] {
            let a = critical_coupling_open(d, w, w0, k).unwrap();
            let b = critical_coupling_open_literal(d, w, w0, k);
            assert!((a - b).abs() < 1e-12 * a, "δ = {d}: {a} vs {b}");
        }
    }

    #[test]
    fn out_of_domain() {
        assert!(matches!(critical_coupling_open(0.1, 1.0, 1.0, 1.0), Err(Error::OutOfDomain(_))));
        assert!(critical_coupling_open(0.0, 1.0, 1.0, 0.0).is_ok());
    }
}
