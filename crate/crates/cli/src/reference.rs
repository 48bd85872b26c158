//! Closed-form reference for the damped harmonic oscillator.

use jetsplit::JetPoint;

use crate::error::{LabError, Result};

/// Exact DHO state at time `t` from `z0` at time 0, underdamped regime.
///
/// `(x, p)` solve `ẋ = p`, `ṗ = −x − γp`; `u` follows from
/// `H(t) = H₀ e^{−γt}`.
pub fn dho_exact_reference(gamma: f64, z0: &JetPoint, t: f64) -> Result<JetPoint> {
    if !(gamma > 0.0 && gamma < 2.0) {
        return Err(LabError::Unsupported(format!(
            "closed-form DHO reference needs 0 < γ < 2, got {gamma}; use the adaptive reference solver instead"
        )));
    }
    if z0.dim() != 1 {
        return Err(jetsplit::Error::Dimension {
            expected: 1,
            got: z0.dim(),
        }
        .into());
    }
    let (x0, u0, p0) = (z0.x[0], z0.u, z0.p[0]);
    let lambda = 0.5 * gamma;
    let w = (1.0 - lambda * lambda).sqrt();
    let (s, c) = (w * t).sin_cos();
    let decay = (-lambda * t).exp();
    let b = (p0 + lambda * x0) / w;
    let x = decay * (x0 * c + b * s);
    let p = decay * ((b * w - lambda * x0) * c - (x0 * w + lambda * b) * s);
    let h0 = 0.5 * (p0 * p0 + x0 * x0) + gamma * u0;
    let u = (h0 * (-gamma * t).exp() - 0.5 * (p * p + x * x)) / gamma;
    Ok(JetPoint::scalar(x, u, p))
}

/// [`dho_exact_reference`] at each time in `times`.
pub fn dho_exact_trajectory(gamma: f64, z0: &JetPoint, times: &[f64]) -> Result<Vec<JetPoint>> {
    times
        .iter()
        .map(|&t| dho_exact_reference(gamma, z0, t))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::dho_hamiltonian;
    use jetsplit::{reference_contact_flow, Hamiltonian, Tolerance};

    #[test]
    fn starts_at_the_initial_state() {
        let z0 = JetPoint::scalar(1.0, 0.2, -0.4);
        assert!(dho_exact_reference(0.3, &z0, 0.0).unwrap().distance(&z0) < 1e-15);
    }

    #[test]
    fn energy_decays_exponentially() {
        let z0 = JetPoint::scalar(1.0, 0.0, 0.0);
        let h = dho_hamiltonian(0.3);
        let h0 = h.value(&z0, 0.0);
        for t in [1.0, 5.0, 20.0] {
            let z = dho_exact_reference(0.3, &z0, t).unwrap();
            assert!((h.value(&z, t) - h0 * (-0.3 * t).exp()).abs() <= 1e-12);
        }
    }

    #[test]
    fn agrees_with_the_adaptive_solver() {
        let z0 = JetPoint::scalar(1.0, 0.0, 0.0);
        let times: Vec<f64> = (1..=40).map(|k| 0.5 * k as f64).collect();
        let reference = reference_contact_flow(
            &dho_hamiltonian(0.3),
            &z0,
            0.0,
            &times,
            Tolerance::default(),
        )
        .unwrap();
        for (t, z) in times.iter().zip(&reference) {
            let exact = dho_exact_reference(0.3, &z0, *t).unwrap();
            assert!(exact.distance(z) <= 1e-9, "t = {t}: {}", exact.distance(z));
        }
    }

    #[test]
    fn rejects_overdamped_regime() {
        let z0 = JetPoint::scalar(1.0, 0.0, 0.0);
        assert!(matches!(
            dho_exact_reference(2.5, &z0, 1.0),
            Err(LabError::Unsupported(_))
        ));
        assert!(matches!(
            dho_exact_reference(0.0, &z0, 1.0),
            Err(LabError::Unsupported(_))
        ));
    }
}
