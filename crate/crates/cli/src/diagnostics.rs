//! Contactness spot checks and dual-number Jacobian checks.

use jetsplit::{pullback_conformal_factor, ContactStep, JetPoint, RunRecord};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;

/// Pullback checks at every `every`-th state of a record.
#[derive(Clone, Debug, PartialEq)]
pub struct SpotCheck {
    pub checked: usize,
    pub tolerance: f64,
    pub worst_residual: f64,
    pub worst_time: Option<f64>,
    pub passed: bool,
    /// Times at which the pullback itself failed (e.g. a singular step).
    pub failures: Vec<f64>,
}

pub fn contact_spot_checks<M: ContactStep + ?Sized>(
    step: &M,
    rec: &RunRecord,
    every: usize,
    tol: f64,
) -> Result<SpotCheck> {
    let mut out = SpotCheck {
        checked: 0,
        tolerance: tol,
        worst_residual: 0.0,
        worst_time: None,
        passed: true,
        failures: Vec::new(),
    };
    if rec.len() < 2 {
        return Ok(out);
    }
    let h = rec.times[1] - rec.times[0];
    for k in (0..rec.len() - 1).step_by(every.max(1)) {
        match pullback_conformal_factor(step, &rec.states[k], rec.times[k], h) {
            Ok(rep) => {
                out.checked += 1;
                if out.worst_time.is_none() || rep.residual > out.worst_residual {
                    out.worst_residual = rep.residual;
                    out.worst_time = Some(rec.times[k]);
                }
            }
            Err(e) => {
                log::warn!(
                    "{}: pullback at t = {} failed: {e}",
                    step.label(),
                    rec.times[k]
                );
                out.failures.push(rec.times[k]);
            }
        }
    }
    out.passed = out.failures.is_empty() && out.worst_residual <= tol;
    Ok(out)
}

/// Jacobian of a step from one dual-number pass, row `i` = output `i`.
pub fn dual_jacobian<M: ContactStep + ?Sized>(
    step: &M,
    z: &JetPoint,
    t: f64,
    h: f64,
) -> Result<Vec<Vec<f64>>> {
    let m = 2 * z.dim() + 1;
    let out = step.apply_dual(&z.seed(), t, h)?.to_vec();
    Ok(out
        .iter()
        .map(|v| (0..m).map(|j| v.d(j)).collect())
        .collect())
}

/// Central finite-difference Jacobian with steps `δⱼ = 10⁻⁶·max(1, |zⱼ|)`.
pub fn fd_jacobian<M: ContactStep + ?Sized>(
    step: &M,
    z: &JetPoint,
    t: f64,
    h: f64,
) -> Result<Vec<Vec<f64>>> {
    let n = z.dim();
    let base = z.to_vec();
    let m = base.len();
    let mut jac = vec![vec![0.0; m]; m];
    for j in 0..m {
        let d = 1e-6 * base[j].abs().max(1.0);
        let mut plus = base.clone();
        let mut minus = base.clone();
        plus[j] += d;
        minus[j] -= d;
        let fp = step.apply(&JetPoint::from_slice(n, &plus)?, t, h)?.to_vec();
        let fm = step
            .apply(&JetPoint::from_slice(n, &minus)?, t, h)?
            .to_vec();
        for i in 0..m {
            jac[i][j] = (fp[i] - fm[i]) / (plus[j] - minus[j]);
        }
    }
    Ok(jac)
}

/// `‖J_dual − J_fd‖_max / ‖J_dual‖_max`.
pub fn jacobian_discrepancy<M: ContactStep + ?Sized>(
    step: &M,
    z: &JetPoint,
    t: f64,
    h: f64,
) -> Result<f64> {
    let a = dual_jacobian(step, z, t, h)?;
    let b = fd_jacobian(step, z, t, h)?;
    let scale = a.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    let diff = a
        .iter()
        .flatten()
        .zip(b.iter().flatten())
        .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
    Ok(if scale == 0.0 { diff } else { diff / scale })
}

/// `count` states of dimension 1 drawn uniformly from the box
/// `|x| ≤ rx, |u| ≤ ru, |p| ≤ rp`.
pub fn random_states(seed: u64, count: usize, rx: f64, ru: f64, rp: f64) -> Vec<JetPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let x = rng.random_range(-rx..=rx);
            let u = rng.random_range(-ru..=ru);
            let p = rng.random_range(-rp..=rp);
            JetPoint::scalar(x, u, p)
        })
        .collect()
}
