//! Convergence studies and log–log slope fits.

use jetsplit::{ContactStep, JetPoint};
use rayon::prelude::*;

use crate::error::{LabError, Result};

/// Errors below this are treated as round-off and left out of fits.
pub const ROUNDOFF_FLOOR: f64 = 1e-12;

/// Upper bound on the step times at which a run is compared with the
/// reference for the sup error. The endpoint is always one of them.
pub const SUP_SAMPLES: usize = 1000;

/// Indices `0, s, 2s, …, steps` with stride `s = ⌈steps / SUP_SAMPLES⌉`.
pub fn sample_indices(steps: usize) -> Vec<usize> {
    let stride = steps.div_ceil(SUP_SAMPLES).max(1);
    let mut out: Vec<usize> = (0..=steps).step_by(stride).collect();
    if out.last() != Some(&steps) {
        out.push(steps);
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, serde::Deserialize, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ErrorNorm {
    /// Euclidean `(x, u, p)` distance at the final time.
    #[default]
    Endpoint,
    /// Largest Euclidean distance over the sampled step times.
    Sup,
}

/// Acceptance band for a fitted slope.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SlopeExpectation {
    Within { target: f64, tol: f64 },
    AtLeast(f64),
}

impl SlopeExpectation {
    pub fn holds(&self, slope: f64) -> bool {
        match *self {
            SlopeExpectation::Within { target, tol } => (slope - target).abs() <= tol,
            SlopeExpectation::AtLeast(min) => slope >= min,
        }
    }
}

impl std::fmt::Display for SlopeExpectation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SlopeExpectation::Within { target, tol } => write!(f, "{target} ± {tol}"),
            SlopeExpectation::AtLeast(min) => write!(f, "≥ {min}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceRow {
    /// Step actually used, `T / round(T / h)`.
    pub h: f64,
    pub steps: usize,
    pub endpoint_error: f64,
    pub sup_error: f64,
}

impl ConvergenceRow {
    pub fn error(&self, norm: ErrorNorm) -> f64 {
        match norm {
            ErrorNorm::Endpoint => self.endpoint_error,
            ErrorNorm::Sup => self.sup_error,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceTable {
    pub label: String,
    pub norm: ErrorNorm,
    pub rows: Vec<ConvergenceRow>,
    pub fitted_slope: f64,
    pub fit_r2: f64,
}

/// `count` values `10^e` with `e` evenly spaced from `start` to `end`.
pub fn log_sweep(start: f64, end: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![10f64.powf(start)],
        _ => (0..count)
            .map(|k| 10f64.powf(start + (end - start) * k as f64 / (count - 1) as f64))
            .collect(),
    }
}

/// The DHO main sweep `h ∈ 10^linspace(−1, −2.5, 15)`.
pub fn dho_h_sweep() -> Vec<f64> {
    log_sweep(-1.0, -2.5, 15)
}

/// Least-squares slope and `R²` of `log err` against `log x`, skipping
/// non-finite errors and errors below [`ROUNDOFF_FLOOR`].
pub fn fit_loglog(xs: &[f64], errs: &[f64]) -> Result<(f64, f64)> {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(errs)
        .filter(|(x, e)| e.is_finite() && **e >= ROUNDOFF_FLOOR && **x > 0.0)
        .map(|(x, e)| (x.ln(), e.ln()))
        .collect();
    if pts.len() < 2 {
        return Err(LabError::DegenerateFit(format!(
            "{} of {} rows above the round-off floor {ROUNDOFF_FLOOR:e}",
            pts.len(),
            xs.len()
        )));
    }
    let n = pts.len() as f64;
    let (mx, my) = pts
        .iter()
        .fold((0.0, 0.0), |(a, b), (x, y)| (a + x / n, b + y / n));
    let (sxx, sxy, syy) = pts.iter().fold((0.0, 0.0, 0.0), |(a, b, c), (x, y)| {
        (
            a + (x - mx).powi(2),
            b + (x - mx) * (y - my),
            c + (y - my).powi(2),
        )
    });
    if sxx == 0.0 {
        return Err(LabError::DegenerateFit("all step sizes are equal".into()));
    }
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 {
        1.0
    } else {
        sxy * sxy / (sxx * syy)
    };
    Ok((slope, r2))
}

/// Initial state, horizon and step sizes of a convergence study.
#[derive(Clone, Debug, PartialEq)]
pub struct Sweep {
    pub z0: JetPoint,
    pub t0: f64,
    pub span: f64,
    pub hs: Vec<f64>,
    pub norm: ErrorNorm,
}

/// Runs `step` with each step size and measures the error against
/// `reference`, which maps sample times (a subset of the step grid, see
/// [`sample_indices`]) and the step size to exact states.
///
/// Each `h` is adjusted to `T / round(T / h)` so every run ends exactly at
/// `t0 + T`. A run that fails gets an infinite error and is left out of
/// the fit.
pub fn convergence_study<R>(
    label: &str,
    step: &dyn ContactStep,
    reference: R,
    sweep: &Sweep,
) -> Result<ConvergenceTable>
where
    R: Fn(&[f64], f64) -> Result<Vec<JetPoint>> + Sync,
{
    let Sweep {
        z0,
        t0,
        span,
        hs,
        norm,
    } = sweep;
    let (t0, span, norm) = (*t0, *span, *norm);
    if hs.len() < 4 {
        return Err(LabError::config(format!(
            "a convergence study needs at least 4 step sizes, got {}",
            hs.len()
        )));
    }
    if span.is_nan() || span <= 0.0 || hs.iter().any(|h| h.is_nan() || *h <= 0.0 || *h > span) {
        return Err(LabError::config("step sizes must lie in (0, T]"));
    }
    let rows = hs
        .par_iter()
        .map(|&h| {
            let steps = (span / h).round().max(1.0) as usize;
            let h = span / steps as f64;
            let samples = sample_indices(steps);
            let times: Vec<f64> = samples.iter().map(|&k| t0 + k as f64 * h).collect();
            let exact = reference(&times, h)?;
            let mut z = z0.clone();
            let mut sup = z.distance(&exact[0]);
            let mut next_sample = 1;
            for k in 0..steps {
                let t = t0 + k as f64 * h;
                match step.apply(&z, t, h) {
                    Ok(next) if next.is_finite() => z = next,
                    outcome => {
                        log::warn!("{label}: h = {h:e} failed at t = {t}: {outcome:?}");
                        return Ok(ConvergenceRow {
                            h,
                            steps,
                            endpoint_error: f64::INFINITY,
                            sup_error: f64::INFINITY,
                        });
                    }
                }
                if samples[next_sample] == k + 1 {
                    sup = sup.max(z.distance(&exact[next_sample]));
                    next_sample += 1;
                }
            }
            Ok(ConvergenceRow {
                h,
                steps,
                endpoint_error: z.distance(&exact[samples.len() - 1]),
                sup_error: sup,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let (hv, ev): (Vec<f64>, Vec<f64>) = rows.iter().map(|r| (r.h, r.error(norm))).unzip();
    let (fitted_slope, fit_r2) = fit_loglog(&hv, &ev)?;
    Ok(ConvergenceTable {
        label: label.to_string(),
        norm,
        rows,
        fitted_slope,
        fit_r2,
    })
}

/// Error of `b` against `a` over the same grid, for mutual convergence of
/// two schemes as `h → 0`.
pub fn mutual_convergence(
    label: &str,
    a: &dyn ContactStep,
    b: &dyn ContactStep,
    sweep: &Sweep,
) -> Result<ConvergenceTable> {
    let z0 = &sweep.z0;
    let reference = |times: &[f64], h: f64| -> Result<Vec<JetPoint>> {
        let mut out = Vec::with_capacity(times.len());
        let mut z = z0.clone();
        let mut t = times[0];
        out.push(z.clone());
        for &target in &times[1..] {
            let n = ((target - t) / h).round() as usize;
            for j in 0..n {
                z = a.apply(&z, t + j as f64 * h, h)?;
            }
            t = target;
            out.push(z.clone());
        }
        Ok(out)
    };
    convergence_study(label, b, reference, sweep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use jetsplit::subflows::ReebScaling;

    #[test]
    fn dho_sweep_spans_one_and_a_half_decades() {
        let hs = dho_h_sweep();
        assert_eq!(hs.len(), 15);
        assert!((hs[0] - 0.1).abs() < 1e-15);
        assert!((hs[14] - 10f64.powf(-2.5)).abs() < 1e-15);
        assert!(hs.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn expectations() {
        let band = SlopeExpectation::Within {
            target: 2.0,
            tol: 0.2,
        };
        assert!(band.holds(1.85) && band.holds(2.15) && !band.holds(2.21));
        assert!(SlopeExpectation::AtLeast(1.7).holds(4.1));
        assert_eq!(band.to_string(), "2 ± 0.2");
    }

    #[test]
    fn samples_cover_both_ends() {
        assert_eq!(sample_indices(5), vec![0, 1, 2, 3, 4, 5]);
        let big = sample_indices(2501);
        assert_eq!((big[0], big[1], *big.last().unwrap()), (0, 3, 2501));
        assert!(big.len() <= SUP_SAMPLES + 2);
    }

    #[test]
    fn fit_recovers_power_laws() {
        let xs = log_sweep(-1.0, -3.0, 6);
        let errs: Vec<f64> = xs.iter().map(|x| 3.0 * x.powi(2)).collect();
        let (s, r2) = fit_loglog(&xs, &errs).unwrap();
        assert!((s - 2.0).abs() < 1e-12 && (r2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn exact_scheme_gives_degenerate_fit() {
        let step = ReebScaling { gamma: 0.3 };
        let z0 = JetPoint::scalar(0.5, 1.0, -0.2);
        let exact = |times: &[f64], _h: f64| -> Result<Vec<JetPoint>> {
            Ok(times
                .iter()
                .map(|t| JetPoint::scalar(0.5, (-0.3 * t).exp(), -0.2 * (-0.3 * t).exp()))
                .collect())
        };
        let sweep = Sweep {
            z0,
            t0: 0.0,
            span: 2.0,
            hs: log_sweep(-1.0, -2.0, 5),
            norm: ErrorNorm::Endpoint,
        };
        let out = convergence_study("reeb", &step, exact, &sweep);
        assert!(matches!(out, Err(LabError::DegenerateFit(_))), "{out:?}");
    }
}
