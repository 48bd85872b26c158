//! Forced contact Van der Pol oscillator.

use std::sync::Arc;

use jetsplit::composition::{run_trajectory, step_count, Step, StepFailure};
use jetsplit::lifting::{lifted_adaptive, lifted_rk4};
use jetsplit::{
    parse_scheme, reference_contact_flow, ContactStep, Error, Hamiltonian, JetPoint, RunRecord,
    Tolerance,
};
use rayon::prelude::*;

use crate::config::Resolved;
use crate::convergence::{convergence_study, mutual_convergence, ConvergenceTable, Sweep};
use crate::diagnostics::{contact_spot_checks, SpotCheck};
use crate::error::Result;
use crate::systems::{Vdp, VdpBase};

/// Tolerances of the lifted adaptive base integrator.
pub const ADAPTIVE_TOLERANCE: (f64, f64) = (1e-10, 1e-12);

/// Bound on `|x|` used to call an attractor bounded.
pub const BOUNDED_X: f64 = 10.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VdpMethod {
    LiftedRk4,
    LiftedAdaptive,
    /// `C B A [F] A B C` with the exact forcing flow innermost.
    StrangCbabc,
}

impl VdpMethod {
    pub const ALL: [VdpMethod; 3] = [
        VdpMethod::LiftedRk4,
        VdpMethod::LiftedAdaptive,
        VdpMethod::StrangCbabc,
    ];
    pub const PRESETS: &'static str = "lifted-rk4, lifted-adaptive, strang-cbabc";

    pub fn preset_name(self) -> &'static str {
        match self {
            VdpMethod::LiftedRk4 => "lifted-rk4",
            VdpMethod::LiftedAdaptive => "lifted-adaptive",
            VdpMethod::StrangCbabc => "strang-cbabc",
        }
    }

    pub fn from_preset(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.preset_name() == name)
    }

    pub fn declared_order(self) -> Option<u32> {
        match self {
            VdpMethod::LiftedRk4 => Some(4),
            VdpMethod::LiftedAdaptive => None,
            VdpMethod::StrangCbabc => Some(2),
        }
    }
}

/// Scheme specification of the Strang CBABC splitting.
pub fn cbabc_spec(v: &Vdp) -> String {
    let forcing = if v.amp == 0.0 {
        String::new()
    } else {
        format!(", forcing:amp={:?};omega={:?}", v.amp, v.omega)
    };
    format!("strang(vdpC, vdpB, vdpA:eps={:?}{forcing})", v.eps)
}

pub fn vdp_method_step(method: VdpMethod, v: Vdp) -> Result<Step> {
    Ok(match method {
        VdpMethod::LiftedRk4 => Arc::new(lifted_rk4(VdpBase(v))),
        VdpMethod::LiftedAdaptive => {
            let (rtol, atol) = ADAPTIVE_TOLERANCE;
            Arc::new(lifted_adaptive(VdpBase(v), Tolerance::new(rtol, atol)?))
        }
        VdpMethod::StrangCbabc => parse_scheme(&cbabc_spec(&v), 1)?.step,
    })
}

/// Resolves a preset name or a scheme specification.
pub fn vdp_step(scheme: &str, v: Vdp) -> Result<(Step, Option<u32>)> {
    match VdpMethod::from_preset(scheme) {
        Some(m) => Ok((vdp_method_step(m, v)?, m.declared_order())),
        None => {
            let parsed = parse_scheme(scheme, 1)?;
            Ok((parsed.step, parsed.declared_order))
        }
    }
}

/// Like [`run_trajectory`], but a step whose pullback reverses the
/// coorientation (the momentum passing through infinity within the step) is
/// taken anyway and its start time logged. `σ` is undefined, and recorded as
/// NaN, from the first such step on. Any other failure ends the record.
pub fn run_through_reversals<M, H>(
    step: &M,
    z0: &JetPoint,
    t0: f64,
    h: f64,
    span: f64,
    ham: &H,
) -> Result<(RunRecord, Vec<f64>)>
where
    M: ContactStep + ?Sized,
    H: Hamiltonian,
{
    let mut rec = run_trajectory(step, z0, t0, h, span, ham)?;
    let mut events = Vec::new();
    let steps = step_count(h, span);
    while let Some(StepFailure {
        time,
        error: Error::Orientation { .. },
    }) = rec.failure
    {
        events.push(time);
        let k = rec.len() - 1;
        let next = match step.apply(rec.last(), time, h) {
            Ok(z) if z.is_finite() => z,
            Ok(_) => {
                rec.failure = Some(StepFailure {
                    time,
                    error: Error::non_finite(step.label()),
                });
                break;
            }
            Err(error) => {
                rec.failure = Some(StepFailure { time, error });
                break;
            }
        };
        let tn = t0 + (k + 1) as f64 * h;
        let rest = if k + 1 < steps {
            Some(run_trajectory(
                step,
                &next,
                tn,
                h,
                (steps - k - 1) as f64 * h,
                ham,
            )?)
        } else {
            None
        };
        rec.times.push(tn);
        rec.h_values.push(ham.value(&next, tn));
        rec.states.push(next);
        rec.sigma_cum.push(f64::NAN);
        rec.failure = None;
        if let Some(rest) = rest {
            rec.times.extend(&rest.times[1..]);
            rec.h_values.extend(&rest.h_values[1..]);
            rec.states.extend(rest.states[1..].iter().cloned());
            rec.sigma_cum
                .extend(rest.sigma_cum[1..].iter().map(|_| f64::NAN));
            rec.failure = rest.failure;
        }
    }
    Ok((rec, events))
}

/// One scheme's run with its boundedness and contactness summary.
#[derive(Clone, Debug)]
pub struct VdpMethodRun {
    pub name: String,
    pub record: RunRecord,
    pub spot: SpotCheck,
    pub sup_abs_x: f64,
    /// Start times of coorientation-reversing steps.
    pub reversals: Vec<f64>,
}

impl VdpMethodRun {
    /// Reached `T` with `sup |x| < BOUNDED_X`.
    pub fn bounded(&self) -> bool {
        self.record.failure.is_none() && self.sup_abs_x < BOUNDED_X
    }
}

pub fn system(cfg: &Resolved) -> Vdp {
    Vdp {
        eps: cfg.eps,
        amp: cfg.amp,
        omega: cfg.omega,
    }
}

/// Runs each named scheme at `cfg.h` over `[t0, t0 + T]`, concurrently.
pub fn run_vdp(cfg: &Resolved, schemes: &[&str]) -> Result<Vec<VdpMethodRun>> {
    let v = system(cfg);
    schemes
        .par_iter()
        .map(|name| {
            let (step, _) = vdp_step(name, v)?;
            let (record, reversals) =
                run_through_reversals(&*step, &cfg.z0, cfg.t0, cfg.h, cfg.span, &v)?;
            let spot = contact_spot_checks(&*step, &record, 100, 1e-9)?;
            let sup_abs_x = record
                .states
                .iter()
                .fold(0.0f64, |m, z| m.max(z.x[0].abs()));
            Ok(VdpMethodRun {
                name: name.to_string(),
                record,
                spot,
                sup_abs_x,
                reversals,
            })
        })
        .collect()
}

/// Lifted RK4 and Strang CBABC against a tight adaptive solution of the
/// full contact system, and against each other.
#[derive(Clone, Debug)]
pub struct VdpConvergence {
    pub lifted_rk4: ConvergenceTable,
    pub strang: ConvergenceTable,
    pub mutual: ConvergenceTable,
}

pub fn vdp_convergence(cfg: &Resolved) -> Result<VdpConvergence> {
    let v = system(cfg);
    let sweep = Sweep {
        z0: cfg.z0.clone(),
        t0: cfg.t0,
        span: cfg.span,
        hs: cfg.h_sweep.clone(),
        norm: cfg.norm,
    };
    let reference = |times: &[f64], _h: f64| -> Result<Vec<JetPoint>> {
        Ok(reference_contact_flow(
            &v,
            &cfg.z0,
            cfg.t0,
            times,
            Tolerance::default(),
        )?)
    };
    let rk4 = vdp_method_step(VdpMethod::LiftedRk4, v)?;
    let strang = vdp_method_step(VdpMethod::StrangCbabc, v)?;
    Ok(VdpConvergence {
        lifted_rk4: convergence_study("lifted RK4", &*rk4, reference, &sweep)?,
        strang: convergence_study("Strang CBABC", &*strang, reference, &sweep)?,
        mutual: mutual_convergence("Strang CBABC vs lifted RK4", &*rk4, &*strang, &sweep)?,
    })
}
