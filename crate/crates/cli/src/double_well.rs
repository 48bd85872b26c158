//! Dissipative double well `H = ½p² + (x² − 1)² + σp²u`.

use jetsplit::composition::{run_trajectory, Step};
use jetsplit::{parse_scheme, reference_contact_flow, JetPoint, RunRecord, Tolerance};
use rayon::prelude::*;

use crate::config::Resolved;
use crate::convergence::{convergence_study, ConvergenceTable, Sweep};
use crate::diagnostics::{contact_spot_checks, SpotCheck};
use crate::error::Result;
use crate::systems::double_well_hamiltonian;

/// Substep multiplier of the symmetric and Yoshida gadgets.
pub const GADGET_M: usize = 4;

/// Störmer–Verlet step of `½p² + (x² − 1)²`.
const STORMER_VERLET: &str = "strang(kick:V=(x^2-1)^2, drift:T=0.5*p^2)";

/// Initial states `(x, p, u)` of the attractor runs.
pub const ATTRACTOR_SEEDS: [(f64, f64, f64); 4] = [
    (0.5, 1.0, 0.0),
    (-0.5, -1.0, 0.0),
    (1.2, 0.3, 0.0),
    (-1.2, -0.3, 0.0),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DwSplitting {
    /// Exact flows of `½(1 + 2σu)p²` and the quartic potential.
    Tv,
    /// Exact `σp²u` flow around a Störmer–Verlet core.
    Csc,
    GadgetBasic,
    GadgetSymmetric,
    GadgetYoshida,
}

impl DwSplitting {
    pub const ALL: [DwSplitting; 5] = [
        DwSplitting::Tv,
        DwSplitting::Csc,
        DwSplitting::GadgetBasic,
        DwSplitting::GadgetSymmetric,
        DwSplitting::GadgetYoshida,
    ];
    pub const PRESETS: &'static str = "tv, csc, gadget-c, gadget-d, gadget-e";

    pub fn preset_name(self) -> &'static str {
        match self {
            DwSplitting::Tv => "tv",
            DwSplitting::Csc => "csc",
            DwSplitting::GadgetBasic => "gadget-c",
            DwSplitting::GadgetSymmetric => "gadget-d",
            DwSplitting::GadgetYoshida => "gadget-e",
        }
    }

    pub fn from_preset(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|s| s.preset_name() == name)
    }

    /// Global order the splitting should show in a convergence study.
    pub fn expected_slope(self) -> f64 {
        match self {
            DwSplitting::Tv | DwSplitting::Csc => 2.0,
            DwSplitting::GadgetBasic => 0.5,
            DwSplitting::GadgetSymmetric | DwSplitting::GadgetYoshida => 1.0,
        }
    }

    pub fn spec(self, sigma: f64) -> String {
        let gadget = |name: &str, m: &str| {
            format!(
                "strang({name}[{m}scale={sigma:?}](quadu:c=-0.5, drift:T=p^2), {STORMER_VERLET})"
            )
        };
        let m = format!("m={GADGET_M}; ");
        match self {
            DwSplitting::Tv if sigma == 0.0 => "strang(drift:T=0.5*p^2, kick:V=(x^2-1)^2)".into(),
            DwSplitting::Tv => format!("strang(bernoulliT:sigma={sigma:?}, kick:V=(x^2-1)^2)"),
            DwSplitting::Csc => format!("strang(bernoulliB:sigma={sigma:?}, {STORMER_VERLET})"),
            DwSplitting::GadgetBasic => gadget("gadget", ""),
            DwSplitting::GadgetSymmetric => gadget("gadget_sym", &m),
            DwSplitting::GadgetYoshida => gadget("gadget_yoshida", &m),
        }
    }
}

/// Resolves a preset name or a scheme specification.
pub fn double_well_step(scheme: &str, sigma: f64) -> Result<Step> {
    let spec = match DwSplitting::from_preset(scheme) {
        Some(s) => s.spec(sigma),
        None => scheme.to_string(),
    };
    Ok(parse_scheme(&spec, 1)?.step)
}

#[derive(Clone, Debug)]
pub struct DwRun {
    pub name: String,
    pub record: RunRecord,
    pub spot: SpotCheck,
}

/// Runs each named scheme at `cfg.h`, concurrently.
pub fn run_double_well(cfg: &Resolved, schemes: &[&str]) -> Result<Vec<DwRun>> {
    let ham = double_well_hamiltonian(cfg.sigma);
    schemes
        .par_iter()
        .map(|name| {
            let step = double_well_step(name, cfg.sigma)?;
            let record = run_trajectory(&*step, &cfg.z0, cfg.t0, cfg.h, cfg.span, &ham)?;
            let spot = contact_spot_checks(&*step, &record, 100, 1e-10)?;
            Ok(DwRun {
                name: name.to_string(),
                record,
                spot,
            })
        })
        .collect()
}

/// Convergence of one scheme against the adaptive reference solution.
pub fn double_well_convergence(cfg: &Resolved, scheme: &str) -> Result<ConvergenceTable> {
    let step = double_well_step(scheme, cfg.sigma)?;
    let ham = double_well_hamiltonian(cfg.sigma);
    let reference = |times: &[f64], _h: f64| -> Result<Vec<JetPoint>> {
        Ok(reference_contact_flow(
            &ham,
            &cfg.z0,
            cfg.t0,
            times,
            Tolerance::default(),
        )?)
    };
    let sweep = Sweep {
        z0: cfg.z0.clone(),
        t0: cfg.t0,
        span: cfg.span,
        hs: cfg.h_sweep.clone(),
        norm: cfg.norm,
    };
    convergence_study(
        &format!("{scheme} σ={}", cfg.sigma),
        &*step,
        reference,
        &sweep,
    )
}

/// Runs from each of [`ATTRACTOR_SEEDS`] over `[t0, t0 + T]`.
pub fn attractor_runs(cfg: &Resolved, scheme: &str) -> Result<Vec<RunRecord>> {
    let step = double_well_step(scheme, cfg.sigma)?;
    let ham = double_well_hamiltonian(cfg.sigma);
    ATTRACTOR_SEEDS
        .par_iter()
        .map(|&(x, p, u)| {
            Ok(run_trajectory(
                &*step,
                &JetPoint::scalar(x, u, p),
                cfg.t0,
                cfg.h,
                cfg.span,
                &ham,
            )?)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{ExperimentConfig, Scenario};

    #[test]
    fn every_preset_parses() {
        for s in DwSplitting::ALL {
            for sigma in [0.0, 0.5, 2.0] {
                double_well_step(s.preset_name(), sigma).unwrap();
            }
        }
    }

    #[test]
    fn conservative_limit_keeps_energy() {
        let mut cfg = ExperimentConfig::new(Scenario::DoubleWell);
        cfg.params.sigma = Some(0.0);
        cfg.span = Some(10.0);
        let runs = run_double_well(&cfg.resolve().unwrap(), &["tv", "csc", "gadget-d"]).unwrap();
        for r in runs {
            let h0 = r.record.h_values[0];
            let drift = r
                .record
                .h_values
                .iter()
                .fold(0.0f64, |m, h| m.max((h - h0).abs()));
            assert!(drift < 1e-3, "{}: {drift}", r.name);
            assert!(r.spot.passed);
        }
    }
}
