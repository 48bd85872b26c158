//! Damped harmonic oscillator `H = ½p² + ½x² + γu`.

use jetsplit::composition::{run_trajectory, Step};
use jetsplit::{parse_scheme, JetPoint, RunRecord};

use crate::config::Resolved;
use crate::convergence::{convergence_study, ConvergenceTable, Sweep};
use crate::diagnostics::{contact_spot_checks, SpotCheck};
use crate::error::{LabError, Result};
use crate::output::ReferenceColumns;
use crate::reference::dho_exact_trajectory;
use crate::systems::dho_hamiltonian;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DhoSplitting {
    /// `½p²` and `½x² + γu`.
    One,
    /// `½p² + ½x²` and `γu`.
    Two,
    /// `½p²`, `½x²` and `γu`.
    Three,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DhoMethod {
    LieTrotter(DhoSplitting),
    Strang(DhoSplitting),
    Yoshida4(DhoSplitting),
    /// Classical RK4 on the full `(x, u, p)` system.
    FullRk4,
    /// Yoshida-4 over Strang of the exact oscillator and lifted RK4 for `γu`.
    LiftedRk4,
}

impl DhoSplitting {
    pub const ALL: [DhoSplitting; 3] = [DhoSplitting::One, DhoSplitting::Two, DhoSplitting::Three];

    fn parts(self, gamma: f64) -> String {
        match self {
            DhoSplitting::One => format!("drift:T=0.5*p^2, affineu:a=0.5*x^2;b={gamma:?}"),
            DhoSplitting::Two => format!("harmonic, reeb:gamma={gamma:?}"),
            DhoSplitting::Three => format!("drift:T=0.5*p^2, kick:V=0.5*x^2, reeb:gamma={gamma:?}"),
        }
    }

    fn digit(self) -> char {
        match self {
            DhoSplitting::One => '1',
            DhoSplitting::Two => '2',
            DhoSplitting::Three => '3',
        }
    }
}

impl DhoMethod {
    /// Preset names accepted by `--scheme`.
    pub const PRESETS: &'static str = "lie1..3, strang1..3, yoshida1..3, rk4, lifted-rk4";

    pub fn preset_name(self) -> String {
        match self {
            DhoMethod::LieTrotter(s) => format!("lie{}", s.digit()),
            DhoMethod::Strang(s) => format!("strang{}", s.digit()),
            DhoMethod::Yoshida4(s) => format!("yoshida{}", s.digit()),
            DhoMethod::FullRk4 => "rk4".into(),
            DhoMethod::LiftedRk4 => "lifted-rk4".into(),
        }
    }

    pub fn from_preset(name: &str) -> Option<Self> {
        let split = |d: &str| match d {
            "1" => Some(DhoSplitting::One),
            "2" => Some(DhoSplitting::Two),
            "3" => Some(DhoSplitting::Three),
            _ => None,
        };
        match name {
            "rk4" => Some(DhoMethod::FullRk4),
            "lifted-rk4" => Some(DhoMethod::LiftedRk4),
            _ => {
                if let Some(d) = name.strip_prefix("lie") {
                    split(d).map(DhoMethod::LieTrotter)
                } else if let Some(d) = name.strip_prefix("strang") {
                    split(d).map(DhoMethod::Strang)
                } else if let Some(d) = name.strip_prefix("yoshida") {
                    split(d).map(DhoMethod::Yoshida4)
                } else {
                    None
                }
            }
        }
    }

    /// Scheme specification in the catalog grammar.
    pub fn spec(self, gamma: f64) -> String {
        match self {
            DhoMethod::LieTrotter(s) => format!("lie({})", s.parts(gamma)),
            DhoMethod::Strang(s) => format!("strang({})", s.parts(gamma)),
            DhoMethod::Yoshida4(s) => format!("yoshida4(strang({}))", s.parts(gamma)),
            DhoMethod::FullRk4 => format!("rk4:H=0.5*p^2 + 0.5*x^2 + {gamma:?}*u"),
            DhoMethod::LiftedRk4 => format!("yoshida4(strang(harmonic, lifted:H={gamma:?}*u))"),
        }
    }

    pub fn declared_order(self) -> u32 {
        match self {
            DhoMethod::LieTrotter(_) => 1,
            DhoMethod::Strang(_) => 2,
            DhoMethod::Yoshida4(_) | DhoMethod::FullRk4 | DhoMethod::LiftedRk4 => 4,
        }
    }
}

/// Resolves a preset name or a scheme specification to a step and its
/// declared order, if any.
pub fn dho_step(scheme: &str, gamma: f64) -> Result<(Step, Option<u32>)> {
    let (spec, order) = match DhoMethod::from_preset(scheme) {
        Some(m) => (m.spec(gamma), Some(m.declared_order())),
        None => (scheme.to_string(), None),
    };
    let parsed = parse_scheme(&spec, 1)?;
    Ok((parsed.step, order.or(parsed.declared_order)))
}

/// `H/(H₀e^{−γt}) − 1` and `σ_cum + γt` along a record.
pub fn dho_diagnostics(rec: &RunRecord, gamma: f64) -> ReferenceColumns {
    let (t0, h0) = (rec.times[0], rec.h_values[0]);
    let h_rel_err = rec
        .times
        .iter()
        .zip(&rec.h_values)
        .map(|(t, h)| h / (h0 * (-gamma * (t - t0)).exp()) - 1.0)
        .collect();
    let lambda_err = rec
        .times
        .iter()
        .zip(&rec.sigma_cum)
        .map(|(t, s)| s + gamma * (t - t0))
        .collect();
    ReferenceColumns {
        h_rel_err,
        lambda_err,
    }
}

#[derive(Clone, Debug)]
pub struct DhoRun {
    pub record: RunRecord,
    pub reference: ReferenceColumns,
    pub spot: SpotCheck,
    pub table: Option<ConvergenceTable>,
}

/// Runs one scheme at `cfg.h` and, if `convergence` is set, over
/// `cfg.h_sweep` against the closed-form solution.
pub fn run_dho(cfg: &Resolved, scheme: &str, convergence: bool) -> Result<DhoRun> {
    let (step, _) = dho_step(scheme, cfg.gamma)?;
    let ham = dho_hamiltonian(cfg.gamma);
    let record = run_trajectory(&*step, &cfg.z0, cfg.t0, cfg.h, cfg.span, &ham)?;
    if record.h_values[0] == 0.0 {
        return Err(LabError::config("the DHO diagnostics need H(z0) ≠ 0"));
    }
    let reference = dho_diagnostics(&record, cfg.gamma);
    let spot = contact_spot_checks(&*step, &record, 100, 1e-10)?;
    let table = if convergence {
        let (gamma, z0, t0) = (cfg.gamma, cfg.z0.clone(), cfg.t0);
        let exact = move |times: &[f64], _h: f64| -> Result<Vec<JetPoint>> {
            let shifted: Vec<f64> = times.iter().map(|t| t - t0).collect();
            dho_exact_trajectory(gamma, &z0, &shifted)
        };
        let sweep = Sweep {
            z0: cfg.z0.clone(),
            t0: cfg.t0,
            span: cfg.span,
            hs: cfg.h_sweep.clone(),
            norm: cfg.norm,
        };
        Some(convergence_study(&step.label(), &*step, exact, &sweep)?)
    } else {
        None
    };
    Ok(DhoRun {
        record,
        reference,
        spot,
        table,
    })
}
