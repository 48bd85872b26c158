//! TOML experiment configuration with per-scenario defaults.

use std::path::{Path, PathBuf};

use jetsplit::JetPoint;
use serde::{Deserialize, Serialize};

use crate::convergence::{dho_h_sweep, log_sweep, ErrorNorm};
use crate::error::{LabError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    Dho,
    Vdp,
    DoubleWell,
    Custom,
}

/// A coordinate block: a bare number for `n = 1`, a list otherwise.
#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(untagged)]
pub enum Coords {
    One(f64),
    Many(Vec<f64>),
}

impl Coords {
    fn to_vec(&self) -> Vec<f64> {
        match self {
            Coords::One(v) => vec![*v],
            Coords::Many(v) => v.clone(),
        }
    }
}

/// Initial state written as `{ x = .., p = .., u = .. }`.
#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct InitialState {
    pub x: Coords,
    pub p: Coords,
    #[serde(default)]
    pub u: f64,
}

impl InitialState {
    pub fn scalar(x: f64, p: f64, u: f64) -> Self {
        Self {
            x: Coords::One(x),
            p: Coords::One(p),
            u,
        }
    }

    pub fn to_point(&self) -> Result<JetPoint> {
        Ok(JetPoint::new(self.x.to_vec(), self.u, self.p.to_vec())?)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    pub gamma: Option<f64>,
    pub eps: Option<f64>,
    pub amp: Option<f64>,
    pub omega: Option<f64>,
    pub sigma: Option<f64>,
}

/// An experiment as read from TOML. Missing values take the scenario's
/// defaults in [`ExperimentConfig::resolve`].
#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    /// Preset name or scheme specification string.
    pub scheme: Option<String>,
    /// Polynomial Hamiltonian for the `custom` scenario.
    pub hamiltonian: Option<String>,
    #[serde(default)]
    pub params: Params,
    pub z0: Option<InitialState>,
    #[serde(default)]
    pub t0: f64,
    pub h: Option<f64>,
    pub h_sweep: Option<Vec<f64>>,
    #[serde(rename = "T")]
    pub span: Option<f64>,
    #[serde(default)]
    pub norm: ErrorNorm,
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub svg: bool,
    #[serde(default)]
    pub seed: u64,
}

/// Command-line values that take precedence over the file.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub h: Option<f64>,
    pub span: Option<f64>,
    pub scheme: Option<String>,
    pub sigma: Option<f64>,
    pub gamma: Option<f64>,
    pub eps: Option<f64>,
    pub omega: Option<f64>,
    pub amp: Option<f64>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub svg: bool,
}

/// A validated configuration with every value filled in.
#[derive(Clone, Debug, PartialEq)]
pub struct Resolved {
    pub scenario: Scenario,
    pub scheme: Option<String>,
    pub hamiltonian: Option<String>,
    pub gamma: f64,
    pub eps: f64,
    pub amp: f64,
    pub omega: f64,
    pub sigma: f64,
    pub z0: JetPoint,
    pub t0: f64,
    pub h: f64,
    pub h_sweep: Vec<f64>,
    pub span: f64,
    pub norm: ErrorNorm,
    pub out: PathBuf,
    pub svg: bool,
    pub seed: u64,
}

impl ExperimentConfig {
    pub fn new(scenario: Scenario) -> Self {
        Self {
            scenario,
            scheme: None,
            hamiltonian: None,
            params: Params::default(),
            z0: None,
            t0: 0.0,
            h: None,
            h_sweep: None,
            span: None,
            norm: ErrorNorm::default(),
            out: None,
            svg: false,
            seed: 0,
        }
    }

    pub fn from_toml(text: &str, path: &Path) -> Result<Self> {
        toml::from_str(text).map_err(|source| LabError::Toml {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| LabError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml(&text, path)
    }

    pub fn apply(&mut self, o: &Overrides) {
        let p = &mut self.params;
        for (slot, v) in [
            (&mut p.sigma, o.sigma),
            (&mut p.gamma, o.gamma),
            (&mut p.eps, o.eps),
            (&mut p.omega, o.omega),
            (&mut p.amp, o.amp),
        ] {
            if v.is_some() {
                *slot = v;
            }
        }
        if o.h.is_some() {
            self.h = o.h;
        }
        if o.span.is_some() {
            self.span = o.span;
        }
        if o.scheme.is_some() {
            self.scheme.clone_from(&o.scheme);
        }
        if o.out.is_some() {
            self.out.clone_from(&o.out);
        }
        if let Some(seed) = o.seed {
            self.seed = seed;
        }
        self.svg |= o.svg;
    }

    /// Fills scenario defaults and checks the result.
    pub fn resolve(&self) -> Result<Resolved> {
        use Scenario::*;
        let s = self.scenario;
        let z0 = match (&self.z0, s) {
            (Some(z), _) => z.to_point()?,
            (None, Dho | Vdp) => JetPoint::scalar(1.0, 0.0, 0.0),
            (None, DoubleWell) => JetPoint::scalar(0.5, 0.0, 1.0),
            (None, Custom) => return Err(LabError::config("the custom scenario needs z0")),
        };
        let (h, span) = match s {
            Dho => (0.05, 20.0),
            Vdp => (0.02, 200.0),
            DoubleWell => (0.01, DOUBLE_WELL_SPAN),
            Custom => (0.01, 10.0),
        };
        let h_sweep = self.h_sweep.clone().unwrap_or_else(|| match s {
            Dho => dho_h_sweep(),
            Vdp => vdp_unforced_sweep(),
            DoubleWell => double_well_sweep(),
            Custom => log_sweep(-1.0, -3.0, 8),
        });
        let r = Resolved {
            scenario: s,
            scheme: self.scheme.clone(),
            hamiltonian: self.hamiltonian.clone(),
            gamma: self.params.gamma.unwrap_or(0.3),
            eps: self.params.eps.unwrap_or(5.0),
            amp: self.params.amp.unwrap_or(5.0),
            omega: self.params.omega.unwrap_or(2.466),
            sigma: self.params.sigma.unwrap_or(1.0),
            z0,
            t0: self.t0,
            h: self.h.unwrap_or(h),
            h_sweep,
            span: self.span.unwrap_or(span),
            norm: self.norm,
            out: self.out.clone().unwrap_or_else(|| PathBuf::from("out")),
            svg: self.svg,
            seed: self.seed,
        };
        r.validate()?;
        Ok(r)
    }
}

/// Horizon of the double-well convergence runs.
pub const DOUBLE_WELL_SPAN: f64 = 5.0;

/// Step sizes for double-well convergence studies.
pub fn double_well_sweep() -> Vec<f64> {
    log_sweep(-3.0, -5.0, 9)
}

/// Step sizes for the unforced Van der Pol mutual-convergence study.
pub fn vdp_unforced_sweep() -> Vec<f64> {
    log_sweep(-1.3, -2.5, 8)
}

impl Resolved {
    fn validate(&self) -> Result<()> {
        let finite = [
            self.gamma, self.eps, self.amp, self.omega, self.sigma, self.t0,
        ];
        if finite.iter().any(|v| !v.is_finite()) || !self.z0.is_finite() {
            return Err(LabError::config("parameters and z0 must be finite"));
        }
        if !(self.span > 0.0 && self.span.is_finite()) {
            return Err(LabError::config(format!(
                "T must be positive, got {}",
                self.span
            )));
        }
        if !(self.h > 0.0 && self.h.is_finite()) {
            return Err(LabError::config(format!(
                "h must be positive, got {}",
                self.h
            )));
        }
        if self.h_sweep.iter().any(|h| !(*h > 0.0 && h.is_finite())) {
            return Err(LabError::config("h-sweep values must be positive"));
        }
        if self.h_sweep.windows(2).any(|w| w[1] >= w[0]) {
            return Err(LabError::config(
                "h-sweep values must be strictly decreasing",
            ));
        }
        match self.scenario {
            Scenario::Dho if !(self.gamma > 0.0 && self.gamma < 2.0) => {
                Err(LabError::config(format!(
                    "the DHO scenario needs 0 < gamma < 2 (underdamped), got {}",
                    self.gamma
                )))
            }
            Scenario::Dho | Scenario::Vdp | Scenario::DoubleWell if self.z0.dim() != 1 => {
                Err(LabError::config("built-in scenarios are one-dimensional"))
            }
            Scenario::Custom if self.hamiltonian.is_none() => {
                Err(LabError::config("the custom scenario needs a hamiltonian"))
            }
            _ => Ok(()),
        }
    }
}
