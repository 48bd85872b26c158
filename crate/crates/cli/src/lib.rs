//! Experiment runner for the `jetsplit` contact integrators.
//!
//! Builds the model systems (damped oscillator, forced Van der Pol, dissipative
//! double well), runs them through the splitting schemes, fits convergence
//! slopes, and writes CSV and SVG outputs.

pub mod bracket_check;
pub mod config;
pub mod convergence;
pub mod dho;
pub mod diagnostics;
pub mod double_well;
pub mod error;
pub mod output;
pub mod reference;
pub mod svg;
pub mod systems;
pub mod universal;
pub mod vdp;

pub use convergence::{
    convergence_study, fit_loglog, mutual_convergence, ConvergenceRow, ConvergenceTable, ErrorNorm,
    SlopeExpectation, Sweep,
};
pub use error::{LabError, Result};
pub use reference::{dho_exact_reference, dho_exact_trajectory};
