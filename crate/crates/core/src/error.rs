use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite value in {component}")]
    NonFinite { component: String },

    #[error("map reverses the coorientation: (ψ*α)(∂u) = {reeb_value:e} ≤ 0")]
    Orientation { reeb_value: f64 },

    #[error(
        "{label}: finite-time blow-up, critical time {critical_time:e} (requested {requested:e})"
    )]
    BlowUp {
        label: String,
        critical_time: f64,
        requested: f64,
    },

    #[error("prolongation is singular: smallest singular value {sigma_min:e} vs norm {norm:e}")]
    ProlongationSingular { sigma_min: f64, norm: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("degree {degree} on axis {axis} exceeds the monomial re-expansion limit {limit}")]
    DegreeLimit {
        axis: usize,
        degree: usize,
        limit: usize,
    },

    #[error(
        "step size underflow at t = {t:e} (h = {h:e}); shorten the span or loosen the tolerance"
    )]
    StepUnderflow { t: f64, h: f64 },

    #[error("cannot build scheme: {0}")]
    Construction(String),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

impl Error {
    pub fn non_finite(component: impl Into<String>) -> Self {
        Self::NonFinite {
            component: component.into(),
        }
    }

    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Self::Parse {
            pos,
            msg: msg.into(),
        }
    }
}
