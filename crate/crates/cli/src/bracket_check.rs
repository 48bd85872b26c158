//! Direct check of a commutator gadget against the exact bracket flow.

use std::sync::Arc;

use jetsplit::composition::{Gadget, GadgetKind, Step};
use jetsplit::subflows::{BernoulliB, Drift, PolyField, QuadU, Slot};
use jetsplit::{ContactStep, JetPoint};

use crate::convergence::{fit_loglog, log_sweep};
use crate::diagnostics::random_states;
use crate::error::Result;

#[derive(Clone, Debug, PartialEq)]
pub struct BracketRow {
    pub eps: f64,
    /// Largest distance over the sample set.
    pub error: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BracketCheck {
    pub kind: GadgetKind,
    pub rows: Vec<BracketRow>,
    /// `ε` values whose row was dropped because a substep blew up.
    pub dropped: Vec<f64>,
    pub rate: f64,
    pub r2: f64,
}

/// Default `ε` grid.
pub fn default_eps() -> Vec<f64> {
    log_sweep(-1.5, -0.5, 8)
}

/// Compares the gadget of `(a, b)` at bracket time `ε²` with `reference`,
/// the exact flow of `[a, b]`, over `samples`, and fits the rate in `ε`.
pub fn bracket_check<R>(
    a: Step,
    b: Step,
    reference: R,
    kind: GadgetKind,
    eps: &[f64],
    samples: &[JetPoint],
) -> Result<BracketCheck>
where
    R: Fn(&JetPoint, f64) -> jetsplit::Result<JetPoint>,
{
    let gadget = Gadget::new(a, b, kind, 1.0)?;
    let mut rows = Vec::new();
    let mut dropped = Vec::new();
    'eps: for &e in eps {
        let tau = e * e;
        let mut worst = 0.0f64;
        for z in samples {
            let got = gadget.apply(z, 0.0, tau);
            let want = reference(z, tau);
            match (got, want) {
                (Ok(g), Ok(w)) => worst = worst.max(g.distance(&w)),
                (Err(err), _) | (_, Err(err)) => {
                    log::warn!("bracket check: dropping ε = {e:e}: {err}");
                    dropped.push(e);
                    continue 'eps;
                }
            }
        }
        rows.push(BracketRow {
            eps: e,
            error: worst,
        });
    }
    let (xs, es): (Vec<f64>, Vec<f64>) = rows.iter().map(|r| (r.eps, r.error)).unzip();
    let (rate, r2) = fit_loglog(&xs, &es)?;
    Ok(BracketCheck {
        kind,
        rows,
        dropped,
        rate,
        r2,
    })
}

/// `up² = [−u²/2, p²]` checked against the exact `σp²u` flow with `σ = 1`.
pub fn up2_bracket_check(kind: GadgetKind, eps: &[f64], seed: u64) -> Result<BracketCheck> {
    let a: Step = Arc::new(QuadU::constant(-0.5));
    let b: Step = Arc::new(Drift::new(PolyField::new("p^2".parse()?, Slot::Momentum)?));
    let exact = BernoulliB { sigma: 1.0 };
    let samples = random_states(seed, 20, 1.0, 0.5, 1.0);
    bracket_check(a, b, |z, tau| exact.apply(z, 0.0, tau), kind, eps, &samples)
}
