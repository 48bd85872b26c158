//! Splitting schemes, commutator gadgets, the universal scheme builder and
//! the trajectory runner.

use std::sync::Arc;

use crate::algebra::coeff::Coeff;
use crate::algebra::decompose::DepthOneRepresentation;
use crate::algebra::poly::{FloatHamiltonian, PolyPHamiltonian};
use crate::algebra::xu::{XUPolynomial, XuMonomial};
use crate::contact::{ContactStep, Hamiltonian, JetPoint};
use crate::dual::Dual;
use crate::error::{Error, Result};
use crate::lifting::{lifted_rk4, HamiltonianBase};
use crate::subflows::{AffineU, Drift, FiberTransport, Identity, Kick, PolyField, QuadU, Slot};

/// Shared handle to a one-step map.
pub type Step = Arc<dyn ContactStep>;

/// Yoshida triple-jump weights `(w₁, w₀)`.
pub fn yoshida_weights() -> (f64, f64) {
    let w1 = 1.0 / (2.0 - 2f64.cbrt());
    (w1, 1.0 - 2.0 * w1)
}

/// Yoshida gadget coefficients `(γ₁, γ₀)` with `2γ₁² + γ₀² = 1` and
/// `2γ₁³ + γ₀³ = 0`.
pub fn gadget_yoshida_coefficients() -> (f64, f64) {
    let g1 = 1.0 / (2.0 + 2f64.powf(2.0 / 3.0)).sqrt();
    (g1, -2f64.cbrt() * g1)
}

fn same_step(a: &Step, b: &Step) -> bool {
    std::ptr::addr_eq(Arc::as_ptr(a), Arc::as_ptr(b))
}

/// One factor of a scheme: `step` run for `coeff · h`, starting at
/// `t + offset · h`.
#[derive(Clone)]
pub struct Factor {
    pub step: Step,
    pub coeff: f64,
    /// Sum of the coefficients of earlier factors sharing this step, so
    /// each constituent advances along its own clock.
    pub offset: f64,
}

impl std::fmt::Debug for Factor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}[{}@{}]", self.step.label(), self.coeff, self.offset)
    }
}

/// A finite composition of one-step maps, listed in application order.
#[derive(Clone, Debug)]
pub struct Scheme {
    factors: Vec<Factor>,
    declared_order: u32,
    label: String,
}

impl Scheme {
    /// Builds a scheme from `(step, coefficient)` pairs in application order
    /// and checks that each constituent's coefficients sum to one.
    pub fn new(
        parts: Vec<(Step, f64)>,
        declared_order: u32,
        label: impl Into<String>,
    ) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::Construction(
                "a scheme needs at least one factor".into(),
            ));
        }
        let mut factors: Vec<Factor> = Vec::with_capacity(parts.len());
        for (step, coeff) in parts {
            if !coeff.is_finite() {
                return Err(Error::Construction(format!(
                    "non-finite coefficient for {}",
                    step.label()
                )));
            }
            let offset = factors
                .iter()
                .filter(|f| same_step(&f.step, &step))
                .map(|f| f.coeff)
                .sum();
            factors.push(Factor {
                step,
                coeff,
                offset,
            });
        }
        for f in &factors {
            let total: f64 = factors
                .iter()
                .filter(|g| same_step(&g.step, &f.step))
                .map(|g| g.coeff)
                .sum();
            if (total - 1.0).abs() > 1e-12 {
                return Err(Error::Construction(format!(
                    "coefficients of {} sum to {total}, not 1",
                    f.step.label()
                )));
            }
        }
        Ok(Self {
            factors,
            declared_order,
            label: label.into(),
        })
    }

    /// Sequential composition, first part applied first. Order 1.
    pub fn lie_trotter(parts: Vec<Step>) -> Result<Self> {
        if parts.len() == 1 {
            log::warn!("Lie-Trotter with a single part is just that part");
        }
        let label = format!(
            "lie({})",
            parts
                .iter()
                .map(|p| p.label())
                .collect::<Vec<_>>()
                .join(", ")
        );
        Self::new(parts.into_iter().map(|p| (p, 1.0)).collect(), 1, label)
    }

    /// Palindromic Strang composition with the first part outermost:
    /// `P₁(h/2) … Pₖ₋₁(h/2) Pₖ(h) Pₖ₋₁(h/2) … P₁(h/2)`. Order 2.
    pub fn strang(parts: Vec<Step>) -> Result<Self> {
        let label = format!(
            "strang({})",
            parts
                .iter()
                .map(|p| p.label())
                .collect::<Vec<_>>()
                .join(", ")
        );
        let k = parts.len();
        if k == 0 {
            return Err(Error::Construction("strang needs at least one part".into()));
        }
        let mut seq: Vec<(Step, f64)> = Vec::with_capacity(2 * k - 1);
        for p in &parts[..k - 1] {
            seq.push((p.clone(), 0.5));
        }
        seq.push((parts[k - 1].clone(), 1.0));
        for p in parts[..k - 1].iter().rev() {
            seq.push((p.clone(), 0.5));
        }
        Self::new(seq, 2, label)
    }

    /// Triple jump `base(w₁h) base(w₀h) base(w₁h)`. Order 4.
    pub fn yoshida4(base: Scheme) -> Result<Self> {
        if base.declared_order != 2 || !base.is_palindromic() {
            return Err(Error::Construction(format!(
                "yoshida4 needs a symmetric order-2 base, got {} (order {}, palindromic: {})",
                base.label,
                base.declared_order,
                base.is_palindromic()
            )));
        }
        let (w1, w0) = yoshida_weights();
        let label = format!("yoshida4({})", base.label);
        let b: Step = Arc::new(base);
        Self::new(vec![(b.clone(), w1), (b.clone(), w0), (b, w1)], 4, label)
    }

    pub fn declared_order(&self) -> u32 {
        self.declared_order
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    /// Same steps with mirrored coefficients.
    pub fn is_palindromic(&self) -> bool {
        let k = self.factors.len();
        (0..k / 2 + 1).all(|i| {
            let (a, b) = (&self.factors[i], &self.factors[k - 1 - i]);
            same_step(&a.step, &b.step) && (a.coeff - b.coeff).abs() <= 1e-15
        })
    }
}

impl ContactStep for Scheme {
    fn label(&self) -> String {
        self.label.clone()
    }
    fn apply(&self, z: &JetPoint, t: f64, h: f64) -> Result<JetPoint> {
        let mut z = z.clone();
        for f in &self.factors {
            z = f.step.apply(&z, t + f.offset * h, f.coeff * h)?;
        }
        Ok(z)
    }
    fn apply_dual(&self, z: &JetPoint<Dual<f64>>, t: f64, h: f64) -> Result<JetPoint<Dual<f64>>> {
        let mut z = z.clone();
        for f in &self.factors {
            z = f.step.apply_dual(&z, t + f.offset * h, f.coeff * h)?;
        }
        Ok(z)
    }
    fn is_strict(&self) -> bool {
        self.factors.iter().all(|f| f.step.is_strict())
    }
    fn sigma_increment(&self, z: &JetPoint, t: f64, h: f64) -> Result<f64> {
        Ok(self.advance(z, t, h)?.1)
    }
    fn advance(&self, z: &JetPoint, t: f64, h: f64) -> Result<(JetPoint, f64)> {
        let mut z = z.clone();
        let mut sigma = 0.0;
        for f in &self.factors {
            let (next, s) = f.step.advance(&z, t + f.offset * h, f.coeff * h)?;
            z = next;
            sigma += s;
        }
        Ok((z, sigma))
    }
}

/// Commutator gadget variants.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GadgetKind {
    /// `G(ε) = B(−ε) A(−ε) B(ε) A(ε)` (A first), `ε = √t_c`.
    Basic,
    /// `(G(−s) ∘ G(s))^m`, `s = √(t_c/2m)`.
    Symmetric { m: usize },
    /// `(G(γ₁ε) ∘ G(γ₀ε) ∘ G(γ₁ε))^m`, `ε = √(t_c/m)`.
    Yoshida { m: usize },
}

impl GadgetKind {
    pub const DEFAULT_SUBSTEPS: usize = 4;

    pub fn symmetric() -> Self {
        Self::Symmetric {
            m: Self::DEFAULT_SUBSTEPS,
        }
    }

    pub fn yoshida() -> Self {
        Self::Yoshida {
            m: Self::DEFAULT_SUBSTEPS,
        }
    }

    /// Number of exact `A`/`B` subflows per application.
    pub fn substep_count(&self) -> usize {
        match *self {
            Self::Basic => 4,
            Self::Symmetric { m } => 8 * m,
            Self::Yoshida { m } => 12 * m,
        }
    }
}

/// Approximates the flow of `scale · [A, B]` from the exact flows of `A`
/// and `B`. Negative effective durations swap the roles of `A` and `B`.
#[derive(Clone)]
pub struct Gadget {
    a: Step,
    b: Step,
    kind: GadgetKind,
    scale: f64,
}

impl std::fmt::Debug for Gadget {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", ContactStep::label(self))
    }
}

impl Gadget {
    pub fn new(a: Step, b: Step, kind: GadgetKind, scale: f64) -> Result<Self> {
        match kind {
            GadgetKind::Symmetric { m } | GadgetKind::Yoshida { m } if m == 0 => {
                return Err(Error::Construction(
                    "gadget substep count m must be at least 1".into(),
                ))
            }
            GadgetKind::Yoshida { .. } => {
                let (g1, g0) = gadget_yoshida_coefficients();
                let quad = 2.0 * g1 * g1 + g0 * g0 - 1.0;
                let cubic = 2.0 * g1.powi(3) + g0.powi(3);
                if quad.abs() > 1e-15 || cubic.abs() > 1e-15 {
                    return Err(Error::Construction(format!(
                        "Yoshida gadget identities violated ({quad:e}, {cubic:e})"
                    )));
                }
            }
            _ => {}
        }
        if !scale.is_finite() {
            return Err(Error::Construction("gadget scale must be finite".into()));
        }
        Ok(Self { a, b, kind, scale })
    }

    pub fn kind(&self) -> GadgetKind {
        self.kind
    }

    /// `(is_a, duration)` in application order for a commutator duration.
    fn sequence(&self, h: f64) -> Vec<(bool, f64)> {
        let tc = self.scale * h;
        let swap = tc < 0.0;
        let tc = tc.abs();
        let mut seq = Vec::with_capacity(self.kind.substep_count());
        let mut basic = |eps: f64| {
            seq.push((!swap, eps));
            seq.push((swap, eps));
            seq.push((!swap, -eps));
            seq.push((swap, -eps));
        };
        match self.kind {
            GadgetKind::Basic => basic(tc.sqrt()),
            GadgetKind::Symmetric { m } => {
                let s = (tc / (2.0 * m as f64)).sqrt();
                for _ in 0..m {
                    basic(s);
                    basic(-s);
                }
            }
            GadgetKind::Yoshida { m } => {
                let eps = (tc / m as f64).sqrt();
                let (g1, g0) = gadget_yoshida_coefficients();
                for _ in 0..m {
                    basic(g1 * eps);
                    basic(g0 * eps);
                    basic(g1 * eps);
                }
            }
        }
        seq
    }

    fn pick(&self, is_a: bool) -> &Step {
        if is_a {
            &self.a
        } else {
            &self.b
        }
    }
}

impl ContactStep for Gadget {
    fn label(&self) -> String {
        let kind = match self.kind {
            GadgetKind::Basic => "gadget".to_string(),
            GadgetKind::Symmetric { m } => format!("gadget_sym[m={m}]"),
            GadgetKind::Yoshida { m } => format!("gadget_yoshida[m={m}]"),
        };
        format!(
            "{kind}({}, {}; scale={})",
            self.a.label(),
            self.b.label(),
            self.scale
        )
    }
    fn apply(&self, z: &JetPoint, t: f64, h: f64) -> Result<JetPoint> {
        let mut z = z.clone();
        for (is_a, d) in self.sequence(h) {
            z = self.pick(is_a).apply(&z, t, d)?;
        }
        Ok(z)
    }
    fn apply_dual(&self, z: &JetPoint<Dual<f64>>, t: f64, h: f64) -> Result<JetPoint<Dual<f64>>> {
        let mut z = z.clone();
        for (is_a, d) in self.sequence(h) {
            z = self.pick(is_a).apply_dual(&z, t, d)?;
        }
        Ok(z)
    }
    fn is_strict(&self) -> bool {
        self.a.is_strict() && self.b.is_strict()
    }
    fn sigma_increment(&self, z: &JetPoint, t: f64, h: f64) -> Result<f64> {
        Ok(self.advance(z, t, h)?.1)
    }
    fn advance(&self, z: &JetPoint, t: f64, h: f64) -> Result<(JetPoint, f64)> {
        let mut z = z.clone();
        let mut sigma = 0.0;
        for (is_a, d) in self.sequence(h) {
            let (next, s) = self.pick(is_a).advance(&z, t, d)?;
            z = next;
            sigma += s;
        }
        Ok((z, sigma))
    }
}

/// How prolonged generators are realised in the universal scheme.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProlongedRealization {
    /// Closed-form flow when the generator has one of the supported shapes,
    /// lifted RK4 otherwise.
    ExactIfAvailable,
    /// Always lifted RK4.
    Lifted,
}

fn base_part(f: &XUPolynomial<f64>, u_power: u32) -> XUPolynomial<f64> {
    let mut out = XUPolynomial::zero(f.dim());
    for (m, c) in f.terms() {
        if m.u == u_power {
            out.add_term(
                XuMonomial {
                    x: m.x.clone(),
                    u: 0,
                },
                *c,
            );
        }
    }
    out
}

fn is_fiber_only(f: &XUPolynomial<f64>) -> bool {
    f.terms().all(|(m, _)| m.x.iter().all(|&a| a == 0))
}

/// Closed-form flow of a prolonged generator, if its shape has one.
pub fn exact_prolonged_step(d: &FloatHamiltonian) -> Option<Step> {
    let n = d.dim();
    let zero = vec![0; n];
    let base = d.coefficient(&zero);
    if d.degree() == 0 {
        match base.u_degree() {
            0 | 1 => {
                let a = PolyField::new(
                    FloatHamiltonian::from_base(base_part(&base, 0)),
                    Slot::Position,
                )
                .ok()?;
                let b = PolyField::new(
                    FloatHamiltonian::from_base(base_part(&base, 1)),
                    Slot::Position,
                )
                .ok()?;
                return Some(Arc::new(AffineU { a, b }));
            }
            2 if base.terms().all(|(m, _)| m.u == 2) => {
                let c = PolyField::new(
                    FloatHamiltonian::from_base(base_part(&base, 2)),
                    Slot::Position,
                )
                .ok()?;
                return Some(Arc::new(QuadU { c }));
            }
            _ => return None,
        }
    }
    if d.degree() == 1 && base.is_zero() {
        let mut g = Vec::with_capacity(n);
        for i in 0..n {
            let mut alpha = vec![0; n];
            alpha[i] = 1;
            let gi = d.coefficient(&alpha);
            if !is_fiber_only(&gi) {
                return None;
            }
            g.push(PolyField::new(FloatHamiltonian::from_base(gi), Slot::Fiber).ok()?);
        }
        return Some(Arc::new(FiberTransport { g }));
    }
    None
}

fn prolonged_step(d: &FloatHamiltonian, how: ProlongedRealization) -> Result<Step> {
    if !d.is_prolonged() {
        return Err(Error::Construction(format!("{d} is not affine in p")));
    }
    if how == ProlongedRealization::ExactIfAvailable {
        if let Some(s) = exact_prolonged_step(d) {
            return Ok(s);
        }
    }
    Ok(Arc::new(lifted_rk4(HamiltonianBase(d.clone()))))
}

/// Exact flow of a strict generator that depends on `p` only or `x` only.
pub fn exact_strict_step(s: &FloatHamiltonian) -> Result<Step> {
    if let Ok(f) = PolyField::new(s.clone(), Slot::Momentum) {
        return Ok(Arc::new(Drift::new(f)));
    }
    if let Ok(f) = PolyField::new(s.clone(), Slot::Position) {
        return Ok(Arc::new(Kick::new(f)));
    }
    Err(Error::Construction(format!(
        "no exact substep for strict generator {s}"
    )))
}

/// Splits a strict Hamiltonian into its `p`-only and `p`-free parts.
fn split_strict(s: &FloatHamiltonian) -> (FloatHamiltonian, FloatHamiltonian, FloatHamiltonian) {
    let n = s.dim();
    let mut kinetic = FloatHamiltonian::zero(n);
    let mut potential = FloatHamiltonian::zero(n);
    let mut mixed = FloatHamiltonian::zero(n);
    for (alpha, f) in s.terms() {
        let p_free = alpha.iter().all(|&a| a == 0);
        for (m, c) in f.terms() {
            let term = FloatHamiltonian::from_term(
                alpha.clone(),
                XUPolynomial::monomial(n, m.clone(), *c),
            );
            if p_free {
                potential = &potential + &term;
            } else if m.is_one() {
                kinetic = &kinetic + &term;
            } else {
                mixed = &mixed + &term;
            }
        }
    }
    (kinetic, potential, mixed)
}

/// Outer Lie–Trotter (order 1) or Strang (order 2) splitting over the
/// `s₀` drift and kick, the `d₀` flow and one gadget per pair.
pub fn build_universal_scheme<C: Coeff>(
    rep: &DepthOneRepresentation<C>,
    outer_order: u32,
    gadget: GadgetKind,
    realization: ProlongedRealization,
) -> Result<Scheme> {
    if !rep.is_well_formed() {
        return Err(Error::Construction(
            "representation slots violate strict/prolonged membership".into(),
        ));
    }
    let s0 = rep.s0.to_float();
    let d0 = rep.d0.to_float();
    let mut parts: Vec<Step> = Vec::new();
    let (kinetic, potential, mixed) = split_strict(&s0);
    if !mixed.is_zero() {
        return Err(Error::Construction(format!(
            "no exact substep for strict generator {mixed}"
        )));
    }
    if !kinetic.is_zero() {
        parts.push(exact_strict_step(&kinetic)?);
    }
    if !potential.is_zero() {
        parts.push(exact_strict_step(&potential)?);
    }
    if !d0.is_zero() {
        parts.push(prolonged_step(&d0, realization)?);
    }
    for (s, d) in &rep.pairs {
        let (s, d) = (s.to_float(), d.to_float());
        if s.is_zero() || d.is_zero() {
            continue;
        }
        let a = exact_strict_step(&s)?;
        let b = prolonged_step(&d, realization)?;
        parts.push(Arc::new(Gadget::new(a, b, gadget, 1.0)?));
    }
    if parts.is_empty() {
        parts.push(Arc::new(Identity));
    }
    match outer_order {
        1 => Scheme::lie_trotter(parts),
        2 => Scheme::strang(parts),
        k => Err(Error::Construction(format!(
            "outer order must be 1 or 2, got {k}"
        ))),
    }
}

/// Why a trajectory stopped early.
#[derive(Clone, Debug, PartialEq)]
pub struct StepFailure {
    /// Start time of the failing step.
    pub time: f64,
    pub error: Error,
}

/// A sampled trajectory.
#[derive(Clone, Debug)]
pub struct RunRecord {
    pub label: String,
    pub times: Vec<f64>,
    pub states: Vec<JetPoint>,
    pub h_values: Vec<f64>,
    /// Prefix sums of the per-step log-conformal increments.
    pub sigma_cum: Vec<f64>,
    pub failure: Option<StepFailure>,
}

impl RunRecord {
    /// Time of a blow-up, if the run ended in one.
    pub fn blowup_time(&self) -> Option<f64> {
        match &self.failure {
            Some(StepFailure {
                time,
                error: Error::BlowUp { .. },
            }) => Some(*time),
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> &JetPoint {
        self.states
            .last()
            .expect("a record holds at least the initial state")
    }
}

/// Number of steps of size `h` that fit in `T` (tolerating rounding in `T/h`).
pub fn step_count(h: f64, span: f64) -> usize {
    (span / h + 1e-9).floor() as usize
}

/// Iterates `step` from `(t0, z0)` with step `h` up to time `t0 + T`,
/// recording `H`, states and the cumulative conformal factor. A failing
/// step ends the record instead of raising.
pub fn run_trajectory<M, H>(
    step: &M,
    z0: &JetPoint,
    t0: f64,
    h: f64,
    span: f64,
    ham: &H,
) -> Result<RunRecord>
where
    M: ContactStep + ?Sized,
    H: Hamiltonian,
{
    if !(h > 0.0 && span > 0.0) {
        return Err(Error::Precondition(format!(
            "run needs h > 0 and T > 0 (h = {h}, T = {span})"
        )));
    }
    z0.check_finite("initial state")?;
    let steps = step_count(h, span);
    let mut rec = RunRecord {
        label: step.label(),
        times: Vec::with_capacity(steps + 1),
        states: Vec::with_capacity(steps + 1),
        h_values: Vec::with_capacity(steps + 1),
        sigma_cum: Vec::with_capacity(steps + 1),
        failure: None,
    };
    let mut z = z0.clone();
    let mut sigma = 0.0;
    rec.times.push(t0);
    rec.h_values.push(ham.value(&z, t0));
    rec.states.push(z.clone());
    rec.sigma_cum.push(0.0);
    for k in 0..steps {
        let t = t0 + k as f64 * h;
        let outcome = step.advance(&z, t, h).and_then(|(next, s)| {
            if next.is_finite() {
                Ok((next, s))
            } else {
                next.check_finite(&step.label()).map(|_| (next, s))
            }
        });
        match outcome {
            Ok((next, s)) => {
                z = next;
                sigma += s;
                let tn = t0 + (k + 1) as f64 * h;
                rec.times.push(tn);
                rec.h_values.push(ham.value(&z, tn));
                rec.states.push(z.clone());
                rec.sigma_cum.push(sigma);
            }
            Err(error) => {
                log::warn!("{}: step at t = {t} failed: {error}", rec.label);
                rec.failure = Some(StepFailure { time: t, error });
                break;
            }
        }
    }
    Ok(rec)
}

/// Converts a Hamiltonian with any coefficient type to floating point.
pub fn to_float<C: Coeff>(h: &PolyPHamiltonian<C>) -> FloatHamiltonian {
    h.to_float()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subflows::{BernoulliB, Harmonic, ReebScaling};
    use approx::assert_relative_eq;

    fn drift() -> Step {
        Arc::new(Drift::new(
            PolyField::new("0.5*p^2".parse().unwrap(), Slot::Momentum).unwrap(),
        ))
    }

    fn kick() -> Step {
        Arc::new(Kick::new(
            PolyField::new("0.5*x^2".parse().unwrap(), Slot::Position).unwrap(),
        ))
    }

    #[test]
    fn yoshida_weight_identities() {
        let (w1, w0) = yoshida_weights();
        assert_relative_eq!(w1, 1.351207191959657, epsilon = 1e-12);
        assert_relative_eq!(w0, -1.702414383919315, epsilon = 1e-12);
        assert_relative_eq!(w0 + 2.0 * w1, 1.0, epsilon = 1e-15);
        let (g1, g0) = gadget_yoshida_coefficients();
        assert_relative_eq!(g1, 0.5279709584700459, epsilon = 1e-14);
        assert_relative_eq!(g0, -0.6652017243095828, epsilon = 1e-14);
        assert!((2.0 * g1 * g1 + g0 * g0 - 1.0).abs() <= 1e-15);
        assert!((2.0 * g1.powi(3) + g0.powi(3)).abs() <= 1e-15);
    }

    #[test]
    fn strang_layout_and_offsets() {
        let (a, b, c) = (
            drift(),
            kick(),
            Arc::new(ReebScaling { gamma: 0.3 }) as Step,
        );
        let s = Scheme::strang(vec![a, b, c]).unwrap();
        let coeffs: Vec<f64> = s.factors().iter().map(|f| f.coeff).collect();
        assert_eq!(coeffs, vec![0.5, 0.5, 1.0, 0.5, 0.5]);
        let offsets: Vec<f64> = s.factors().iter().map(|f| f.offset).collect();
        assert_eq!(offsets, vec![0.0, 0.0, 0.0, 0.5, 0.5]);
        assert!(s.is_palindromic());
        assert_eq!(s.declared_order(), 2);
    }

    #[test]
    fn yoshida_rejects_non_symmetric_base() {
        let lie = Scheme::lie_trotter(vec![drift(), kick()]).unwrap();
        assert!(matches!(Scheme::yoshida4(lie), Err(Error::Construction(_))));
        let base = Scheme::strang(vec![Arc::new(Identity), Arc::new(Identity)]).unwrap();
        let y = Scheme::yoshida4(base).unwrap();
        let z = JetPoint::scalar(0.1, 0.2, 0.3);
        assert_eq!(y.apply(&z, 0.0, 0.5).unwrap(), z);
    }

    #[test]
    fn inconsistent_coefficients_are_rejected() {
        let a = drift();
        assert!(Scheme::new(vec![(a.clone(), 0.5), (kick(), 1.0)], 1, "bad").is_err());
        assert!(Scheme::new(vec![(a.clone(), 0.5), (a, 0.5)], 1, "ok").is_ok());
    }

    #[test]
    fn identity_part_is_transparent() {
        let (a, b) = (drift(), kick());
        let with = Scheme::lie_trotter(vec![a.clone(), Arc::new(Identity), b.clone()]).unwrap();
        let without = Scheme::lie_trotter(vec![a, b]).unwrap();
        let z = JetPoint::scalar(0.4, -0.1, 1.2);
        assert_eq!(
            with.apply(&z, 0.0, 0.1).unwrap(),
            without.apply(&z, 0.0, 0.1).unwrap()
        );
    }

    #[test]
    fn gadget_zero_duration_is_identity() {
        let g = Gadget::new(
            Arc::new(QuadU::constant(-0.5)),
            Arc::new(Drift::new(
                PolyField::new("p^2".parse().unwrap(), Slot::Momentum).unwrap(),
            )),
            GadgetKind::yoshida(),
            1.0,
        )
        .unwrap();
        let z = JetPoint::scalar(0.4, 0.3, 1.2);
        assert_eq!(g.apply(&z, 0.0, 0.0).unwrap(), z);
        assert_eq!(g.kind().substep_count(), 48);
    }

    #[test]
    fn gadget_approximates_the_bracket_flow() {
        // [−u²/2, p²] = u p², whose flow is the Bernoulli B-step with σ = 1.
        let g = Gadget::new(
            Arc::new(QuadU::constant(-0.5)),
            Arc::new(Drift::new(
                PolyField::new("p^2".parse().unwrap(), Slot::Momentum).unwrap(),
            )),
            GadgetKind::Basic,
            1.0,
        )
        .unwrap();
        let z = JetPoint::scalar(0.2, 0.4, 0.7);
        let err = |tc: f64| {
            let a = g.apply(&z, 0.0, tc).unwrap();
            let b = BernoulliB { sigma: 1.0 }.apply(&z, 0.0, tc).unwrap();
            a.distance(&b)
        };
        let (e1, e2) = (err(1e-2), err(2.5e-3));
        // O(ε³) = O(t_c^{3/2}): quartering t_c divides the error by ~8.
        assert!(e1 / e2 > 6.0 && e1 / e2 < 10.0, "{e1} {e2}");
    }

    #[test]
    fn strict_runs_have_zero_sigma() {
        let s = Scheme::strang(vec![Arc::new(Harmonic) as Step, drift()]).unwrap();
        let ham: FloatHamiltonian = "0.5*p^2".parse().unwrap();
        let rec =
            run_trajectory(&s, &JetPoint::scalar(1.0, 0.0, 0.0), 0.0, 0.1, 1.0, &ham).unwrap();
        assert_eq!(rec.len(), 11);
        assert!(rec.sigma_cum.iter().all(|&s| s == 0.0));
    }

    #[test]
    fn short_span_gives_single_sample() {
        let ham: FloatHamiltonian = "0.5*p^2".parse().unwrap();
        let rec = run_trajectory(
            &*drift(),
            &JetPoint::scalar(1.0, 0.0, 0.0),
            0.0,
            0.1,
            0.05,
            &ham,
        )
        .unwrap();
        assert_eq!(rec.len(), 1);
    }

    #[test]
    fn blow_up_is_recorded() {
        let ham: FloatHamiltonian = "u*p^2".parse().unwrap();
        let step = BernoulliB { sigma: -1.0 };
        let rec =
            run_trajectory(&step, &JetPoint::scalar(0.0, 1.0, 1.0), 0.0, 0.2, 2.0, &ham).unwrap();
        assert!(rec.blowup_time().is_some());
        assert!(rec.len() < 11);
    }
}
