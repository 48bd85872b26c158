//! Base-space integrators lifted to contact maps by prolonging the momenta
//! through the Jacobian of the numerical base map, plus the non-contact
//! full-system baseline and an adaptive reference solver.

use nalgebra::DMatrix;

use crate::contact::{contact_vector_field, FlowMap, Hamiltonian, JetPoint};
use crate::dual::{Dual, Scalar};
use crate::error::{Error, Result};

/// Relative threshold on the smallest singular value of `J00 + J01 pᵀ`.
pub const PROLONGATION_SINGULAR_TOL: f64 = 1e-8;

/// A vector field `ẋ = g(x, u, t)`, `u̇ = −f(x, u, t)` on ℝⁿ × ℝ; its first
/// prolongation is the contact flow of `H = f + g·p`.
pub trait BaseVectorField: Send + Sync {
    /// Returns `(g, f)`.
    fn eval<S: Scalar>(&self, x: &[S], u: &S, t: f64) -> (Vec<S>, S);
}

/// Base field of a Hamiltonian affine in `p`: `f = H(x, u, 0)`,
/// `g = ∂H/∂p (x, u, 0)`. For Hamiltonians that are not affine in `p` this
/// is the base field of their linearisation at `p = 0`.
#[derive(Clone, Debug)]
pub struct HamiltonianBase<H>(pub H);

impl<H: Hamiltonian> BaseVectorField for HamiltonianBase<H> {
    fn eval<S: Scalar>(&self, x: &[S], u: &S, t: f64) -> (Vec<S>, S) {
        let n = x.len();
        let xd: Vec<Dual<S>> = x.iter().cloned().map(Dual::constant).collect();
        let ud = Dual::constant(u.clone());
        let pd: Vec<Dual<S>> = (0..n).map(|i| Dual::variable(S::zero(), i, n)).collect();
        let out = self.0.eval(&xd, &ud, &pd, t);
        ((0..n).map(|i| out.d(i)).collect(), out.re)
    }
}

/// A one-step map of the base `(x, u)`.
pub trait BaseMap: Send + Sync {
    fn label(&self) -> String;
    fn base_map<S: Scalar>(&self, x: &[S], u: &S, t: f64, h: f64) -> Result<(Vec<S>, S)>;
}

/// `∂(x̄, ū)/∂(x, u)` split into blocks.
#[derive(Clone, Debug, PartialEq)]
pub struct JacobianBlocks<S = f64> {
    /// `∂x̄/∂x`, row-major `n × n`.
    pub j00: Vec<Vec<S>>,
    /// `∂x̄/∂u`.
    pub j01: Vec<S>,
    /// `∂ū/∂x`.
    pub j10: Vec<S>,
    /// `∂ū/∂u`.
    pub j11: S,
}

impl<S: Scalar> JacobianBlocks<S> {
    pub fn identity(n: usize) -> Self {
        Self {
            j00: (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| if i == j { S::one() } else { S::zero() })
                        .collect()
                })
                .collect(),
            j01: vec![S::zero(); n],
            j10: vec![S::zero(); n],
            j11: S::one(),
        }
    }

    pub fn dim(&self) -> usize {
        self.j01.len()
    }

    /// Reads the blocks off a base map evaluated on seeded duals.
    pub fn from_duals(x: &[Dual<S>], u: &Dual<S>) -> Self {
        let n = x.len();
        Self {
            j00: x
                .iter()
                .map(|xi| (0..n).map(|j| xi.d(j)).collect())
                .collect(),
            j01: x.iter().map(|xi| xi.d(n)).collect(),
            j10: (0..n).map(|j| u.d(j)).collect(),
            j11: u.d(n),
        }
    }

    pub fn primal(&self) -> JacobianBlocks<f64> {
        JacobianBlocks {
            j00: self
                .j00
                .iter()
                .map(|r| r.iter().map(Scalar::re).collect())
                .collect(),
            j01: self.j01.iter().map(Scalar::re).collect(),
            j10: self.j10.iter().map(Scalar::re).collect(),
            j11: self.j11.re(),
        }
    }
}

/// Evaluates a base map on duals seeded in `(x, u)` and returns the image
/// with its Jacobian.
pub fn base_map_with_jacobian<M: BaseMap + ?Sized, S: Scalar>(
    map: &M,
    x: &[S],
    u: &S,
    t: f64,
    h: f64,
) -> Result<(Vec<S>, S, JacobianBlocks<S>)> {
    let n = x.len();
    let xd: Vec<Dual<S>> = x
        .iter()
        .enumerate()
        .map(|(i, c)| Dual::variable(c.clone(), i, n + 1))
        .collect();
    let ud = Dual::variable(u.clone(), n, n + 1);
    let (xb, ub) = map.base_map(&xd, &ud, t, h)?;
    let jac = JacobianBlocks::from_duals(&xb, &ub);
    Ok((xb.into_iter().map(|v| v.re).collect(), ub.re, jac))
}

/// `p̄ᵀ = (J10 + p J11) (J00 + J01 pᵀ)⁻¹`.
pub fn prolong_momentum<S: Scalar>(jac: &JacobianBlocks<S>, p: &[S]) -> Result<Vec<S>> {
    let n = jac.dim();
    if p.len() != n {
        return Err(Error::Dimension {
            expected: n,
            got: p.len(),
        });
    }
    // M[i][j] = J00[i][j] + J01[i] p[j]; solve Mᵀ p̄ = r.
    let mut mt: Vec<Vec<S>> = (0..n)
        .map(|j| {
            (0..n)
                .map(|i| jac.j00[i][j].clone() + jac.j01[i].clone() * p[j].clone())
                .collect()
        })
        .collect();
    let mut r: Vec<S> = (0..n)
        .map(|j| jac.j10[j].clone() + p[j].clone() * jac.j11.clone())
        .collect();
    check_conditioning(&mt)?;
    for v in mt.iter().flatten().chain(&r) {
        if !v.re().is_finite() {
            return Err(Error::non_finite("prolongation Jacobian"));
        }
    }
    // Gaussian elimination with partial pivoting on the primal parts.
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&a, &b| mt[a][col].re().abs().total_cmp(&mt[b][col].re().abs()))
            .expect("non-empty range");
        mt.swap(col, piv);
        r.swap(col, piv);
        for row in col + 1..n {
            let f = mt[row][col].clone() / mt[col][col].clone();
            let (upper, lower) = mt.split_at_mut(row);
            for (target, pivot) in lower[0][col..n].iter_mut().zip(&upper[col][col..n]) {
                *target = target.clone() - pivot.clone() * f.clone();
            }
            r[row] = r[row].clone() - r[col].clone() * f;
        }
    }
    let mut out = vec![S::zero(); n];
    for row in (0..n).rev() {
        let mut acc = r[row].clone();
        for k in row + 1..n {
            acc = acc - mt[row][k].clone() * out[k].clone();
        }
        out[row] = acc / mt[row][row].clone();
    }
    Ok(out)
}

fn check_conditioning<S: Scalar>(mt: &[Vec<S>]) -> Result<()> {
    let n = mt.len();
    let m = DMatrix::from_fn(n, n, |i, j| mt[i][j].re());
    let norm = m.norm();
    let sigma_min = if n == 1 {
        m[(0, 0)].abs()
    } else {
        m.singular_values().min()
    };
    if sigma_min.is_nan() || sigma_min < PROLONGATION_SINGULAR_TOL * norm.max(1.0) {
        return Err(Error::ProlongationSingular { sigma_min, norm });
    }
    Ok(())
}

/// The contact lift of a base map: `(x̄, ū)` from the base map and `p̄` by
/// prolongation through its exact (dual-number) Jacobian.
#[derive(Clone, Debug)]
pub struct ProlongedStep<M>(pub M);

impl<M: BaseMap> FlowMap for ProlongedStep<M> {
    fn label(&self) -> String {
        format!("lifted({})", self.0.label())
    }
    fn map<S: Scalar>(&self, z: &JetPoint<S>, t: f64, h: f64) -> Result<JetPoint<S>> {
        let (x, u, jac) = base_map_with_jacobian(&self.0, &z.x, &z.u, t, h)?;
        let p = prolong_momentum(&jac, &z.p)?;
        Ok(JetPoint { x, u, p })
    }
    /// `(ψ*α)(∂_u) = J11 − p̄·J01`.
    fn analytic_sigma(&self, z: &JetPoint, t: f64, h: f64) -> Option<f64> {
        let (_, _, jac) = base_map_with_jacobian(&self.0, &z.x, &z.u, t, h).ok()?;
        let pbar = prolong_momentum(&jac, &z.p).ok()?;
        let w = jac.j11 - pbar.iter().zip(&jac.j01).map(|(a, b)| a * b).sum::<f64>();
        (w > 0.0).then(|| w.ln())
    }
}

fn axpy<S: Scalar>(y: &[S], terms: &[(f64, &[S])], h: f64) -> Vec<S> {
    y.iter()
        .enumerate()
        .map(|(i, yi)| {
            terms
                .iter()
                .filter(|(c, _)| *c != 0.0)
                .fold(yi.clone(), |acc, (c, k)| acc + k[i].clone() * (c * h))
        })
        .collect()
}

fn base_rhs<Y: BaseVectorField + ?Sized, S: Scalar>(y: &Y, state: &[S], t: f64) -> Result<Vec<S>> {
    let n = state.len() - 1;
    let (g, f) = y.eval(&state[..n], &state[n], t);
    let mut out = g;
    out.push(-f);
    if let Some(i) = out.iter().position(|v| !v.re().is_finite()) {
        return Err(Error::non_finite(if i < n {
            format!("base field component g{}", i + 1)
        } else {
            "base field component f".into()
        }));
    }
    Ok(out)
}

/// One classical RK4 step of the base field.
pub fn rk4_base_step<Y: BaseVectorField + ?Sized, S: Scalar>(
    y: &Y,
    x: &[S],
    u: &S,
    t: f64,
    h: f64,
) -> Result<(Vec<S>, S)> {
    let mut s: Vec<S> = x.to_vec();
    s.push(u.clone());
    let out = rk4_generic(|tt, v: &[S]| base_rhs(y, v, tt), &s, t, h)?;
    let n = x.len();
    Ok((out[..n].to_vec(), out[n].clone()))
}

/// One RK4 base step together with its Jacobian blocks.
pub fn rk4_base_step_with_jacobian<Y: BaseVectorField>(
    y: &Y,
    x: &[f64],
    u: f64,
    t: f64,
    h: f64,
) -> Result<(Vec<f64>, f64, JacobianBlocks)> {
    base_map_with_jacobian(&Rk4Base(y), x, &u, t, h)
}

fn rk4_generic<S: Scalar>(
    f: impl Fn(f64, &[S]) -> Result<Vec<S>>,
    y: &[S],
    t: f64,
    h: f64,
) -> Result<Vec<S>> {
    if h == 0.0 {
        return Ok(y.to_vec());
    }
    let k1 = f(t, y)?;
    let k2 = f(t + 0.5 * h, &axpy(y, &[(0.5, &k1)], h))?;
    let k3 = f(t + 0.5 * h, &axpy(y, &[(0.5, &k2)], h))?;
    let k4 = f(t + h, &axpy(y, &[(1.0, &k3)], h))?;
    Ok(axpy(
        y,
        &[
            (1.0 / 6.0, &k1),
            (1.0 / 3.0, &k2),
            (1.0 / 3.0, &k3),
            (1.0 / 6.0, &k4),
        ],
        h,
    ))
}

/// Classical RK4 as a base map.
#[derive(Clone, Debug)]
pub struct Rk4Base<Y>(pub Y);

impl<Y: BaseVectorField> BaseMap for Rk4Base<Y> {
    fn label(&self) -> String {
        "rk4".into()
    }
    fn base_map<S: Scalar>(&self, x: &[S], u: &S, t: f64, h: f64) -> Result<(Vec<S>, S)> {
        rk4_base_step(&self.0, x, u, t, h)
    }
}

impl<Y: BaseVectorField + ?Sized> BaseVectorField for &Y {
    fn eval<S: Scalar>(&self, x: &[S], u: &S, t: f64) -> (Vec<S>, S) {
        (**self).eval(x, u, t)
    }
}

/// Lifted RK4: RK4 on the base, momenta by prolongation.
pub type LiftedRk4<Y> = ProlongedStep<Rk4Base<Y>>;

pub fn lifted_rk4<Y: BaseVectorField>(field: Y) -> LiftedRk4<Y> {
    ProlongedStep(Rk4Base(field))
}

/// Relative and absolute tolerances of the adaptive integrator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub rtol: f64,
    pub atol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            rtol: 1e-12,
            atol: 1e-14,
        }
    }
}

impl Tolerance {
    pub fn new(rtol: f64, atol: f64) -> Result<Self> {
        if !(rtol > 0.0 && atol > 0.0) {
            return Err(Error::Precondition(format!(
                "tolerances must be positive (rtol = {rtol}, atol = {atol})"
            )));
        }
        Ok(Self { rtol, atol })
    }
}

/// Vector field of an autonomous or time-dependent ODE `ẏ = F(t, y)`.
pub trait OdeRhs: Send + Sync {
    fn rhs<S: Scalar>(&self, t: f64, y: &[S]) -> Result<Vec<S>>;
}

/// The contact ODE of `H` on flat `(x, u, p)` vectors.
#[derive(Clone, Debug)]
pub struct ContactOde<H>(pub H);

impl<H: Hamiltonian> OdeRhs for ContactOde<H> {
    fn rhs<S: Scalar>(&self, t: f64, y: &[S]) -> Result<Vec<S>> {
        let n = (y.len() - 1) / 2;
        let z = JetPoint::from_slice(n, y)?;
        Ok(contact_vector_field(&self.0, &z, t)?.to_vec())
    }
}

/// The base ODE `ẋ = g`, `u̇ = −f` on flat `(x, u)` vectors.
#[derive(Clone, Debug)]
pub struct BaseOde<Y>(pub Y);

impl<Y: BaseVectorField> OdeRhs for BaseOde<Y> {
    fn rhs<S: Scalar>(&self, t: f64, y: &[S]) -> Result<Vec<S>> {
        base_rhs(&self.0, y, t)
    }
}

// Dormand–Prince 5(4).
const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [&[f64]; 7] = [
    &[],
    &[0.2],
    &[3.0 / 40.0, 9.0 / 40.0],
    &[44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0],
    &[
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
    ],
    &[
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
    ],
    &[
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
/// Order of the embedded (error-estimating) member of the pair.
const EMBEDDED_ORDER: f64 = 4.0;
const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 5.0;
const MAX_STEPS: usize = 5_000_000;

/// Outcome of one attempted embedded step.
#[derive(Clone, Debug)]
pub struct Dp5Attempt<S> {
    pub y: Vec<S>,
    /// Scaled RMS error estimate; the step is accepted iff `≤ 1`.
    pub error: f64,
    pub accepted: bool,
    /// Suggested next step (same sign as the attempted one).
    pub h_next: f64,
}

/// One Dormand–Prince 5(4) attempt from `(t, y)` with step `h`. The error
/// estimate and step control use primal parts only, so tangents ride along
/// without influencing the step sequence.
pub fn dp5_attempt<R: OdeRhs + ?Sized, S: Scalar>(
    rhs: &R,
    t: f64,
    y: &[S],
    h: f64,
    tol: Tolerance,
) -> Result<Dp5Attempt<S>> {
    let rejected = |y_new: Vec<S>| Dp5Attempt {
        y: y_new,
        error: f64::INFINITY,
        accepted: false,
        h_next: h * MIN_FACTOR,
    };
    let mut k: Vec<Vec<S>> = Vec::with_capacity(7);
    k.push(rhs.rhs(t, y)?);
    for s in 1..7 {
        let terms: Vec<(f64, &[S])> = A[s]
            .iter()
            .zip(&k)
            .map(|(&a, ks)| (a, ks.as_slice()))
            .collect();
        let ys = axpy(y, &terms, h);
        match rhs.rhs(t + C[s] * h, &ys) {
            Ok(ks) => k.push(ks),
            Err(Error::NonFinite { .. }) => return Ok(rejected(ys)),
            Err(e) => return Err(e),
        }
    }
    let terms: Vec<(f64, &[S])> = A[6]
        .iter()
        .zip(&k)
        .map(|(&a, ks)| (a, ks.as_slice()))
        .collect();
    let y_new = axpy(y, &terms, h);
    let mut acc = 0.0;
    for i in 0..y.len() {
        let e: f64 = E.iter().zip(&k).map(|(&c, ks)| c * ks[i].re()).sum::<f64>() * h;
        let sc = tol.atol + tol.rtol * y[i].re().abs().max(y_new[i].re().abs());
        acc += (e / sc).powi(2);
    }
    let error = (acc / y.len() as f64).sqrt();
    if !error.is_finite() || y_new.iter().any(|v| !v.re().is_finite()) {
        return Ok(rejected(y_new));
    }
    let factor = if error == 0.0 {
        MAX_FACTOR
    } else {
        (SAFETY * error.powf(-1.0 / (EMBEDDED_ORDER + 1.0))).clamp(MIN_FACTOR, MAX_FACTOR)
    };
    Ok(Dp5Attempt {
        y: y_new,
        error,
        accepted: error <= 1.0,
        h_next: h * factor,
    })
}

/// `0.01·‖y‖/‖f‖` in the tolerance-weighted norm, or `10⁻⁶` when either
/// norm is tiny.
fn initial_step<R: OdeRhs + ?Sized, S: Scalar>(
    rhs: &R,
    t: f64,
    y: &[S],
    tol: Tolerance,
) -> Result<f64> {
    let f = rhs.rhs(t, y)?;
    let norm = |v: &[S]| {
        let acc: f64 = v
            .iter()
            .zip(y)
            .map(|(a, b)| (a.re() / (tol.atol + tol.rtol * b.re().abs())).powi(2))
            .sum();
        (acc / v.len() as f64).sqrt()
    };
    let (d0, d1) = (norm(y), norm(&f));
    Ok(if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    })
}

/// Integrates from `t0` to `t1` (either direction), landing on `t1` exactly.
/// `h_init` seeds the step size; the last accepted suggestion is returned.
pub fn dp5_integrate<R: OdeRhs + ?Sized, S: Scalar>(
    rhs: &R,
    t0: f64,
    y0: &[S],
    t1: f64,
    tol: Tolerance,
    h_init: Option<f64>,
) -> Result<(Vec<S>, f64)> {
    let span = t1 - t0;
    if span == 0.0 {
        return Ok((y0.to_vec(), h_init.unwrap_or(0.0)));
    }
    let dir = span.signum();
    let min_h = 1e-14 * span.abs();
    let first = match h_init {
        Some(h) => h.abs(),
        None => initial_step(rhs, t0, y0, tol)?,
    };
    let mut h = first.min(span.abs()) * dir;
    let mut t = t0;
    let mut y = y0.to_vec();
    let mut last_suggest = h;
    for _ in 0..MAX_STEPS {
        let remaining = t1 - t;
        if remaining * dir <= 0.0 {
            return Ok((y, last_suggest));
        }
        let last = h.abs() >= remaining.abs();
        let step = if last { remaining } else { h };
        let att = dp5_attempt(rhs, t, &y, step, tol)?;
        if att.accepted {
            t = if last { t1 } else { t + step };
            y = att.y;
            last_suggest = att.h_next;
            h = att.h_next;
            if last {
                return Ok((y, last_suggest));
            }
        } else {
            h = att.h_next;
            if h.abs() < min_h {
                return Err(Error::StepUnderflow { t, h });
            }
        }
    }
    Err(Error::StepUnderflow { t, h })
}

/// Solution of an ODE sampled at the requested times, each hit exactly by
/// sub-stepping. `times` must be monotone in one direction from `t0`.
pub fn reference_solve<R: OdeRhs + ?Sized>(
    rhs: &R,
    y0: &[f64],
    t0: f64,
    times: &[f64],
    tol: Tolerance,
) -> Result<Vec<Vec<f64>>> {
    Tolerance::new(tol.rtol, tol.atol)?;
    let mut out = Vec::with_capacity(times.len());
    let mut t = t0;
    let mut y = y0.to_vec();
    let mut h = None;
    for &ts in times {
        let (yn, hn) = dp5_integrate(rhs, t, &y, ts, tol, h)?;
        if hn != 0.0 {
            h = Some(hn);
        }
        y = yn;
        t = ts;
        out.push(y.clone());
    }
    Ok(out)
}

/// Reference contact flow of `H` from `z0` at `t0` to each sample time.
pub fn reference_contact_flow<H: Hamiltonian>(
    ham: &H,
    z0: &JetPoint,
    t0: f64,
    times: &[f64],
    tol: Tolerance,
) -> Result<Vec<JetPoint>> {
    let n = z0.dim();
    reference_solve(&ContactOde(ham), &z0.to_vec(), t0, times, tol)?
        .into_iter()
        .map(|v| JetPoint::from_slice(n, &v))
        .collect()
}

impl<H: Hamiltonian + ?Sized> Hamiltonian for &H {
    fn eval<S: Scalar>(&self, x: &[S], u: &S, p: &[S], t: f64) -> S {
        (**self).eval(x, u, p, t)
    }
}

/// Adaptive Dormand–Prince integration over the whole step as a base map.
#[derive(Clone, Debug)]
pub struct Dp5Base<Y> {
    pub field: Y,
    pub tol: Tolerance,
}

impl<Y: BaseVectorField> BaseMap for Dp5Base<Y> {
    fn label(&self) -> String {
        format!("dp5(rtol={:e})", self.tol.rtol)
    }
    fn base_map<S: Scalar>(&self, x: &[S], u: &S, t: f64, h: f64) -> Result<(Vec<S>, S)> {
        let mut s = x.to_vec();
        s.push(u.clone());
        let (y, _) = dp5_integrate(&BaseOde(&self.field), t, &s, t + h, self.tol, None)?;
        let n = x.len();
        Ok((y[..n].to_vec(), y[n].clone()))
    }
}

/// Lifted adaptive method: embedded RK over each outer step, momenta by
/// prolongation through the Jacobian of the whole sub-stepped map.
pub type LiftedAdaptive<Y> = ProlongedStep<Dp5Base<Y>>;

pub fn lifted_adaptive<Y: BaseVectorField>(field: Y, tol: Tolerance) -> LiftedAdaptive<Y> {
    ProlongedStep(Dp5Base { field, tol })
}

/// Result of [`adaptive_base_step`].
#[derive(Clone, Debug)]
pub struct AdaptiveBaseStep {
    pub x: Vec<f64>,
    pub u: f64,
    pub jacobian: JacobianBlocks,
    pub h_next: f64,
    pub accepted: bool,
}

/// A single attempted embedded step of the base field with its Jacobian.
pub fn adaptive_base_step<Y: BaseVectorField>(
    field: &Y,
    x: &[f64],
    u: f64,
    t: f64,
    h_try: f64,
    tol: Tolerance,
) -> Result<AdaptiveBaseStep> {
    Tolerance::new(tol.rtol, tol.atol)?;
    let n = x.len();
    let mut s: Vec<Dual<f64>> = x
        .iter()
        .enumerate()
        .map(|(i, &c)| Dual::variable(c, i, n + 1))
        .collect();
    s.push(Dual::variable(u, n, n + 1));
    let att = dp5_attempt(&BaseOde(field), t, &s, h_try, tol)?;
    if !att.accepted && h_try.abs() * MIN_FACTOR < 1e-14 * h_try.abs().max(1.0) {
        return Err(Error::StepUnderflow { t, h: h_try });
    }
    let jacobian = JacobianBlocks::from_duals(&att.y[..n], &att.y[n]);
    Ok(AdaptiveBaseStep {
        x: att.y[..n].iter().map(|v| v.re).collect(),
        u: att.y[n].re,
        jacobian,
        h_next: att.h_next,
        accepted: att.accepted,
    })
}

/// Classical RK4 on the full `(2n+1)`-dimensional contact ODE. Not a
/// contactomorphism; kept as a baseline.
#[derive(Clone, Debug)]
pub struct FullRk4<H>(pub H);

impl<H: Hamiltonian> FlowMap for FullRk4<H> {
    fn label(&self) -> String {
        "full-rk4".into()
    }
    fn map<S: Scalar>(&self, z: &JetPoint<S>, t: f64, h: f64) -> Result<JetPoint<S>> {
        let n = z.dim();
        let ode = ContactOde(&self.0);
        let y = rk4_generic(|tt, v: &[S]| ode.rhs(tt, v), &z.to_vec(), t, h)?;
        JetPoint::from_slice(n, &y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    struct Rotation;
    impl BaseVectorField for Rotation {
        fn eval<S: Scalar>(&self, x: &[S], u: &S, _t: f64) -> (Vec<S>, S) {
            // ẋ = u, u̇ = −x
            (vec![u.clone()], x[0].clone())
        }
    }

    struct Decay;
    impl BaseVectorField for Decay {
        fn eval<S: Scalar>(&self, _x: &[S], u: &S, _t: f64) -> (Vec<S>, S) {
            (vec![S::zero()], u.clone())
        }
    }

    #[test]
    fn prolongation_examples() {
        let id = JacobianBlocks::<f64>::identity(2);
        assert_eq!(
            prolong_momentum(&id, &[0.3, -2.0]).unwrap(),
            vec![0.3, -2.0]
        );
        let grad = JacobianBlocks {
            j00: vec![vec![1.0]],
            j01: vec![0.0],
            j10: vec![-1.5],
            j11: 1.0,
        };
        assert_eq!(prolong_momentum(&grad, &[2.0]).unwrap(), vec![0.5]);
        let swap = JacobianBlocks {
            j00: vec![vec![0.0]],
            j01: vec![1.0],
            j10: vec![1.0],
            j11: 0.0,
        };
        assert_eq!(prolong_momentum(&swap, &[2.0]).unwrap(), vec![0.5]);
        assert!(matches!(
            prolong_momentum(&swap, &[0.0]),
            Err(Error::ProlongationSingular { .. })
        ));
    }

    #[test]
    fn rk4_matches_taylor_of_rotation() {
        let h = 0.1;
        let (x, u) = rk4_base_step(&Rotation, &[1.0], &0.5, 0.0, h).unwrap();
        // Degree-4 Taylor polynomial of the rotation matrix.
        let c = 1.0 - h * h / 2.0 + h.powi(4) / 24.0;
        let s = h - h.powi(3) / 6.0;
        assert_relative_eq!(x[0], c * 1.0 + s * 0.5, epsilon = 1e-15);
        assert_relative_eq!(u, -s * 1.0 + c * 0.5, epsilon = 1e-15);
    }

    #[test]
    fn adaptive_decay_to_one() {
        let tol = Tolerance::new(1e-10, 1e-12).unwrap();
        let (y, _) = dp5_integrate(&BaseOde(Decay), 0.0, &[0.0, 1.0], 1.0, tol, None).unwrap();
        assert!((y[1] - (-1.0f64).exp()).abs() < 1e-9);
        let step = adaptive_base_step(&Decay, &[0.0], 1.0, 0.0, 1e-3, tol).unwrap();
        assert!(step.accepted);
    }

    #[test]
    fn zero_step_is_identity() {
        let l = lifted_rk4(Rotation);
        let z = JetPoint::scalar(0.3, 0.2, -1.0);
        use crate::contact::ContactStep;
        assert_eq!(l.apply(&z, 0.0, 0.0).unwrap(), z);
    }
}
