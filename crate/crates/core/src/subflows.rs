//! Closed-form contact subflows.
//!
//! Each type is the exact time-`h` flow of one contact Hamiltonian (or, for
//! [`LegendreMap`] and [`GradientStep`], a fixed strict map that ignores the
//! duration). All of them are generic over [`Scalar`] so their Jacobians come
//! from dual-number evaluation.

use crate::algebra::coeff::Coeff;
use crate::algebra::poly::FloatHamiltonian;
use crate::contact::{FlowMap, JetPoint};
use crate::dual::{Dual, Scalar};
use crate::error::{Error, Result};

/// A smooth real function of one block of variables (`x`, `p` or `u`).
pub trait ScalarField: Send + Sync {
    fn eval<S: Scalar>(&self, v: &[S]) -> S;

    /// Value and gradient at `v`, by default from one dual-number pass.
    fn value_and_gradient<S: Scalar>(&self, v: &[S]) -> (S, Vec<S>) {
        let m = v.len();
        let d: Vec<Dual<S>> = v
            .iter()
            .enumerate()
            .map(|(i, c)| Dual::variable(c.clone(), i, m))
            .collect();
        let out = self.eval(&d);
        let grad = (0..m).map(|i| out.d(i)).collect();
        (out.re, grad)
    }

    fn describe(&self) -> String {
        "f".into()
    }
}

/// Constant function.
impl ScalarField for f64 {
    fn eval<S: Scalar>(&self, _v: &[S]) -> S {
        S::cst(*self)
    }
    fn value_and_gradient<S: Scalar>(&self, v: &[S]) -> (S, Vec<S>) {
        (S::cst(*self), vec![S::zero(); v.len()])
    }
    fn describe(&self) -> String {
        format!("{self}")
    }
}

/// Value and gradient of `f` at `v`.
pub fn value_and_gradient<F: ScalarField, S: Scalar>(f: &F, v: &[S]) -> (S, Vec<S>) {
    f.value_and_gradient(v)
}

/// Sum of `c·Π vᵢ^eᵢ` over flattened monomials.
#[derive(Clone, Debug, Default)]
struct Monomials(Vec<(f64, Vec<u32>)>);

impl Monomials {
    fn eval<S: Scalar>(&self, v: &[S]) -> S {
        self.0.iter().fold(S::zero(), |acc, (c, e)| {
            let mut term = S::cst(*c);
            for (vi, &k) in v.iter().zip(e) {
                match k {
                    0 => {}
                    1 => term = term * vi.clone(),
                    2 => term = term * vi.square(),
                    _ => term = term * vi.powi(k as i32),
                }
            }
            acc + term
        })
    }

    fn derivative(&self, i: usize) -> Self {
        Self(
            self.0
                .iter()
                .filter(|(_, e)| e[i] > 0)
                .map(|(c, e)| {
                    let mut e = e.clone();
                    e[i] -= 1;
                    (c * f64::from(e[i] + 1), e)
                })
                .collect(),
        )
    }
}

/// Which block of jet coordinates a [`PolyField`] reads.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    Position,
    Momentum,
    Fiber,
}

/// A polynomial restricted to one block of variables.
#[derive(Clone, Debug)]
pub struct PolyField {
    poly: FloatHamiltonian,
    slot: Slot,
    terms: Monomials,
    grad: Vec<Monomials>,
}

impl PolyField {
    pub fn new(poly: FloatHamiltonian, slot: Slot) -> Result<Self> {
        let ok = poly.terms().all(|(alpha, f)| {
            let p_free = alpha.iter().all(|&a| a == 0);
            f.terms().all(|(m, _)| {
                let x_free = m.x.iter().all(|&a| a == 0);
                match slot {
                    Slot::Position => p_free && m.u == 0,
                    Slot::Momentum => x_free && m.u == 0,
                    Slot::Fiber => p_free && x_free,
                }
            })
        });
        if !ok {
            return Err(Error::Construction(format!(
                "{poly} must depend on the {} variables only",
                match slot {
                    Slot::Position => "x",
                    Slot::Momentum => "p",
                    Slot::Fiber => "u",
                }
            )));
        }
        let mut flat = Vec::new();
        for (alpha, f) in poly.terms() {
            for (m, c) in f.terms() {
                let e = match slot {
                    Slot::Position => m.x.clone(),
                    Slot::Momentum => alpha.clone(),
                    Slot::Fiber => vec![m.u],
                };
                flat.push((c.to_f64(), e));
            }
        }
        let terms = Monomials(flat);
        let width = if slot == Slot::Fiber { 1 } else { poly.dim() };
        let grad = (0..width).map(|i| terms.derivative(i)).collect();
        Ok(Self {
            poly,
            slot,
            terms,
            grad,
        })
    }

    pub fn dim(&self) -> usize {
        self.poly.dim()
    }

    pub fn poly(&self) -> &FloatHamiltonian {
        &self.poly
    }

    pub fn slot(&self) -> Slot {
        self.slot
    }
}

impl ScalarField for PolyField {
    fn eval<S: Scalar>(&self, v: &[S]) -> S {
        self.terms.eval(v)
    }
    fn value_and_gradient<S: Scalar>(&self, v: &[S]) -> (S, Vec<S>) {
        (
            self.terms.eval(v),
            self.grad.iter().map(|g| g.eval(v)).collect(),
        )
    }
    fn describe(&self) -> String {
        self.poly.to_string()
    }
}

fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter()
        .zip(b)
        .fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

fn blow_up(label: String, critical_time: f64, requested: f64) -> Error {
    Error::BlowUp {
        label,
        critical_time,
        requested,
    }
}

/// `Σ_k z^k/(k + shift)!`, the entire functions behind the ratios below.
fn phi_series<S: Scalar>(z: &S, shift: u32) -> S {
    let mut coeffs = [0.0; 16];
    let mut fact: f64 = (1..=shift).map(f64::from).product();
    for (k, c) in coeffs.iter_mut().enumerate() {
        if k > 0 {
            fact *= f64::from(k as u32 + shift);
        }
        *c = 1.0 / fact;
    }
    coeffs
        .iter()
        .rev()
        .fold(S::zero(), |acc, &c| acc * z.clone() + c)
}

/// `(eᶻ − 1)/z`, accurate near zero.
pub fn expm1_ratio<S: Scalar>(z: &S) -> S {
    if z.re().abs() < 0.5 {
        phi_series(z, 1)
    } else {
        (z.exp() - 1.0) / z.clone()
    }
}

/// `(eᶻ − 1 − z)/z²`, accurate near zero.
pub fn expm1_ratio2<S: Scalar>(z: &S) -> S {
    if z.re().abs() < 0.5 {
        phi_series(z, 2)
    } else {
        (z.exp() - 1.0 - z.clone()) / z.square()
    }
}

/// Identity map.
#[derive(Clone, Copy, Debug, Default)]
pub struct Identity;

impl FlowMap for Identity {
    fn label(&self) -> String {
        "identity".into()
    }
    fn map<S: Scalar>(&self, z: &JetPoint<S>, _t: f64, _h: f64) -> Result<JetPoint<S>> {
        Ok(z.clone())
    }
    fn is_strict(&self) -> bool {
        true
    }
}

/// Flow of `H = T(p)`: `x̄ = x + h∇T`, `ū = u + h(p·∇T − T)`.
#[derive(Clone, Debug)]
pub struct Drift<F> {
    pub kinetic: F,
}

impl<F: ScalarField> Drift<F> {
    pub fn new(kinetic: F) -> Self {
        Self { kinetic }
    }
}

impl<F: ScalarField> FlowMap for Drift<F> {
    fn label(&self) -> String {
        format!("drift(T={})", self.kinetic.describe())
    }
    fn map<S: Scalar>(&self, z: &JetPoint<S>, _t: f64, h: f64) -> Result<JetPoint<S>> {
        let (t, g) = value_and_gradient(&self.kinetic, &z.p);
        let x =
            z.x.iter()
                .zip(&g)
                .map(|(x, gi)| x.clone() + gi.clone() * h)
                .collect();
        let u = z.u.clone() + (dot(&z.p, &g) - t) * h;
        Ok(JetPoint {
            x,
            u,
            p: z.p.clone(),
        })
    }
    fn is_strict(&self) -> bool {
        true
    }
}

/// Flow of `H = V(x)`: `p̄ = p − h∇V`, `ū = u − hV`.
#[derive(Clone, Debug)]
pub struct Kick<F> {
    pub potential: F,
}

impl<F: ScalarField> Kick<F> {
    pub fn new(potential: F) -> Self {
        Self { potential }
    }
}

impl<F: ScalarField> FlowMap for Kick<F> {
    fn label(&self) -> String {
        format!("kick(V={})", self.potential.describe())
    }
    fn map<S: Scalar>(&self, z: &JetPoint<S>, _t: f64, h: f64) -> Result<JetPoint<S>> {
        let (v, g) = value_and_gradient(&self.potential, &z.x);
        let p =
            z.p.iter()
                .zip(&g)
                .map(|(p, gi)| p.clone() - gi.clone() * h)
                .collect();
        Ok(JetPoint {
            x: z.x.clone(),
            u: z.u.clone() - v * h,
            p,
        })
    }
    fn is_strict(&self) -> bool {
        true
    }
}

/// Flow of `H = ½(|p|² + |x|²)`: a rotation of each `(xᵢ, pᵢ)` by angle `h`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Harmonic;

impl FlowMap for Harmonic {
    fn label(&self) -> String {
        "harmonic".into()
    }
    fn map<S: Scalar>(&self, z: &JetPoint<S>, _t: f64, h: f64) -> Result<JetPoint<S>> {
        let (c, s) = (h.cos(), h.sin());
        let (c2, s2) = ((2.0 * h).cos(), (2.0 * h).sin());
        let mut x = Vec::with_capacity(z.dim());
        let mut p = Vec::with_capacity(z.dim());
        let mut u = z.u.clone();
        for (xi, pi) in z.x.iter().zip(&z.p) {
            x.push(xi.clone() * c + pi.clone() * s);
            p.push(pi.clone() * c - xi.clone() * s);
            u = u
                + (pi.square() - xi.square()) * (0.25 * s2)
                + xi.clone() * pi.clone() * (0.5 * (c2 - 1.0));
        }
        Ok(JetPoint { x, u, p })
    }
    fn is_strict(&self) -> bool {
        true
    }
}

/// `(x, u, p) ↦ (p + η, u − x·p + f(p) + k, −x + ∇f(p))`, independent of `h`.
#[derive(Clone, Debug)]
pub struct LegendreMap<F> {
    pub f: F,
    pub eta: Vec<f64>,
    pub k: f64,
}

impl<F: ScalarField> FlowMap for LegendreMap<F> {
    fn label(&self) -> String {
        format!("legendre(f={})", self.f.describe())
    }
    fn map<S: Scalar>(&self, z: &JetPoint<S>, _t: f64, _h: f64) -> Result<JetPoint<S>> {
        if self.eta.len() != z.dim() {
            return Err(Error::Dimension {
                expected: z.dim(),
                got: self.eta.len(),
            });
        }
        let (fv, g) = value_and_gradient(&self.f, &z.p);
        let x =
            z.p.iter()
                .zip(&self.eta)
                .map(|(p, e)| p.clone() + *e)
                .collect();
        let u = z.u.clone() - dot(&z.x, &z.p) + fv + self.k;
        let p = z.x.iter().zip(g).map(|(x, gi)| gi - x.clone()).collect();
        Ok(JetPoint { x, u, p })
    }
    fn is_strict(&self) -> bool {
        true
    }
}

/// `(x, u, p) ↦ (x, u − f(x), p − ∇f(x))`, independent of `h`.
#[derive(Clone, Debug)]
pub struct GradientStep<F> {
    pub f: F,
}

impl<F: ScalarField> FlowMap for GradientStep<F> {
    fn label(&self) -> String {
        format!("gradient(f={})", self.f.describe())
    }
    fn map<S: Scalar>(&self, z: &JetPoint<S>, _t: f64, _h: f64) -> Result<JetPoint<S>> {
        let (fv, g) = value_and_gradient(&self.f, &z.x);
        Ok(JetPoint {
            x: z.x.clone(),
            u: z.u.clone() - fv,
            p: z.p.iter().zip(g).map(|(p, gi)| p.clone() - gi).collect(),
        })
    }
    fn is_strict(&self) -> bool {
        true
    }
}

/// Flow of `H = γu`: `ū = u e^{−γh}`, `p̄ = p e^{−γh}`, `σ = −γh`.
#[derive(Clone, Copy, Debug)]
pub struct ReebScaling {
    pub gamma: f64,
}

impl FlowMap for ReebScaling {
    fn label(&self) -> String {
        format!("reeb(gamma={})", self.gamma)
    }
    fn map<S: Scalar>(&self, z: &JetPoint<S>, _t: f64, h: f64) -> Result<JetPoint<S>> {
        let e = (-self.gamma * h).exp();
        Ok(JetPoint {
            x: z.x.clone(),
            u: z.u.clone() * e,
            p: z.p.iter().map(|p| p.clone() * e).collect(),
        })
    }
    fn analytic_sigma(&self, _z: &JetPoint, _t: f64, h: f64) -> Option<f64> {
        Some(-self.gamma * h)
    }
}

/// Flow of `H = c(x) u²`: with `w = 1 + c u h`, `ū = u/w`,
/// `p̄ = (p − ∇c u² h)/w²`, `σ = −2 ln w`.
#[derive(Clone, Debug)]
pub struct QuadU<F> {
    pub c: F,
}

impl QuadU<f64> {
    pub fn constant(c: f64) -> Self {
        Self { c }
    }
}

impl<F: ScalarField> QuadU<F> {
    fn denominator(&self, z: &JetPoint, h: f64) -> Result<f64> {
        let c: f64 = self.c.eval(&z.x);
        let w = 1.0 + c * z.u * h;
        if w <= 0.0 || !w.is_finite() {
            return Err(blow_up(FlowMap::label(self), -1.0 / (c * z.u), h));
        }
        Ok(w)
    }
}

impl<F: ScalarField> FlowMap for QuadU<F> {
    fn label(&self) -> String {
        format!("quadu(c={})", self.c.describe())
    }
    fn map<S: Scalar>(&self, z: &JetPoint<S>, _t: f64, h: f64) -> Result<JetPoint<S>> {
        self.denominator(&z.primal(), h)?;
        let (c, gc) = value_and_gradient(&self.c, &z.x);
        let w = c * z.u.clone() * h + 1.0;
        let w2 = w.square();
        let u2h = z.u.square() * h;
        Ok(JetPoint {
            x: z.x.clone(),
            u: z.u.clone() / w,
            p: z.p
                .iter()
                .zip(gc)
                .map(|(p, g)| (p.clone() - g * u2h.clone()) / w2.clone())
                .collect(),
        })
    }
    fn analytic_sigma(&self, z: &JetPoint, _t: f64, h: f64) -> Option<f64> {
        self.denominator(z, h).ok().map(|w| -2.0 * w.ln())
    }
}

/// Flow of `H = a(x) + b(x) u`: `x` is frozen and `(u, p)` solve a linear
/// system; `σ = −b h`.
#[derive(Clone, Debug)]
pub struct AffineU<A, B> {
    pub a: A,
    pub b: B,
}

impl<A: ScalarField, B: ScalarField> FlowMap for AffineU<A, B> {
    fn label(&self) -> String {
        format!("affineu(a={}; b={})", self.a.describe(), self.b.describe())
    }
    fn map<S: Scalar>(&self, z: &JetPoint<S>, _t: f64, h: f64) -> Result<JetPoint<S>> {
        let (a, ga) = value_and_gradient(&self.a, &z.x);
        let (b, gb) = value_and_gradient(&self.b, &z.x);
        let bh = b.clone() * h;
        let decay = (-bh.clone()).exp();
        // u(h) = u e^{−bh} − a h e1(−bh)
        let u = z.u.clone() * decay.clone() - a.clone() * h * expm1_ratio(&-bh.clone());
        // p(h) = e^{−bh} [p − ∇a h e1(bh) − ∇b (u h − a h² e2(bh))]
        let e1 = expm1_ratio(&bh) * h;
        let int_u = z.u.clone() * h - a * (h * h) * expm1_ratio2(&bh);
        let p = z
            .p
            .iter()
            .zip(ga.into_iter().zip(gb))
            .map(|(p, (da, db))| decay.clone() * (p.clone() - da * e1.clone() - db * int_u.clone()))
            .collect();
        Ok(JetPoint {
            x: z.x.clone(),
            u,
            p,
        })
    }
    fn analytic_sigma(&self, z: &JetPoint, _t: f64, h: f64) -> Option<f64> {
        let b: f64 = self.b.eval(&z.x);
        Some(-b * h)
    }
}

/// Flow of `H = Σ gᵢ(u) pᵢ`: `u` is frozen, `x̄ = x + g(u) h` and, with
/// `s = g′(u)·p`, `p̄ = p/(1 + s h)`, `σ = −ln(1 + s h)`.
#[derive(Clone, Debug)]
pub struct FiberTransport<F> {
    pub g: Vec<F>,
}

impl<F: ScalarField> FiberTransport<F> {
    fn denominator(&self, z: &JetPoint, h: f64) -> Result<f64> {
        if self.g.len() != z.dim() {
            return Err(Error::Dimension {
                expected: z.dim(),
                got: self.g.len(),
            });
        }
        let s: f64 = self
            .g
            .iter()
            .zip(&z.p)
            .map(|(g, p)| value_and_gradient(g, &[z.u]).1[0] * p)
            .sum();
        let w = 1.0 + s * h;
        if w <= 0.0 || !w.is_finite() {
            return Err(blow_up(FlowMap::label(self), -1.0 / s, h));
        }
        Ok(w)
    }
}

impl<F: ScalarField> FlowMap for FiberTransport<F> {
    fn label(&self) -> String {
        let parts: Vec<String> = self.g.iter().map(ScalarField::describe).collect();
        format!("transport(g=[{}])", parts.join(", "))
    }
    fn map<S: Scalar>(&self, z: &JetPoint<S>, _t: f64, h: f64) -> Result<JetPoint<S>> {
        self.denominator(&z.primal(), h)?;
        let mut s = S::zero();
        let mut x = Vec::with_capacity(z.dim());
        for ((g, xi), pi) in self.g.iter().zip(&z.x).zip(&z.p) {
            let (gv, dg) = value_and_gradient(g, std::slice::from_ref(&z.u));
            x.push(xi.clone() + gv * h);
            s = s + dg[0].clone() * pi.clone();
        }
        let w = s * h + 1.0;
        Ok(JetPoint {
            x,
            u: z.u.clone(),
            p: z.p.iter().map(|p| p.clone() / w.clone()).collect(),
        })
    }
    fn analytic_sigma(&self, z: &JetPoint, _t: f64, h: f64) -> Option<f64> {
        self.denominator(z, h).ok().map(|w| -w.ln())
    }
}

fn bernoulli_factor(
    sigma: f64,
    z: &JetPoint,
    tau: f64,
    label: impl FnOnce() -> String,
) -> Result<f64> {
    let p2: f64 = z.p.iter().map(|p| p * p).sum();
    let d2 = 1.0 + 2.0 * sigma * p2 * tau;
    if d2 <= 0.0 || !d2.is_finite() {
        return Err(blow_up(label(), -1.0 / (2.0 * sigma * p2), tau));
    }
    Ok(d2.sqrt())
}

/// Flow of `H = σ|p|²u`, with `D = √(1 + 2σ|p|²τ)`: `p̄ = p/D`, `ū = uD`,
/// `x̄ = x + 2σ p u τ`, `σ-increment = −ln D`.
#[derive(Clone, Copy, Debug)]
pub struct BernoulliB {
    pub sigma: f64,
}

impl FlowMap for BernoulliB {
    fn label(&self) -> String {
        format!("bernoulliB(sigma={})", self.sigma)
    }
    fn map<S: Scalar>(&self, z: &JetPoint<S>, _t: f64, tau: f64) -> Result<JetPoint<S>> {
        bernoulli_factor(self.sigma, &z.primal(), tau, || FlowMap::label(self))?;
        let p2 = dot(&z.p, &z.p);
        let d = (p2 * (2.0 * self.sigma * tau) + 1.0).sqrt();
        let k = z.u.clone() * (2.0 * self.sigma * tau);
        Ok(JetPoint {
            x: z.x
                .iter()
                .zip(&z.p)
                .map(|(x, p)| x.clone() + p.clone() * k.clone())
                .collect(),
            u: z.u.clone() * d.clone(),
            p: z.p.iter().map(|p| p.clone() / d.clone()).collect(),
        })
    }
    fn analytic_sigma(&self, z: &JetPoint, _t: f64, tau: f64) -> Option<f64> {
        bernoulli_factor(self.sigma, z, tau, String::new)
            .ok()
            .map(|d| -d.ln())
    }
}

/// Flow of `H = ½(1 + 2σu)|p|²`: `p̄ = p/D`, `ū = ((1 + 2σu)D − 1)/(2σ)`,
/// `x̄ = x + (1 + 2σu)pτ`, `σ-increment = −ln D`.
#[derive(Clone, Copy, Debug)]
pub struct BernoulliT {
    sigma: f64,
}

impl BernoulliT {
    /// `σ = 0` is rejected; that case is the drift with `T = ½|p|²`.
    pub fn new(sigma: f64) -> Result<Self> {
        if sigma == 0.0 {
            return Err(Error::Construction(
                "bernoulliT with sigma = 0 is the drift T = 0.5*p^2; use that instead".into(),
            ));
        }
        Ok(Self { sigma })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }
}

impl FlowMap for BernoulliT {
    fn label(&self) -> String {
        format!("bernoulliT(sigma={})", self.sigma)
    }
    fn map<S: Scalar>(&self, z: &JetPoint<S>, _t: f64, tau: f64) -> Result<JetPoint<S>> {
        bernoulli_factor(self.sigma, &z.primal(), tau, || FlowMap::label(self))?;
        let s2 = 2.0 * self.sigma;
        let d = (dot(&z.p, &z.p) * (s2 * tau) + 1.0).sqrt();
        let a = z.u.clone() * s2 + 1.0;
        Ok(JetPoint {
            x: z.x
                .iter()
                .zip(&z.p)
                .map(|(x, p)| x.clone() + a.clone() * p.clone() * tau)
                .collect(),
            // (aD − 1)/(2σ) rewritten without the cancellation at small σ or τ.
            u: z.u.clone() + a * dot(&z.p, &z.p) * tau / (d.clone() + 1.0),
            p: z.p.iter().map(|p| p.clone() / d.clone()).collect(),
        })
    }
    fn analytic_sigma(&self, z: &JetPoint, _t: f64, tau: f64) -> Option<f64> {
        bernoulli_factor(self.sigma, z, tau, String::new)
            .ok()
            .map(|d| -d.ln())
    }
}

/// Flow of the time-dependent forcing `H = A cos(ωt)`:
/// `ū = u − (A/ω)(sin ω(t+h) − sin ωt)`.
#[derive(Clone, Copy, Debug)]
pub struct Forcing {
    pub amp: f64,
    pub omega: f64,
}

impl Forcing {
    /// `∫_t^{t+h} A cos(ωs) ds`.
    pub fn impulse(&self, t: f64, h: f64) -> f64 {
        if self.omega == 0.0 {
            self.amp * h
        } else {
            // sin a − sin b = 2 cos((a+b)/2) sin((a−b)/2), stable for small h.
            2.0 * self.amp / self.omega
                * (self.omega * (t + 0.5 * h)).cos()
                * (0.5 * self.omega * h).sin()
        }
    }
}

impl FlowMap for Forcing {
    fn label(&self) -> String {
        format!("forcing(amp={}; omega={})", self.amp, self.omega)
    }
    fn map<S: Scalar>(&self, z: &JetPoint<S>, t: f64, h: f64) -> Result<JetPoint<S>> {
        Ok(JetPoint {
            x: z.x.clone(),
            u: z.u.clone() - self.impulse(t, h),
            p: z.p.clone(),
        })
    }
    fn is_strict(&self) -> bool {
        true
    }
}

/// Flow of `H = pu` (n = 1): `x̄ = x + uh`, `p̄ = p/(1 + ph)`.
pub fn vdp_c() -> FiberTransport<PolyField> {
    let g = PolyField::new(FloatHamiltonian::u(1), Slot::Fiber).expect("u is a fiber field");
    FiberTransport { g: vec![g] }
}

/// Flow of `H = −ε(1 − x²)u` (n = 1): `ū = u e^{kh}`,
/// `p̄ = e^{kh}(p − 2εxuh)` with `k = ε(1 − x²)`.
pub fn vdp_a(eps: f64) -> AffineU<f64, PolyField> {
    let x = FloatHamiltonian::x(1, 0);
    let b = (&(&x * &x) - &FloatHamiltonian::constant(1, 1.0)).scale(&eps);
    AffineU {
        a: 0.0,
        b: PolyField::new(b, Slot::Position).expect("x-only field"),
    }
}

/// Flow of `H = −½x²` (n = 1): `ū = u + ½x²h`, `p̄ = p + xh`.
pub fn vdp_b() -> Kick<PolyField> {
    let x = FloatHamiltonian::x(1, 0);
    Kick::new(PolyField::new((&x * &x).scale(&-0.5), Slot::Position).expect("x-only field"))
}
