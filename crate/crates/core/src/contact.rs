//! Jet-space states, contact Hamiltonian vector fields and conformal factors.
//!
//! Coordinates are Darboux coordinates `z = (x, u, p)` on J¹(ℝⁿ) with the
//! contact form `α = du − p·dx`. Flat vectors always use the block order
//! `(x₁..xₙ, u, p₁..pₙ)`.

use crate::dual::{Dual, Scalar};
use crate::error::{Error, Result};

/// A point `(x, u, p)` of J¹(ℝⁿ), generic over the scalar type so the same
/// value can carry tangent information.
#[derive(Clone, Debug, PartialEq)]
pub struct JetPoint<S = f64> {
    pub x: Vec<S>,
    pub u: S,
    pub p: Vec<S>,
}

impl<S: Scalar> JetPoint<S> {
    pub fn new(x: Vec<S>, u: S, p: Vec<S>) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::Precondition(
                "jet dimension must be at least 1".into(),
            ));
        }
        if x.len() != p.len() {
            return Err(Error::Dimension {
                expected: x.len(),
                got: p.len(),
            });
        }
        Ok(Self { x, u, p })
    }

    /// Base dimension `n`.
    pub fn dim(&self) -> usize {
        self.x.len()
    }

    /// Flat `(x, u, p)` vector of length `2n + 1`.
    pub fn to_vec(&self) -> Vec<S> {
        let mut v = Vec::with_capacity(2 * self.dim() + 1);
        v.extend(self.x.iter().cloned());
        v.push(self.u.clone());
        v.extend(self.p.iter().cloned());
        v
    }

    pub fn from_slice(n: usize, v: &[S]) -> Result<Self> {
        if v.len() != 2 * n + 1 {
            return Err(Error::Dimension {
                expected: 2 * n + 1,
                got: v.len(),
            });
        }
        Self::new(v[..n].to_vec(), v[n].clone(), v[n + 1..].to_vec())
    }

    pub fn primal(&self) -> JetPoint<f64> {
        JetPoint {
            x: self.x.iter().map(Scalar::re).collect(),
            u: self.u.re(),
            p: self.p.iter().map(Scalar::re).collect(),
        }
    }

    /// Checks the primal parts and names the first non-finite component.
    pub fn check_finite(&self, what: &str) -> Result<()> {
        for (i, v) in self.x.iter().enumerate() {
            if !v.re().is_finite() {
                return Err(Error::non_finite(format!("{what}: x{}", i + 1)));
            }
        }
        if !self.u.re().is_finite() {
            return Err(Error::non_finite(format!("{what}: u")));
        }
        for (i, v) in self.p.iter().enumerate() {
            if !v.re().is_finite() {
                return Err(Error::non_finite(format!("{what}: p{}", i + 1)));
            }
        }
        Ok(())
    }
}

impl JetPoint<f64> {
    /// Convenience constructor for n = 1.
    pub fn scalar(x: f64, u: f64, p: f64) -> Self {
        Self {
            x: vec![x],
            u,
            p: vec![p],
        }
    }

    pub fn is_finite(&self) -> bool {
        self.check_finite("").is_ok()
    }

    /// Seeds every coordinate as an independent dual variable.
    pub fn seed(&self) -> JetPoint<Dual<f64>> {
        let m = 2 * self.dim() + 1;
        let v: Vec<Dual<f64>> = self
            .to_vec()
            .into_iter()
            .enumerate()
            .map(|(i, c)| Dual::variable(c, i, m))
            .collect();
        JetPoint::from_slice(self.dim(), &v).expect("dimensions are consistent")
    }

    /// Euclidean distance in `(x, u, p)`.
    pub fn distance(&self, other: &Self) -> f64 {
        self.to_vec()
            .iter()
            .zip(other.to_vec())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    pub fn lift<S: Scalar>(&self) -> JetPoint<S> {
        JetPoint {
            x: self.x.iter().map(|&v| S::cst(v)).collect(),
            u: S::cst(self.u),
            p: self.p.iter().map(|&v| S::cst(v)).collect(),
        }
    }
}

/// A (possibly time-dependent) contact Hamiltonian `H(x, u, p, t)`.
///
/// `eval` is generic so partial derivatives come from evaluating the same
/// code on dual numbers.
pub trait Hamiltonian: Send + Sync {
    fn eval<S: Scalar>(&self, x: &[S], u: &S, p: &[S], t: f64) -> S;

    fn value(&self, z: &JetPoint, t: f64) -> f64 {
        self.eval(&z.x, &z.u, &z.p, t)
    }
}

impl<H: Hamiltonian> Hamiltonian for std::sync::Arc<H> {
    fn eval<S: Scalar>(&self, x: &[S], u: &S, p: &[S], t: f64) -> S {
        (**self).eval(x, u, p, t)
    }
}

/// First partial derivatives of a Hamiltonian at a point.
#[derive(Clone, Debug)]
pub struct Partials<S> {
    pub value: S,
    pub dx: Vec<S>,
    pub du: S,
    pub dp: Vec<S>,
}

pub fn partials<H: Hamiltonian, S: Scalar>(ham: &H, z: &JetPoint<S>, t: f64) -> Partials<S> {
    let n = z.dim();
    let m = 2 * n + 1;
    let v = z.to_vec();
    let d: Vec<Dual<S>> = v
        .into_iter()
        .enumerate()
        .map(|(i, c)| Dual::variable(c, i, m))
        .collect();
    let out = ham.eval(&d[..n], &d[n], &d[n + 1..], t);
    Partials {
        dx: (0..n).map(|i| out.d(i)).collect(),
        du: out.d(n),
        dp: (0..n).map(|i| out.d(n + 1 + i)).collect(),
        value: out.re,
    }
}

/// The contact vector field `X_H` at `z`, returned as `(ẋ, u̇, ṗ)` in a
/// [`JetPoint`]-shaped container:
/// `ẋ = ∂H/∂p`, `ṗ = −(∂H/∂x + p ∂H/∂u)`, `u̇ = p·∂H/∂p − H`.
pub fn contact_vector_field<H: Hamiltonian, S: Scalar>(
    ham: &H,
    z: &JetPoint<S>,
    t: f64,
) -> Result<JetPoint<S>> {
    let d = partials(ham, z, t);
    for (i, v) in d.dx.iter().enumerate() {
        if !v.re().is_finite() {
            return Err(Error::non_finite(format!("∂H/∂x{}", i + 1)));
        }
    }
    if !d.du.re().is_finite() {
        return Err(Error::non_finite("∂H/∂u"));
    }
    for (i, v) in d.dp.iter().enumerate() {
        if !v.re().is_finite() {
            return Err(Error::non_finite(format!("∂H/∂p{}", i + 1)));
        }
    }
    if !d.value.re().is_finite() {
        return Err(Error::non_finite("H"));
    }
    let mut udot = -d.value.clone();
    for (pi, hp) in z.p.iter().zip(&d.dp) {
        udot = udot + pi.clone() * hp.clone();
    }
    let pdot =
        d.dx.iter()
            .zip(&z.p)
            .map(|(hx, pi)| -(hx.clone() + pi.clone() * d.du.clone()))
            .collect();
    Ok(JetPoint {
        x: d.dp,
        u: udot,
        p: pdot,
    })
}

/// Instantaneous rate of the log-conformal factor, `−∂H/∂u`.
pub fn conformal_rate<H: Hamiltonian>(ham: &H, z: &JetPoint, t: f64) -> Result<f64> {
    let d = partials(ham, z, t);
    if !d.du.is_finite() {
        return Err(Error::non_finite("∂H/∂u"));
    }
    Ok(-d.du)
}

/// A one-step map `z ↦ z′` on J¹(ℝⁿ) driven by a start time and a signed
/// duration. Object safe; implementors usually go through [`FlowMap`].
pub trait ContactStep: Send + Sync {
    fn label(&self) -> String;

    fn apply(&self, z: &JetPoint, t: f64, h: f64) -> Result<JetPoint>;

    /// Same map evaluated on first-order duals, for Jacobians.
    fn apply_dual(&self, z: &JetPoint<Dual<f64>>, t: f64, h: f64) -> Result<JetPoint<Dual<f64>>>;

    /// Closed-form log-conformal increment, if the map has one.
    fn analytic_sigma(&self, _z: &JetPoint, _t: f64, _h: f64) -> Option<f64> {
        None
    }

    /// Whether the map preserves `α` exactly.
    fn is_strict(&self) -> bool {
        false
    }

    /// Log-conformal increment `σ` at `z`: zero for strict maps, closed form
    /// where available, Jacobian pullback otherwise.
    fn sigma_increment(&self, z: &JetPoint, t: f64, h: f64) -> Result<f64> {
        if self.is_strict() {
            return Ok(0.0);
        }
        if let Some(s) = self.analytic_sigma(z, t, h) {
            return Ok(s);
        }
        Ok(pullback_conformal_factor(self, z, t, h)?.sigma)
    }

    /// Applies the map and reports its log-conformal increment.
    fn advance(&self, z: &JetPoint, t: f64, h: f64) -> Result<(JetPoint, f64)> {
        let sigma = self.sigma_increment(z, t, h)?;
        Ok((self.apply(z, t, h)?, sigma))
    }
}

/// Generic form of a one-step map. Every `FlowMap` is a [`ContactStep`].
pub trait FlowMap: Send + Sync {
    fn label(&self) -> String;

    fn map<S: Scalar>(&self, z: &JetPoint<S>, t: f64, h: f64) -> Result<JetPoint<S>>;

    fn analytic_sigma(&self, _z: &JetPoint, _t: f64, _h: f64) -> Option<f64> {
        None
    }

    fn is_strict(&self) -> bool {
        false
    }
}

impl<F: FlowMap> ContactStep for F {
    fn label(&self) -> String {
        FlowMap::label(self)
    }
    fn apply(&self, z: &JetPoint, t: f64, h: f64) -> Result<JetPoint> {
        self.map(z, t, h)
    }
    fn apply_dual(&self, z: &JetPoint<Dual<f64>>, t: f64, h: f64) -> Result<JetPoint<Dual<f64>>> {
        self.map(z, t, h)
    }
    fn analytic_sigma(&self, z: &JetPoint, t: f64, h: f64) -> Option<f64> {
        FlowMap::analytic_sigma(self, z, t, h)
    }
    fn is_strict(&self) -> bool {
        FlowMap::is_strict(self)
    }
}

/// Result of pulling `α` back through a map at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConformalReport {
    /// `σ` with `ψ*α = e^σ α` at the sample point.
    pub sigma: f64,
    /// Max-norm deviation of `ψ*α` from `e^σ α`.
    pub residual: f64,
}

/// Pulls `α` back through `map` using its dual-number Jacobian.
///
/// The covector `w = Dψ(z)ᵀ α_{ψ(z)}` only involves the rows of `x̄` and
/// `ū`, since `α` has no `dp` component. `σ` is read off the Reeb
/// evaluation `w_u`.
pub fn pullback_conformal_factor<M: ContactStep + ?Sized>(
    map: &M,
    z: &JetPoint,
    t: f64,
    h: f64,
) -> Result<ConformalReport> {
    let n = z.dim();
    let m = 2 * n + 1;
    let out = map.apply_dual(&z.seed(), t, h)?;
    let pbar: Vec<f64> = out.p.iter().map(|v| v.re).collect();
    let mut w: Vec<f64> = (0..m).map(|j| out.u.d(j)).collect();
    for (xi, pi) in out.x.iter().zip(&pbar) {
        for (j, wj) in w.iter_mut().enumerate() {
            *wj -= pi * xi.d(j);
        }
    }
    if let Some(j) = w.iter().position(|v| !v.is_finite()) {
        return Err(Error::non_finite(format!(
            "pulled-back form, component {j}"
        )));
    }
    if pbar.iter().any(|v| !v.is_finite()) {
        return Err(Error::non_finite("mapped momentum"));
    }
    let reeb = w[n];
    if reeb <= 0.0 {
        return Err(Error::Orientation { reeb_value: reeb });
    }
    let mut alpha = vec![0.0; m];
    for (a, p) in alpha.iter_mut().zip(&z.p) {
        *a = -p;
    }
    alpha[n] = 1.0;
    let residual = w
        .iter()
        .zip(&alpha)
        .map(|(wj, aj)| (wj - reeb * aj).abs())
        .fold(0.0, f64::max);
    Ok(ConformalReport {
        sigma: reeb.ln(),
        residual,
    })
}

/// Outcome of checking a map for the contact property on a sample set.
#[derive(Clone, Debug, PartialEq)]
pub struct ContactReport {
    pub passed: bool,
    pub tolerance: f64,
    pub worst_residual: f64,
    pub worst_index: Option<usize>,
    pub samples: usize,
    pub warning: Option<String>,
}

pub fn verify_contactomorphism<M: ContactStep + ?Sized>(
    map: &M,
    samples: &[JetPoint],
    t: f64,
    h: f64,
    tol: f64,
) -> Result<ContactReport> {
    if samples.is_empty() {
        let msg = format!(
            "{}: no sample points, contact check is vacuous",
            map.label()
        );
        log::warn!("{msg}");
        return Ok(ContactReport {
            passed: true,
            tolerance: tol,
            worst_residual: 0.0,
            worst_index: None,
            samples: 0,
            warning: Some(msg),
        });
    }
    let mut worst = 0.0;
    let mut worst_index = 0;
    for (i, z) in samples.iter().enumerate() {
        z.check_finite("sample")?;
        let r = pullback_conformal_factor(map, z, t, h)?.residual;
        if r > worst || i == 0 {
            worst = r;
            worst_index = i;
        }
    }
    Ok(ContactReport {
        passed: worst <= tol,
        tolerance: tol,
        worst_residual: worst,
        worst_index: Some(worst_index),
        samples: samples.len(),
        warning: None,
    })
}
