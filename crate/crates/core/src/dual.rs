//! Forward-mode automatic differentiation.
//!
//! Every map in this crate is written once, generically over [`Scalar`], and
//! evaluated either on plain `f64` or on [`Dual`] numbers carrying a tangent
//! vector. Duals nest (`Dual<Dual<f64>>`), which is how the Jacobian of a
//! lifted step, itself built from a Jacobian, is obtained.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Real-like number type the integrators are generic over.
pub trait Scalar:
    Clone
    + Debug
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Add<f64, Output = Self>
    + Sub<f64, Output = Self>
    + Mul<f64, Output = Self>
    + Div<f64, Output = Self>
{
    fn cst(v: f64) -> Self;
    /// Primal (real) part.
    fn re(&self) -> f64;
    fn sqrt(&self) -> Self;
    fn exp(&self) -> Self;
    fn ln(&self) -> Self;
    fn sin(&self) -> Self;
    fn cos(&self) -> Self;
    fn powi(&self, n: i32) -> Self;

    fn zero() -> Self {
        Self::cst(0.0)
    }
    fn one() -> Self {
        Self::cst(1.0)
    }
    fn recip(&self) -> Self {
        Self::one() / self.clone()
    }
    fn square(&self) -> Self {
        self.clone() * self.clone()
    }
    /// True when the primal part and every tangent entry are finite.
    fn all_finite(&self) -> bool;
}

impl Scalar for f64 {
    #[inline]
    fn cst(v: f64) -> Self {
        v
    }
    #[inline]
    fn re(&self) -> f64 {
        *self
    }
    #[inline]
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    #[inline]
    fn exp(&self) -> Self {
        f64::exp(*self)
    }
    #[inline]
    fn ln(&self) -> Self {
        f64::ln(*self)
    }
    #[inline]
    fn sin(&self) -> Self {
        f64::sin(*self)
    }
    #[inline]
    fn cos(&self) -> Self {
        f64::cos(*self)
    }
    #[inline]
    fn powi(&self, n: i32) -> Self {
        f64::powi(*self, n)
    }
    #[inline]
    fn all_finite(&self) -> bool {
        self.is_finite()
    }
}

/// Dual number `re + Σ eps[i]·εᵢ` with εᵢεⱼ = 0.
///
/// An empty tangent vector denotes a constant; binary operations treat
/// missing entries as zero, so constants and seeded variables mix freely.
#[derive(Clone, Debug, PartialEq)]
pub struct Dual<T> {
    pub re: T,
    pub eps: Vec<T>,
}

impl<T: Scalar> Dual<T> {
    pub fn constant(re: T) -> Self {
        Self {
            re,
            eps: Vec::new(),
        }
    }

    /// Independent variable number `index` out of `n` tangent directions.
    pub fn variable(re: T, index: usize, n: usize) -> Self {
        let mut eps = vec![T::zero(); n];
        eps[index] = T::one();
        Self { re, eps }
    }

    /// Tangent entry `i`, zero if not stored.
    pub fn d(&self, i: usize) -> T {
        self.eps.get(i).cloned().unwrap_or_else(T::zero)
    }

    fn chain(&self, value: T, slope: T) -> Self {
        Self {
            re: value,
            eps: self.eps.iter().map(|e| e.clone() * slope.clone()).collect(),
        }
    }
}

/// Seeds `values` as independent variables.
pub fn seed<T: Scalar>(values: &[T]) -> Vec<Dual<T>> {
    let n = values.len();
    values
        .iter()
        .enumerate()
        .map(|(i, v)| Dual::variable(v.clone(), i, n))
        .collect()
}

/// Jacobian of `f` at `at`, rows indexed by output. Returns `(f(at), J)`.
pub fn jacobian<T, F>(f: F, at: &[T]) -> (Vec<T>, Vec<Vec<T>>)
where
    T: Scalar,
    F: FnOnce(&[Dual<T>]) -> Vec<Dual<T>>,
{
    let n = at.len();
    let out = f(&seed(at));
    let values = out.iter().map(|o| o.re.clone()).collect();
    let jac = out
        .iter()
        .map(|o| (0..n).map(|j| o.d(j)).collect())
        .collect();
    (values, jac)
}

/// Value and gradient of a scalar function.
pub fn gradient<T, F>(f: F, at: &[T]) -> (T, Vec<T>)
where
    T: Scalar,
    F: FnOnce(&[Dual<T>]) -> Dual<T>,
{
    let n = at.len();
    let out = f(&seed(at));
    let grad = (0..n).map(|j| out.d(j)).collect();
    (out.re, grad)
}

fn zip_with<T: Scalar>(a: &[T], b: &[T], f: impl Fn(T, T) -> T) -> Vec<T> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(T::zero);
            let y = b.get(i).cloned().unwrap_or_else(T::zero);
            f(x, y)
        })
        .collect()
}

impl<T: Scalar> Add for Dual<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let eps = if rhs.eps.is_empty() {
            self.eps
        } else if self.eps.is_empty() {
            rhs.eps
        } else {
            zip_with(&self.eps, &rhs.eps, |a, b| a + b)
        };
        Self {
            re: self.re + rhs.re,
            eps,
        }
    }
}

impl<T: Scalar> Sub for Dual<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let eps = if rhs.eps.is_empty() {
            self.eps
        } else {
            zip_with(&self.eps, &rhs.eps, |a, b| a - b)
        };
        Self {
            re: self.re - rhs.re,
            eps,
        }
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl<T: Scalar> Mul for Dual<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let eps = match (self.eps.is_empty(), rhs.eps.is_empty()) {
            (true, true) => Vec::new(),
            (false, true) => self.eps.into_iter().map(|e| e * rhs.re.clone()).collect(),
            (true, false) => rhs.eps.into_iter().map(|e| e * self.re.clone()).collect(),
            (false, false) => zip_with(&self.eps, &rhs.eps, |a, b| {
                a * rhs.re.clone() + b * self.re.clone()
            }),
        };
        Self {
            re: self.re * rhs.re,
            eps,
        }
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl<T: Scalar> Div for Dual<T> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let inv = rhs.re.recip();
        let q = self.re.clone() * inv.clone();
        let eps = if rhs.eps.is_empty() {
            self.eps.into_iter().map(|e| e * inv.clone()).collect()
        } else {
            zip_with(&self.eps, &rhs.eps, |a, b| {
                (a - q.clone() * b) * inv.clone()
            })
        };
        Self { re: q, eps }
    }
}

impl<T: Scalar> Neg for Dual<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            re: -self.re,
            eps: self.eps.into_iter().map(|e| -e).collect(),
        }
    }
}

impl<T: Scalar> Add<f64> for Dual<T> {
    type Output = Self;
    fn add(self, rhs: f64) -> Self {
        Self {
            re: self.re + rhs,
            eps: self.eps,
        }
    }
}

impl<T: Scalar> Sub<f64> for Dual<T> {
    type Output = Self;
    fn sub(self, rhs: f64) -> Self {
        Self {
            re: self.re - rhs,
            eps: self.eps,
        }
    }
}

impl<T: Scalar> Mul<f64> for Dual<T> {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        Self {
            re: self.re * rhs,
            eps: self.eps.into_iter().map(|e| e * rhs).collect(),
        }
    }
}

impl<T: Scalar> Div<f64> for Dual<T> {
    type Output = Self;
    fn div(self, rhs: f64) -> Self {
        self * (1.0 / rhs)
    }
}

impl<T: Scalar> Scalar for Dual<T> {
    fn cst(v: f64) -> Self {
        Self::constant(T::cst(v))
    }
    fn re(&self) -> f64 {
        self.re.re()
    }
    fn sqrt(&self) -> Self {
        let s = self.re.sqrt();
        let slope = (s.clone() * 2.0).recip();
        self.chain(s, slope)
    }
    fn exp(&self) -> Self {
        let e = self.re.exp();
        self.chain(e.clone(), e)
    }
    fn ln(&self) -> Self {
        self.chain(self.re.ln(), self.re.recip())
    }
    fn sin(&self) -> Self {
        self.chain(self.re.sin(), self.re.cos())
    }
    fn cos(&self) -> Self {
        self.chain(self.re.cos(), -self.re.sin())
    }
    fn powi(&self, n: i32) -> Self {
        match n {
            0 => Self::one(),
            1 => self.clone(),
            _ => self.chain(self.re.powi(n), self.re.powi(n - 1) * f64::from(n)),
        }
    }
    fn all_finite(&self) -> bool {
        self.re.all_finite() && self.eps.iter().all(Scalar::all_finite)
    }
}

/// Primal parts of a slice of scalars.
pub fn primal<S: Scalar>(v: &[S]) -> Vec<f64> {
    v.iter().map(Scalar::re).collect()
}

/// Lifts plain values into any scalar type as constants.
pub fn lift<S: Scalar>(v: &[f64]) -> Vec<S> {
    v.iter().map(|&x| S::cst(x)).collect()
}
