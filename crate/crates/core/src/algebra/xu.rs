use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use super::coeff::Coeff;
use crate::dual::Scalar;

/// Monomial `x^a u^k` in the base variables.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct XuMonomial {
    pub x: Vec<u32>,
    pub u: u32,
}

impl XuMonomial {
    pub fn one(n: usize) -> Self {
        Self {
            x: vec![0; n],
            u: 0,
        }
    }

    pub fn degree(&self) -> u32 {
        self.x.iter().sum::<u32>() + self.u
    }

    pub fn is_one(&self) -> bool {
        self.u == 0 && self.x.iter().all(|&a| a == 0)
    }

    fn mul(&self, other: &Self) -> Self {
        Self {
            x: self.x.iter().zip(&other.x).map(|(a, b)| a + b).collect(),
            u: self.u + other.u,
        }
    }
}

/// Polynomial in `(x, u)` with coefficients in `C`. Zero coefficients are
/// never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct XUPolynomial<C> {
    n: usize,
    terms: BTreeMap<XuMonomial, C>,
}

impl<C: Coeff> XUPolynomial<C> {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: C) -> Self {
        Self::monomial(n, XuMonomial::one(n), c)
    }

    pub fn monomial(n: usize, m: XuMonomial, c: C) -> Self {
        assert_eq!(m.x.len(), n, "monomial arity");
        let mut p = Self::zero(n);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// The coordinate `xᵢ` (0-based axis).
    pub fn x(n: usize, i: usize) -> Self {
        let mut m = XuMonomial::one(n);
        m.x[i] = 1;
        Self::monomial(n, m, C::one())
    }

    pub fn u(n: usize) -> Self {
        let mut m = XuMonomial::one(n);
        m.u = 1;
        Self::monomial(n, m, C::one())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&XuMonomial, &C)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `c·m`, dropping the entry if it cancels.
    pub fn add_term(&mut self, m: XuMonomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&m) {
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(m, s);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn coefficient(&self, m: &XuMonomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn constant_term(&self) -> C {
        self.coefficient(&XuMonomial::one(self.n))
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(self.n);
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v.clone() * c.clone());
        }
        out
    }

    pub fn is_u_independent(&self) -> bool {
        self.terms.keys().all(|m| m.u == 0)
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(XuMonomial::degree).max().unwrap_or(0)
    }

    pub fn u_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.u).max().unwrap_or(0)
    }

    /// `∂/∂xᵢ`.
    pub fn dx(&self, i: usize) -> Self {
        let mut out = Self::zero(self.n);
        for (m, c) in &self.terms {
            if m.x[i] > 0 {
                let mut d = m.clone();
                d.x[i] -= 1;
                out.add_term(d, c.clone() * C::from_int(i64::from(m.x[i])));
            }
        }
        out
    }

    /// `∂/∂u`.
    pub fn du(&self) -> Self {
        let mut out = Self::zero(self.n);
        for (m, c) in &self.terms {
            if m.u > 0 {
                let mut d = m.clone();
                d.u -= 1;
                out.add_term(d, c.clone() * C::from_int(i64::from(m.u)));
            }
        }
        out
    }

    /// Antiderivative in `u` with zero integration constant.
    pub fn integrate_u(&self) -> Self {
        let mut out = Self::zero(self.n);
        for (m, c) in &self.terms {
            let mut d = m.clone();
            d.u += 1;
            out.add_term(d, c.clone() / C::from_int(i64::from(m.u + 1)));
        }
        out
    }

    /// Part that does not depend on `u`, and the remainder.
    pub fn split_u(&self) -> (Self, Self) {
        let mut free = Self::zero(self.n);
        let mut dep = Self::zero(self.n);
        for (m, c) in &self.terms {
            if m.u == 0 {
                free.add_term(m.clone(), c.clone());
            } else {
                dep.add_term(m.clone(), c.clone());
            }
        }
        (free, dep)
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> XUPolynomial<D> {
        let mut out = XUPolynomial::zero(self.n);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    pub fn eval<S: Scalar>(&self, x: &[S], u: &S) -> S {
        let mut acc = S::zero();
        for (m, c) in &self.terms {
            let mut t = S::cst(c.to_f64());
            for (xi, &a) in x.iter().zip(&m.x) {
                if a > 0 {
                    t = t * xi.powi(a as i32);
                }
            }
            if m.u > 0 {
                t = t * u.powi(m.u as i32);
            }
            acc = acc + t;
        }
        acc
    }

    pub fn eval_f64(&self, x: &[f64], u: f64) -> f64 {
        self.eval(x, &u)
    }
}

impl<C: Coeff> Add for &XUPolynomial<C> {
    type Output = XUPolynomial<C>;
    fn add(self, rhs: Self) -> XUPolynomial<C> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<C: Coeff> Sub for &XUPolynomial<C> {
    type Output = XUPolynomial<C>;
    fn sub(self, rhs: Self) -> XUPolynomial<C> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<C: Coeff> Mul for &XUPolynomial<C> {
    type Output = XUPolynomial<C>;
    fn mul(self, rhs: Self) -> XUPolynomial<C> {
        let mut out = XUPolynomial::zero(self.n);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<C: Coeff> Neg for &XUPolynomial<C> {
    type Output = XUPolynomial<C>;
    fn neg(self) -> XUPolynomial<C> {
        self.scale(&-C::one())
    }
}
