use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;

use super::coeff::{rational_from_f64, Coeff};
use super::xu::{XUPolynomial, XuMonomial};
use crate::contact::Hamiltonian;
use crate::dual::Scalar;

/// Contact Hamiltonian `Σ_α f_α(x, u) p^α` with polynomial coefficients.
///
/// Keys are momentum multi-indices; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyPHamiltonian<C> {
    n: usize,
    terms: BTreeMap<Vec<u32>, XUPolynomial<C>>,
}

/// Exact-coefficient Hamiltonian.
pub type RationalHamiltonian = PolyPHamiltonian<BigRational>;
/// Floating-point-coefficient Hamiltonian.
pub type FloatHamiltonian = PolyPHamiltonian<f64>;

/// `γ·p^α`, the strict monomials the bracket operators act on.
#[derive(Clone, Debug, PartialEq)]
pub struct PMonomial<C> {
    pub coeff: C,
    pub alpha: Vec<u32>,
}

impl<C: Coeff> PMonomial<C> {
    pub fn new(coeff: C, alpha: Vec<u32>) -> Self {
        Self { coeff, alpha }
    }

    pub fn degree(&self) -> u32 {
        self.alpha.iter().sum()
    }

    pub fn to_poly(&self) -> PolyPHamiltonian<C> {
        let n = self.alpha.len();
        PolyPHamiltonian::from_term(
            self.alpha.clone(),
            XUPolynomial::constant(n, self.coeff.clone()),
        )
    }
}

impl<C: Coeff> PolyPHamiltonian<C> {
    pub fn zero(n: usize) -> Self {
        assert!(n >= 1, "jet dimension must be at least 1");
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_term(alpha: Vec<u32>, f: XUPolynomial<C>) -> Self {
        let n = alpha.len();
        let mut h = Self::zero(n);
        h.add_term(alpha, f);
        h
    }

    /// A `p`-free Hamiltonian `f(x, u)`.
    pub fn from_base(f: XUPolynomial<C>) -> Self {
        let n = f.dim();
        Self::from_term(vec![0; n], f)
    }

    pub fn constant(n: usize, c: C) -> Self {
        Self::from_base(XUPolynomial::constant(n, c))
    }

    pub fn x(n: usize, i: usize) -> Self {
        Self::from_base(XUPolynomial::x(n, i))
    }

    pub fn u(n: usize) -> Self {
        Self::from_base(XUPolynomial::u(n))
    }

    pub fn p(n: usize, i: usize) -> Self {
        let mut alpha = vec![0; n];
        alpha[i] = 1;
        Self::from_term(alpha, XUPolynomial::constant(n, C::one()))
    }

    /// Single term `c · x^a u^k p^α`.
    pub fn monomial(c: C, x: Vec<u32>, u: u32, alpha: Vec<u32>) -> Self {
        let n = alpha.len();
        Self::from_term(alpha, XUPolynomial::monomial(n, XuMonomial { x, u }, c))
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Vec<u32>, &XUPolynomial<C>)> {
        self.terms.iter()
    }

    /// Number of `(x, u, p)` monomials.
    pub fn monomial_count(&self) -> usize {
        self.terms.values().map(XUPolynomial::len).sum()
    }

    pub fn coefficient(&self, alpha: &[u32]) -> XUPolynomial<C> {
        self.terms
            .get(alpha)
            .cloned()
            .unwrap_or_else(|| XUPolynomial::zero(self.n))
    }

    pub fn add_term(&mut self, alpha: Vec<u32>, f: XUPolynomial<C>) {
        assert_eq!(alpha.len(), self.n, "multi-index arity");
        assert_eq!(f.dim(), self.n, "coefficient arity");
        if f.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&alpha) {
            Some(old) => &old + &f,
            None => f,
        };
        if !sum.is_zero() {
            self.terms.insert(alpha, sum);
        }
    }

    /// Degree in `p`; zero for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|a| a.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    /// Homogeneous part of `p`-degree `k`.
    pub fn homogeneous(&self, k: u32) -> Self {
        let mut out = Self::zero(self.n);
        for (a, f) in &self.terms {
            if a.iter().sum::<u32>() == k {
                out.add_term(a.clone(), f.clone());
            }
        }
        out
    }

    /// `∂H/∂u = 0`, i.e. every coefficient is `u`-independent.
    pub fn is_strict(&self) -> bool {
        self.terms.values().all(XUPolynomial::is_u_independent)
    }

    /// Affine in `p`.
    pub fn is_prolonged(&self) -> bool {
        self.degree() <= 1
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(self.n);
        for (a, f) in &self.terms {
            out.add_term(a.clone(), f.scale(c));
        }
        out
    }

    /// Multiplies every coefficient by a base polynomial.
    pub fn mul_base(&self, g: &XUPolynomial<C>) -> Self {
        let mut out = Self::zero(self.n);
        for (a, f) in &self.terms {
            out.add_term(a.clone(), f * g);
        }
        out
    }

    pub fn dx(&self, i: usize) -> Self {
        let mut out = Self::zero(self.n);
        for (a, f) in &self.terms {
            out.add_term(a.clone(), f.dx(i));
        }
        out
    }

    pub fn du(&self) -> Self {
        let mut out = Self::zero(self.n);
        for (a, f) in &self.terms {
            out.add_term(a.clone(), f.du());
        }
        out
    }

    pub fn dp(&self, i: usize) -> Self {
        let mut out = Self::zero(self.n);
        for (a, f) in &self.terms {
            if a[i] > 0 {
                let mut b = a.clone();
                b[i] -= 1;
                out.add_term(b, f.scale(&C::from_int(i64::from(a[i]))));
            }
        }
        out
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> PolyPHamiltonian<D> {
        let mut out = PolyPHamiltonian::zero(self.n);
        for (a, g) in &self.terms {
            out.add_term(a.clone(), g.map_coeffs(&f));
        }
        out
    }

    pub fn to_float(&self) -> FloatHamiltonian {
        self.map_coeffs(Coeff::to_f64)
    }

    /// Largest coefficient magnitude of `self − other`.
    pub fn max_coeff_diff(&self, other: &Self) -> f64 {
        let d = self - other;
        d.terms
            .values()
            .flat_map(|f| f.terms().map(|(_, c)| c.to_f64().abs()))
            .fold(0.0, f64::max)
    }

    pub fn eval_poly<S: Scalar>(&self, x: &[S], u: &S, p: &[S]) -> S {
        let mut acc = S::zero();
        for (a, f) in &self.terms {
            let mut t = f.eval(x, u);
            for (pi, &k) in p.iter().zip(a) {
                if k > 0 {
                    t = t * pi.powi(k as i32);
                }
            }
            acc = acc + t;
        }
        acc
    }
}

impl FloatHamiltonian {
    /// Exact rational image of every float coefficient.
    pub fn to_rational(&self) -> Option<RationalHamiltonian> {
        let mut out = PolyPHamiltonian::zero(self.n);
        for (a, f) in &self.terms {
            let mut g = XUPolynomial::zero(self.n);
            for (m, c) in f.terms() {
                g.add_term(m.clone(), rational_from_f64(*c)?);
            }
            out.add_term(a.clone(), g);
        }
        Some(out)
    }
}

impl<C: Coeff> Hamiltonian for PolyPHamiltonian<C> {
    fn eval<S: Scalar>(&self, x: &[S], u: &S, p: &[S], _t: f64) -> S {
        self.eval_poly(x, u, p)
    }
}

impl<C: Coeff> Add for &PolyPHamiltonian<C> {
    type Output = PolyPHamiltonian<C>;
    fn add(self, rhs: Self) -> PolyPHamiltonian<C> {
        let mut out = self.clone();
        for (a, f) in &rhs.terms {
            out.add_term(a.clone(), f.clone());
        }
        out
    }
}

impl<C: Coeff> Sub for &PolyPHamiltonian<C> {
    type Output = PolyPHamiltonian<C>;
    fn sub(self, rhs: Self) -> PolyPHamiltonian<C> {
        let mut out = self.clone();
        for (a, f) in &rhs.terms {
            out.add_term(a.clone(), -f);
        }
        out
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl<C: Coeff> Mul for &PolyPHamiltonian<C> {
    type Output = PolyPHamiltonian<C>;
    fn mul(self, rhs: Self) -> PolyPHamiltonian<C> {
        let mut out = PolyPHamiltonian::zero(self.n);
        for (a, f) in &self.terms {
            for (b, g) in &rhs.terms {
                let ab = a.iter().zip(b).map(|(i, j)| i + j).collect();
                out.add_term(ab, f * g);
            }
        }
        out
    }
}

impl<C: Coeff> Neg for &PolyPHamiltonian<C> {
    type Output = PolyPHamiltonian<C>;
    fn neg(self) -> PolyPHamiltonian<C> {
        self.scale(&-C::one())
    }
}

impl<C: Coeff> Add for PolyPHamiltonian<C> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl<C: Coeff> Sub for PolyPHamiltonian<C> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl<C: Coeff> Mul for PolyPHamiltonian<C> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl<C: Coeff> Neg for PolyPHamiltonian<C> {
    type Output = Self;
    fn neg(self) -> Self {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type H = RationalHamiltonian;

    #[test]
    fn degree_and_membership() {
        let p = H::p(1, 0);
        let x = H::x(1, 0);
        let u = H::u(1);
        let h = &(&p * &p) + &(&x * &u);
        assert_eq!(h.degree(), 2);
        assert!(!h.is_strict());
        assert!(!h.is_prolonged());
        assert!((&p * &x).is_prolonged());
        assert!((&p * &p).is_strict());
        assert!(H::zero(2).is_strict() && H::zero(2).is_prolonged());
    }

    #[test]
    fn momentum_derivative() {
        let p = H::p(2, 1);
        let q = H::p(2, 0);
        let h = &(&(&p * &p) * &p) * &q; // p₁ p₂³
        let d = h.dp(1);
        assert_eq!(d, (&(&p * &p) * &q).scale(&BigRational::from_int(3)));
    }

    #[test]
    fn evaluates_like_a_hamiltonian() {
        let p = FloatHamiltonian::p(1, 0);
        let x = FloatHamiltonian::x(1, 0);
        let h = &(&p * &p).scale(&0.5) + &(&x * &x).scale(&0.5);
        assert_eq!(
            h.value(&crate::contact::JetPoint::scalar(1.0, 7.0, 2.0), 0.0),
            2.5
        );
    }
}
