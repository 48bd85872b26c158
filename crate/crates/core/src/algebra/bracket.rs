//! Poisson and contact-Jacobi brackets, the Euler operator, and the three
//! elementary bracket operators used by the depth-one decomposition.

use super::coeff::Coeff;
use super::poly::{PMonomial, PolyPHamiltonian};
use super::xu::XUPolynomial;
use crate::error::{Error, Result};

/// `{f, g} = Σᵢ (∂f/∂pᵢ ∂g/∂xᵢ − ∂f/∂xᵢ ∂g/∂pᵢ)`.
pub fn poisson_bracket<C: Coeff>(
    f: &PolyPHamiltonian<C>,
    g: &PolyPHamiltonian<C>,
) -> PolyPHamiltonian<C> {
    let n = f.dim();
    let mut out = PolyPHamiltonian::zero(n);
    for i in 0..n {
        out = &out + &(&f.dp(i) * &g.dx(i));
        out = &out - &(&f.dx(i) * &g.dp(i));
    }
    out
}

/// `E[f] = f − p·∂f/∂p`.
pub fn euler_operator<C: Coeff>(f: &PolyPHamiltonian<C>) -> PolyPHamiltonian<C> {
    let n = f.dim();
    let mut out = PolyPHamiltonian::zero(n);
    for (alpha, coeff) in f.terms() {
        let k = alpha.iter().sum::<u32>();
        out.add_term(alpha.clone(), coeff.scale(&C::from_int(1 - i64::from(k))));
    }
    out
}

/// `[f, g] = {f, g} + ∂f/∂u E[g] − ∂g/∂u E[f]`.
pub fn jacobi_bracket<C: Coeff>(
    f: &PolyPHamiltonian<C>,
    g: &PolyPHamiltonian<C>,
) -> PolyPHamiltonian<C> {
    let pb = poisson_bracket(f, g);
    let a = &f.du() * &euler_operator(g);
    let b = &g.du() * &euler_operator(f);
    &(&pb + &a) - &b
}

/// Generator `g` with `[g, γp^α] = γp^{α+eᵢ}`, namely `u pᵢ / (1 − |α|)`.
pub fn raise_degree<C: Coeff>(target: &PMonomial<C>, i: usize) -> Result<PolyPHamiltonian<C>> {
    let n = target.alpha.len();
    check_axis(n, i)?;
    let k = target.degree();
    if k < 2 {
        return Err(Error::Precondition(format!(
            "degree raising needs |α| ≥ 2, got {k}"
        )));
    }
    let c = C::one() / C::from_int(1 - i64::from(k));
    Ok((&PolyPHamiltonian::u(n) * &PolyPHamiltonian::p(n, i)).scale(&c))
}

/// Generator `g` with `[g, γp^α] = γp^{α−eᵢ}`, namely `−xᵢ/αᵢ`.
pub fn lower_degree<C: Coeff>(target: &PMonomial<C>, i: usize) -> Result<PolyPHamiltonian<C>> {
    let n = target.alpha.len();
    check_axis(n, i)?;
    let a = target.alpha[i];
    if a == 0 {
        return Err(Error::Precondition(format!(
            "degree lowering along axis {} needs a positive exponent",
            i + 1
        )));
    }
    Ok(PolyPHamiltonian::x(n, i).scale(&(-C::one() / C::from_int(i64::from(a)))))
}

/// Generator `g = (1 − k)⁻¹ ∫ h du` and remainder `r` with
/// `[g, γp^α] = γ h p^α + r`, where `deg r ≤ k − 1`.
pub fn scale_by<C: Coeff>(
    target: &PMonomial<C>,
    h: &XUPolynomial<C>,
) -> Result<(PolyPHamiltonian<C>, PolyPHamiltonian<C>)> {
    let n = target.alpha.len();
    if h.dim() != n {
        return Err(Error::Dimension {
            expected: n,
            got: h.dim(),
        });
    }
    let k = target.degree();
    if k < 2 {
        return Err(Error::Precondition(format!(
            "scalar multiplication needs |α| ≥ 2, got {k}"
        )));
    }
    let c = C::one() / C::from_int(1 - i64::from(k));
    let g = PolyPHamiltonian::from_base(h.integrate_u().scale(&c));
    let leading = PolyPHamiltonian::from_term(target.alpha.clone(), h.scale(&target.coeff));
    let remainder = &jacobi_bracket(&g, &target.to_poly()) - &leading;
    Ok((g, remainder))
}

fn check_axis(n: usize, i: usize) -> Result<()> {
    if i >= n {
        return Err(Error::Precondition(format!(
            "axis index {} out of range for n = {n}",
            i + 1
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::RationalHamiltonian as H;
    use num_rational::BigRational as Q;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n.into(), d.into())
    }

    fn p1() -> H {
        H::p(1, 0)
    }
    fn x1() -> H {
        H::x(1, 0)
    }
    fn u1() -> H {
        H::u(1)
    }

    #[test]
    fn poisson_examples() {
        assert_eq!(poisson_bracket(&p1(), &x1()), H::constant(1, q(1, 1)));
        let x2 = &x1() * &x1();
        let p2 = &p1() * &p1();
        assert_eq!(poisson_bracket(&x2, &p2), (&x1() * &p1()).scale(&q(-4, 1)));
    }

    #[test]
    fn euler_examples() {
        let p2 = &p1() * &p1();
        assert_eq!(euler_operator(&p2), -&p2);
        let gp = &(&x1() * &u1()) * &p1();
        assert!(euler_operator(&gp).is_zero());
        let f = &(&x1() * &u1()) + &u1();
        assert_eq!(euler_operator(&f), f);
    }

    #[test]
    fn jacobi_examples() {
        let p2 = &p1() * &p1();
        let p3 = &p2 * &p1();
        assert_eq!(jacobi_bracket(&-&(&u1() * &p1()), &p2), p3);
        assert_eq!(jacobi_bracket(&x1().scale(&q(-1, 2)), &p2), p1());
        let u2 = &u1() * &u1();
        assert_eq!(jacobi_bracket(&u2.scale(&q(-1, 2)), &p2), &u1() * &p2);
        let lhs = jacobi_bracket(&-&(&x1() * &u1()), &p2);
        let rhs = &(&x1() * &p2) + &(&u1() * &p1()).scale(&q(2, 1));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn operator_preconditions() {
        let lin = PMonomial::new(q(1, 1), vec![1]);
        assert!(matches!(raise_degree(&lin, 0), Err(Error::Precondition(_))));
        let xu = XUPolynomial::x(1, 0);
        assert!(matches!(scale_by(&lin, &xu), Err(Error::Precondition(_))));
        let pure2 = PMonomial::new(q(1, 1), vec![0, 2]);
        assert!(matches!(
            lower_degree(&pure2, 0),
            Err(Error::Precondition(_))
        ));
        assert!(lower_degree(&pure2, 1).is_ok());
    }
}
