use super::bracket::{jacobi_bracket, scale_by};
use super::coeff::Coeff;
use super::poly::{PMonomial, PolyPHamiltonian};
use super::xu::{XUPolynomial, XuMonomial};

/// `H = s₀ + d₀ + Σ [sᵢ, dᵢ]` with every `s` strict and every `d` affine in `p`.
#[derive(Clone, Debug, PartialEq)]
pub struct DepthOneRepresentation<C> {
    pub s0: PolyPHamiltonian<C>,
    pub d0: PolyPHamiltonian<C>,
    /// Pairs `(s, d)`, each contributing `[s, d]`.
    pub pairs: Vec<(PolyPHamiltonian<C>, PolyPHamiltonian<C>)>,
}

impl<C: Coeff> DepthOneRepresentation<C> {
    /// `s₀ + d₀ + Σ [sᵢ, dᵢ]`.
    pub fn reconstruct(&self) -> PolyPHamiltonian<C> {
        let mut h = &self.s0 + &self.d0;
        for (s, d) in &self.pairs {
            h = &h + &jacobi_bracket(s, d);
        }
        h
    }

    /// Subalgebra membership of every slot.
    pub fn is_well_formed(&self) -> bool {
        self.s0.is_strict()
            && self.d0.is_prolonged()
            && self
                .pairs
                .iter()
                .all(|(s, d)| s.is_strict() && d.is_prolonged())
    }
}

/// Triangular elimination from the top `p`-degree down.
///
/// For every monomial `f_α(x,u) p^α` of the current top degree `k ≥ 2`, the
/// constant part of `f_α` goes to `s₀` and the rest `h` is produced by
/// `[g, p^α] = h p^α + r` with `g = (1−k)⁻¹∫h du`; the pair is stored as
/// `(p^α, −g)` and the lower-degree remainder `r` is fed back. What is left
/// at degree ≤ 1 goes to `d₀`, except its `p`-free `u`-independent part,
/// which is strict and goes to `s₀`.
pub fn depth_one_decompose<C: Coeff>(h: &PolyPHamiltonian<C>) -> DepthOneRepresentation<C> {
    let n = h.dim();
    let mut rest = h.clone();
    let mut s0 = PolyPHamiltonian::zero(n);
    let mut pairs = Vec::new();
    loop {
        let k = rest.degree();
        if k <= 1 {
            break;
        }
        let top: Vec<(Vec<u32>, XUPolynomial<C>)> = rest
            .homogeneous(k)
            .terms()
            .rev()
            .map(|(a, f)| (a.clone(), f.clone()))
            .collect();
        for (alpha, f) in top {
            let c = f.constant_term();
            let mut var = f.clone();
            var.add_term(XuMonomial::one(n), -c.clone());
            if !c.is_zero() {
                let strict =
                    PolyPHamiltonian::from_term(alpha.clone(), XUPolynomial::constant(n, c));
                rest = &rest - &strict;
                s0 = &s0 + &strict;
            }
            if !var.is_zero() {
                let target = PMonomial::new(C::one(), alpha.clone());
                let (g, _) = scale_by(&target, &var).expect("top degree is at least 2");
                let s = target.to_poly();
                let d = -&g;
                rest = &rest - &jacobi_bracket(&s, &d);
                pairs.push((s, d));
            }
        }
        // Exact for rationals; in floating point this drops roundoff residue
        // that survived the zero threshold.
        rest = &rest - &rest.homogeneous(k);
    }
    let free = rest.coefficient(&vec![0; n]).split_u().0;
    let kick = PolyPHamiltonian::from_base(free);
    let d0 = &rest - &kick;
    s0 = &s0 + &kick;
    DepthOneRepresentation { s0, d0, pairs }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::RationalHamiltonian as H;
    use num_rational::BigRational as Q;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n.into(), d.into())
    }

    #[test]
    fn dho_needs_no_pairs() {
        let (p, x, u) = (H::p(1, 0), H::x(1, 0), H::u(1));
        let s = &(&p * &p).scale(&q(1, 2)) + &(&x * &x).scale(&q(1, 2));
        let d = u.scale(&q(3, 10));
        let rep = depth_one_decompose(&(&s + &d));
        assert_eq!(rep.s0, s);
        assert_eq!(rep.d0, d);
        assert!(rep.pairs.is_empty());
    }

    #[test]
    fn x_p_squared() {
        let (p, x, u) = (H::p(1, 0), H::x(1, 0), H::u(1));
        let p2 = &p * &p;
        let h = &x * &p2;
        let rep = depth_one_decompose(&h);
        assert!(rep.s0.is_zero());
        assert_eq!(rep.d0, (&u * &p).scale(&q(-2, 1)));
        assert_eq!(rep.pairs, vec![(p2, &x * &u)]);
        assert_eq!(rep.reconstruct(), h);
    }

    #[test]
    fn u_p_squared() {
        let (p, u) = (H::p(1, 0), H::u(1));
        let p2 = &p * &p;
        let h = &u * &p2;
        let rep = depth_one_decompose(&h);
        assert!(rep.s0.is_zero() && rep.d0.is_zero());
        assert_eq!(rep.pairs, vec![(p2, (&u * &u).scale(&q(1, 2)))]);
        assert_eq!(rep.reconstruct(), h);
    }
}
