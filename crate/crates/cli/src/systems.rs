//! The three model systems.

use jetsplit::lifting::BaseVectorField;
use jetsplit::{FloatHamiltonian, Hamiltonian, Scalar};

/// Damped harmonic oscillator `H = ½p² + ½x² + γu`.
pub fn dho_hamiltonian(gamma: f64) -> FloatHamiltonian {
    format!("0.5*p^2 + 0.5*x^2 + {gamma:?}*u")
        .parse()
        .expect("valid DHO Hamiltonian")
}

/// Dissipative double well `H = ½p² + (x² − 1)² + σp²u`.
pub fn double_well_hamiltonian(sigma: f64) -> FloatHamiltonian {
    format!("0.5*p^2 + (x^2 - 1)^2 + {sigma:?}*u*p^2")
        .parse()
        .expect("valid double-well Hamiltonian")
}

/// Forced contact Van der Pol oscillator
/// `H = pu − ε(1 − x²)u − ½x² + A cos ωt`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Vdp {
    pub eps: f64,
    pub amp: f64,
    pub omega: f64,
}

impl Vdp {
    fn potential<S: Scalar>(&self, x: &S, u: &S, t: f64) -> S {
        let x2 = x.square();
        (x2.clone() - 1.0) * u.clone() * self.eps - x2 * 0.5 + self.amp * (self.omega * t).cos()
    }
}

impl Hamiltonian for Vdp {
    fn eval<S: Scalar>(&self, x: &[S], u: &S, p: &[S], t: f64) -> S {
        p[0].clone() * u.clone() + self.potential(&x[0], u, t)
    }
}

/// Base field of [`Vdp`]: `ẋ = u`, `u̇ = ε(1 − x²)u + ½x² − A cos ωt`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VdpBase(pub Vdp);

impl BaseVectorField for VdpBase {
    fn eval<S: Scalar>(&self, x: &[S], u: &S, t: f64) -> (Vec<S>, S) {
        (vec![u.clone()], self.0.potential(&x[0], u, t))
    }
}
