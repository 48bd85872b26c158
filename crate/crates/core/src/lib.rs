//! Contact Hamiltonian splitting integrators on the 1-jet space J¹(ℝⁿ).
//!
//! A point `(x, u, p)` carries the contact form `du − p·dx`. The crate
//! provides exact closed-form contact subflows, prolongation of base-space
//! integrators to momenta, the symbolic algebra of polynomial contact
//! Hamiltonians (Jacobi bracket, depth-one decomposition), splitting and
//! commutator compositions, and diagnostics for the conformal factor.
//!
//! ```
//! use jetsplit::{parse_scheme, run_trajectory, FloatHamiltonian, JetPoint};
//!
//! let ham: FloatHamiltonian = "0.5*p^2 + 0.5*x^2 + 0.3*u".parse().unwrap();
//! let scheme = parse_scheme("strang(drift:T=0.5*p^2, kick:V=0.5*x^2, reeb:gamma=0.3)", 1).unwrap();
//! let rec = run_trajectory(&*scheme.step, &JetPoint::scalar(1.0, 0.0, 0.0), 0.0, 0.1, 1.0, &ham).unwrap();
//! assert!((rec.sigma_cum.last().unwrap() + 0.3).abs() < 1e-12);
//! ```

pub mod algebra;
pub mod composition;
pub mod contact;
pub mod dual;
pub mod error;
pub mod grammar;
pub mod lifting;
pub mod subflows;

pub use algebra::{
    chebyshev_surrogate, depth_one_decompose, euler_operator, jacobi_bracket, lower_degree,
    parse_hamiltonian, poisson_bracket, raise_degree, scale_by, Coeff, DepthOneRepresentation,
    FloatHamiltonian, PolyPHamiltonian, RationalHamiltonian, Surrogate, XUPolynomial,
};
pub use composition::{
    build_universal_scheme, run_trajectory, Gadget, GadgetKind, ProlongedRealization, RunRecord,
    Scheme, Step,
};
pub use contact::{
    conformal_rate, contact_vector_field, pullback_conformal_factor, verify_contactomorphism,
    ContactReport, ContactStep, FlowMap, Hamiltonian, JetPoint,
};
pub use dual::{Dual, Scalar};
pub use error::{Error, Result};
pub use grammar::{parse_scheme, ParsedScheme};
pub use lifting::{reference_contact_flow, reference_solve, Tolerance};
pub use num_rational::BigRational;
