//! Symbolic algebra of contact Hamiltonians that are polynomial in the
//! momenta with polynomial `(x, u)` coefficients.

pub mod bracket;
pub mod chebyshev;
pub mod coeff;
pub mod decompose;
pub mod parse;
pub mod poly;
pub mod xu;

pub use bracket::{
    euler_operator, jacobi_bracket, lower_degree, poisson_bracket, raise_degree, scale_by,
};
pub use chebyshev::{chebyshev_surrogate, sampled_sup_error, Surrogate};
pub use coeff::Coeff;
pub use decompose::{depth_one_decompose, DepthOneRepresentation};
pub use parse::parse_hamiltonian;
pub use poly::{FloatHamiltonian, PMonomial, PolyPHamiltonian, RationalHamiltonian};
pub use xu::{XUPolynomial, XuMonomial};
