//! Exact coefficient arithmetic: rationals, Laurent polynomials in the
//! registered variables, and canonical rational functions over them.

mod laurent;
mod monomial;
mod ratfunc;
pub mod registry;
mod rpoly;
mod text;

pub use laurent::LaurentPoly;
pub use monomial::Monomial;
pub use ratfunc::RatFunc;
pub use registry::Var;

/// Arbitrary-precision rational number.
pub type BigRat = num_rational::BigRational;
