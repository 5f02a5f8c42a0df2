//! Exact Laurent polynomials and rational functions over labeled lattices.

mod gcd;
mod laurent;
mod rational;

pub use gcd::poly_gcd;
pub use laurent::{grlex, render_monomial, Exponent, LaurentPoly};
pub use rational::RationalFn;
