//! Exact arithmetic in the field of multivariate rational functions over Q.

mod gcd;
mod monomial;
mod parse;
mod poly;
mod rational;

pub use gcd::{coprime_base, gcd};
pub use monomial::{Monomial, MAX_VARS};
pub use parse::parse_expression;
pub use poly::Polynomial;
pub use rational::RationalFunction;
