//! Exact arithmetic: rationals, sparse polynomials and ħ-truncated series.

mod coeff;
mod hbar;
mod poly;
pub mod rational;

pub use coeff::{Coefficient, HbarRing};
pub use hbar::{hbar_mul, HbarPoly};
pub use poly::{
    poly_mul, poly_mul_capped, poly_partial, vars, Monomial, Polynomial, PolynomialJson, Vars,
    DEFAULT_DEGREE_CAP,
};
pub use rational::{format_rational, parse_rational, rat, ratio, Rational};
