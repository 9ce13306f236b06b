//! Exact scalars and univariate polynomials over arbitrary-precision
//! rationals. Everything above this module is built from these pieces.

mod rational;
mod scaled;
mod unipoly;

pub use rational::{factorial, parse_rational, pochhammer, rational_bits, Rational};
pub use scaled::ScaledScalar;
pub use unipoly::UniPoly;
