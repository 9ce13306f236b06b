//! Exact multiple Charlier polynomials and the non-Hermitian oscillator
//! model that diagonalises them.
//!
//! * [`polycore`]: rationals, `e^sigma`-scaled scalars, polynomials in `k`.
//! * [`charlier`]: recurrence table, explicit formula, orthogonality and
//!   lattice identity checkers.
//! * [`series`]: truncated multivariate power series and the generating
//!   function.
//! * [`fock`]: Bargmann-representation operators and interior-exact operator
//!   identity checks.
//! * [`strategies`]: the three full-lattice computation routes used by the
//!   benchmark.

pub mod charlier;
mod error;
pub mod fock;
mod multiindex;
pub mod polycore;
mod serde_util;
pub mod series;
pub mod strategies;

pub use charlier::{build_table, eval_explicit, monic_charlier, CharlierParams, CharlierTable};
pub use error::{Error, Result};
pub use multiindex::MultiIndex;
pub use polycore::{parse_rational, Rational, ScaledScalar, UniPoly};
pub use series::MSeries;
