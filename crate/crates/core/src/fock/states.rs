use num_traits::{One, Zero};

use crate::charlier::CharlierParams;
use crate::error::{Error, Result};
use crate::polycore::Rational;
use crate::series::{exp_linear, MSeries};

/// `w_k = (z_1 + ... + z_r)^k`, the unnormalised `H_0` eigenstate that is
/// symmetric in all directions.
pub fn state_w(k: usize, r: usize, cutoff: usize) -> Result<MSeries> {
    if k > cutoff {
        return Err(Error::BeyondCutoff { degree: k, cutoff });
    }
    let ones = vec![Rational::one(); r];
    Ok(MSeries::linear(Rational::zero(), &ones, cutoff).pow(k))
}

/// `exp(-sigma . z) f(.., z_i + 1, ..)`: the similarity transform with its
/// scalar prefactor dropped.
pub fn apply_s_projective(i: usize, f: &MSeries, params: &CharlierParams) -> Result<MSeries> {
    if f.r() != params.r() {
        return Err(Error::DimensionMismatch {
            expected: params.r(),
            found: f.r(),
        });
    }
    if i >= params.r() {
        return Err(Error::Direction {
            direction: i + 1,
            r: params.r(),
        });
    }
    let neg_sigma: Vec<Rational> = params.sigma().iter().map(|s| -s.clone()).collect();
    exp_linear(&neg_sigma, f.cutoff()).mul(&f.shift_var(i))
}

/// Joint eigenstate representative `u_k = S_1 w_k`; the coefficient of `z^n`
/// is `C_n(k) / n!`.
pub fn state_u(k: usize, params: &CharlierParams, cutoff: usize) -> Result<MSeries> {
    apply_s_projective(0, &state_w(k, params.r(), cutoff)?, params)
}

/// Bargmann squared norm: `z^m` has squared norm `m_1! ... m_r!`.
pub fn bargmann_norm_sq(f: &MSeries) -> Rational {
    f.terms()
        .map(|(m, c)| c * c * Rational::from_integer(m.factorial()))
        .fold(Rational::zero(), |acc, x| acc + x)
}
