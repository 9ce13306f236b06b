//! Exact Poisson moment functional and the multiple orthogonality checker.

use num_traits::Zero;
use serde::Serialize;

use super::{CharlierParams, CharlierTable};
use crate::error::{Error, Result};
use crate::multiindex::MultiIndex;
use crate::polycore::{Rational, ScaledScalar, UniPoly};

/// `sum_{k>=0} p(k) sigma_j^k / k!` for the 0-based direction `j`.
///
/// Uses the factorial-moment identity
/// `sum_k k(k-1)...(k-m+1) sigma^k / k! = sigma^m e^sigma`, so the result is
/// an exact rational multiple of `e^{sigma_j}`.
pub fn poisson_functional(j: usize, p: &UniPoly, params: &CharlierParams) -> Result<ScaledScalar> {
    if j >= params.r() {
        return Err(Error::Direction {
            direction: j + 1,
            r: params.r(),
        });
    }
    let sigma = params.sigma_at(j);
    let mut power = Rational::from_integer(1.into());
    let mut acc = Rational::zero();
    for c in p.to_falling_factorial() {
        acc += c * &power;
        power *= sigma;
    }
    Ok(ScaledScalar::new(
        acc,
        ScaledScalar::exp_unit(j, params.r()).exponents().to_vec(),
    ))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrthoCondition {
    /// 1-based direction.
    pub direction: usize,
    pub l: u32,
    #[serde(with = "crate::serde_util::rational_str")]
    pub mantissa: Rational,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrthogonalityReport {
    pub index: MultiIndex,
    pub conditions: Vec<OrthoCondition>,
}

impl OrthogonalityReport {
    pub fn pass(&self) -> bool {
        self.conditions.iter().all(|c| c.pass)
    }
}

/// Checks `sum_k C_n(k) k^l sigma_j^k / k! = 0` for `l < n_j`, every `j`.
pub fn check_orthogonality(n: &MultiIndex, table: &CharlierTable) -> Result<OrthogonalityReport> {
    let c = table.entry(n)?;
    let params = table.params();
    let mut conditions = Vec::new();
    for j in 0..params.r() {
        let mut probe = c.clone();
        for l in 0..n.get(j) {
            let value = poisson_functional(j, &probe, params)?;
            conditions.push(OrthoCondition {
                direction: j + 1,
                l,
                pass: value.is_zero(),
                mantissa: value.mantissa().clone(),
            });
            probe = probe.shift_up(1);
        }
    }
    Ok(OrthogonalityReport {
        index: n.clone(),
        conditions,
    })
}

/// Orthogonality for every index with `|n| <= max_degree` (clamped to the table).
pub fn check_orthogonality_all(
    table: &CharlierTable,
    max_degree: usize,
) -> Vec<OrthogonalityReport> {
    use rayon::prelude::*;
    MultiIndex::up_to(table.r(), max_degree.min(table.max_total_degree()))
        .par_iter()
        .map(|n| check_orthogonality(n, table).expect("index is in the table"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charlier::build_table;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn functional_examples() {
        let p = CharlierParams::from_fractions(&[(2, 1)]).unwrap();
        let mass = poisson_functional(0, &UniPoly::one(), &p).unwrap();
        assert_eq!(mass, ScaledScalar::new(q(1, 1), vec![1]));
        let mean = poisson_functional(0, &UniPoly::k(), &p).unwrap();
        assert_eq!(mean, ScaledScalar::new(q(2, 1), vec![1]));
        let centered = poisson_functional(0, &UniPoly::linear(&q(2, 1)), &p).unwrap();
        assert!(centered.is_zero());
        assert!(poisson_functional(1, &UniPoly::one(), &p).is_err());
    }

    #[test]
    fn functional_against_partial_sums() {
        // Oracle: sum_{k<60} k 2^k / k! converges to 2 e^2; dividing by the
        // partial sum of 2^k / k! isolates the mantissa.
        use num_traits::ToPrimitive;
        let mut num = 0.0f64;
        let mut den = 0.0f64;
        let mut term = 1.0f64;
        for k in 0..60 {
            if k > 0 {
                term *= 2.0 / k as f64;
            }
            num += k as f64 * term;
            den += term;
        }
        let p = CharlierParams::from_fractions(&[(2, 1)]).unwrap();
        let exact = poisson_functional(0, &UniPoly::k(), &p).unwrap();
        assert!((num / den - exact.mantissa().to_f64().unwrap()).abs() < 1e-12);
    }

    #[test]
    fn orthogonality_examples() {
        let p = CharlierParams::from_fractions(&[(1, 1), (2, 1)]).unwrap();
        let t = build_table(&p, 3);
        let zero = check_orthogonality(&MultiIndex::zero(2), &t).unwrap();
        assert!(zero.conditions.is_empty() && zero.pass());

        let e1 = check_orthogonality(&MultiIndex::unit(0, 2), &t).unwrap();
        assert_eq!(e1.conditions.len(), 1);
        assert_eq!(e1.conditions[0].mantissa, q(0, 1));

        let both = check_orthogonality(&MultiIndex::new(vec![1, 1]), &t).unwrap();
        assert_eq!(both.conditions.len(), 2);
        assert!(both.pass());

        let twos = check_orthogonality(&MultiIndex::new(vec![2, 1]), &t).unwrap();
        assert_eq!(twos.conditions.len(), 3);
        assert!(twos.pass());
    }

    #[test]
    fn orthogonality_detects_wrong_polynomial() {
        let p = CharlierParams::from_fractions(&[(1, 1), (2, 1)]).unwrap();
        let mut t = build_table(&p, 2);
        let n = MultiIndex::new(vec![1, 1]);
        t.replace(&n, UniPoly::from_ints(&[3, -4, 1])).unwrap();
        let rep = check_orthogonality(&n, &t).unwrap();
        assert!(!rep.pass());
        // shifted constant 1 gives mantissa 1 in each direction
        assert!(rep.conditions.iter().all(|c| c.mantissa == q(1, 1)));
    }
}
