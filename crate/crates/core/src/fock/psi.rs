//! Rationalised single-mode matrix elements of `e^{-sigma a+} e^{a}`.
//!
//! `psi_{n,k} = phi_{n,k} / sqrt(n! k!)` with
//! `phi_{n,k} = k! [z^k] e^{-sigma z} (1 + z)^n`, which is rational.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::charlier::monic_charlier;
use crate::error::{Error, Result};
use crate::multiindex::MultiIndex;
use crate::polycore::{factorial, Rational};
use crate::series::{exp_linear, MSeries};

pub fn psi_rationalized(n: usize, k: usize, sigma1: &Rational, cutoff: usize) -> Result<Rational> {
    if sigma1.is_zero() {
        return Err(Error::ZeroSigma);
    }
    let top = n.max(k);
    if top > cutoff {
        return Err(Error::BeyondCutoff {
            degree: top,
            cutoff,
        });
    }
    Ok(phi_row(n, sigma1, cutoff)[k].clone())
}

/// `phi_{n,k}` for `k = 0..=cutoff`.
fn phi_row(n: usize, sigma1: &Rational, cutoff: usize) -> Vec<Rational> {
    let base = MSeries::linear(Rational::one(), &[Rational::one()], cutoff).pow(n);
    let s = exp_linear(&[-sigma1.clone()], cutoff)
        .mul(&base)
        .expect("one variable");
    (0..=cutoff)
        .map(|k| s.get(&MultiIndex::new(vec![k as u32])) * Rational::from_integer(factorial(k)))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PsiFailure {
    pub relation: String,
    pub n: usize,
    pub k: usize,
    #[serde(with = "crate::serde_util::rational_str")]
    pub lhs: Rational,
    #[serde(with = "crate::serde_util::rational_str")]
    pub rhs: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PsiReport {
    #[serde(with = "crate::serde_util::rational_str")]
    pub sigma: Rational,
    pub cases: usize,
    pub failures: Vec<PsiFailure>,
}

impl PsiReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// For `n <= nmax`, `k <= kmax`: `phi_{n,k} = (-sigma)^{k-n} p_n(k)` and
/// `k phi_{n,k} = (n + sigma) phi_{n,k} - n phi_{n-1,k} - sigma phi_{n+1,k}`.
pub fn check_psi(nmax: usize, kmax: usize, sigma1: &Rational) -> Result<PsiReport> {
    if sigma1.is_zero() {
        return Err(Error::ZeroSigma);
    }
    let cutoff = kmax.max(nmax + 1);
    let rows: Vec<Vec<Rational>> = (0..=nmax + 1).map(|n| phi_row(n, sigma1, cutoff)).collect();
    let mut rep = PsiReport {
        sigma: sigma1.clone(),
        cases: 0,
        failures: Vec::new(),
    };
    let neg = -sigma1.clone();
    for n in 0..=nmax {
        let p = monic_charlier(n, sigma1)?;
        for (k, phi) in rows[n].iter().enumerate().take(kmax + 1) {
            let exp = k as i64 - n as i64;
            let scale = if exp >= 0 {
                num_traits::pow(neg.clone(), exp as usize)
            } else {
                num_traits::pow(neg.recip(), (-exp) as usize)
            };
            let closed = scale * p.eval_int(k as i64);
            rep.cases += 1;
            if *phi != closed {
                rep.failures.push(PsiFailure {
                    relation: "closed-form".into(),
                    n,
                    k,
                    lhs: phi.clone(),
                    rhs: closed,
                });
            }

            let kk = Rational::from_integer(BigInt::from(k));
            let nn = Rational::from_integer(BigInt::from(n));
            let below = if n > 0 {
                rows[n - 1][k].clone()
            } else {
                Rational::zero()
            };
            let lhs = &kk * phi;
            let rhs = (&nn + sigma1) * phi - &nn * below - sigma1 * &rows[n + 1][k];
            rep.cases += 1;
            if lhs != rhs {
                rep.failures.push(PsiFailure {
                    relation: "recurrence".into(),
                    n,
                    k,
                    lhs,
                    rhs,
                });
            }
        }
    }
    Ok(rep)
}
