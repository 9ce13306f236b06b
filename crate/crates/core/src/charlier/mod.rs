//! Multiple Charlier polynomials `C_n(k)` over the multi-index lattice.
//!
//! Three independent constructions live in the crate: the nearest-neighbour
//! recurrence ([`build_table`]), the explicit multiple sum
//! ([`eval_explicit`]), and the generating function (see
//! [`crate::series::gen_lhs`]). The checkers in [`identities`] and
//! [`orthogonality`] verify the lattice relations as exact zero-polynomial
//! tests.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multiindex::MultiIndex;
use crate::polycore::{factorial, pochhammer, Rational, ScaledScalar, UniPoly};

mod export;
pub mod identities;
pub mod orthogonality;

pub use export::{TableDocument, TableEntryDocument};
pub use identities::{
    check_backward, check_combined_difference, check_compatibility, check_explicit_agreement,
    check_forward, check_path_independence, check_rij_all, check_rij_polynomial, IdentityFailure,
    IdentityReport, RijReport,
};
pub use orthogonality::{
    check_orthogonality, check_orthogonality_all, poisson_functional, OrthoCondition,
    OrthogonalityReport,
};

/// Parameters `sigma_1, ..., sigma_r`: positive and pairwise distinct.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ParamsDocument", into = "ParamsDocument")]
pub struct CharlierParams {
    sigma: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
struct ParamsDocument {
    r: usize,
    #[serde(with = "crate::serde_util::rational_vec")]
    sigma: Vec<Rational>,
}

impl TryFrom<ParamsDocument> for CharlierParams {
    type Error = Error;

    fn try_from(doc: ParamsDocument) -> Result<Self> {
        if doc.r != doc.sigma.len() {
            return Err(Error::DimensionMismatch {
                expected: doc.r,
                found: doc.sigma.len(),
            });
        }
        CharlierParams::new(doc.sigma)
    }
}

impl From<CharlierParams> for ParamsDocument {
    fn from(p: CharlierParams) -> Self {
        ParamsDocument {
            r: p.r(),
            sigma: p.sigma,
        }
    }
}

impl CharlierParams {
    pub fn new(sigma: Vec<Rational>) -> Result<Self> {
        if sigma.is_empty() {
            return Err(Error::InvalidParams("need at least one direction".into()));
        }
        if let Some(s) = sigma.iter().find(|s| !s.is_positive()) {
            return Err(Error::InvalidParams(format!("sigma = {s} is not positive")));
        }
        for (a, s) in sigma.iter().enumerate() {
            if sigma[..a].contains(s) {
                return Err(Error::InvalidParams(format!("sigma = {s} is repeated")));
            }
        }
        Ok(Self { sigma })
    }

    /// Convenience constructor from `(numerator, denominator)` pairs.
    pub fn from_fractions(pairs: &[(i64, i64)]) -> Result<Self> {
        Self::new(
            pairs
                .iter()
                .map(|&(n, d)| Rational::new(n.into(), d.into()))
                .collect(),
        )
    }

    pub fn r(&self) -> usize {
        self.sigma.len()
    }

    pub fn sigma(&self) -> &[Rational] {
        &self.sigma
    }

    /// `sigma` in the 0-based direction `j`.
    pub fn sigma_at(&self, j: usize) -> &Rational {
        &self.sigma[j]
    }

    pub fn check_index(&self, n: &MultiIndex) -> Result<()> {
        if n.r() != self.r() {
            return Err(Error::DimensionMismatch {
                expected: self.r(),
                found: n.r(),
            });
        }
        Ok(())
    }
}

/// `C_n` for every `|n| <= max_total_degree` at fixed parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharlierTable {
    params: CharlierParams,
    max_total_degree: usize,
    entries: BTreeMap<MultiIndex, UniPoly>,
}

impl CharlierTable {
    /// Assembles a table from externally supplied entries. Coverage of every
    /// index up to `max_total_degree` is required; the polynomials themselves
    /// are not validated (that is what the checkers are for).
    pub fn from_entries(
        params: CharlierParams,
        max_total_degree: usize,
        entries: BTreeMap<MultiIndex, UniPoly>,
    ) -> Result<Self> {
        for n in entries.keys() {
            params.check_index(n)?;
            if n.total() > max_total_degree {
                return Err(Error::Table(format!(
                    "entry {n} exceeds max total degree {max_total_degree}"
                )));
            }
        }
        if let Some(n) = MultiIndex::up_to(params.r(), max_total_degree)
            .into_iter()
            .find(|n| !entries.contains_key(n))
        {
            return Err(Error::MissingIndex(n.entries().to_vec()));
        }
        Ok(Self {
            params,
            max_total_degree,
            entries,
        })
    }

    pub fn params(&self) -> &CharlierParams {
        &self.params
    }

    pub fn max_total_degree(&self) -> usize {
        self.max_total_degree
    }

    pub fn r(&self) -> usize {
        self.params.r()
    }

    pub fn get(&self, n: &MultiIndex) -> Option<&UniPoly> {
        self.entries.get(n)
    }

    pub fn entry(&self, n: &MultiIndex) -> Result<&UniPoly> {
        self.entries
            .get(n)
            .ok_or_else(|| Error::MissingIndex(n.entries().to_vec()))
    }

    /// Entries in graded-lex order.
    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, &UniPoly)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Overwrites one entry. Used to inject faults for negative controls.
    pub fn replace(&mut self, n: &MultiIndex, poly: UniPoly) -> Result<UniPoly> {
        let slot = self
            .entries
            .get_mut(n)
            .ok_or_else(|| Error::MissingIndex(n.entries().to_vec()))?;
        Ok(std::mem::replace(slot, poly))
    }

    /// `C_n` obtained from the recurrence in the 0-based direction `j`
    /// (requires `n_j > 0`) using only lower shells of this table.
    pub fn recurrence_step(&self, n: &MultiIndex, j: usize) -> Option<UniPoly> {
        recurrence_step(&self.params, &self.entries, n, j)
    }

    /// Largest coefficient bit length across the table.
    pub fn max_bits(&self) -> u64 {
        self.entries
            .values()
            .map(UniPoly::max_bits)
            .max()
            .unwrap_or(0)
    }
}

/// `C_{m+e_j} = (k - sigma_j - |m|) C_m - sum_i m_i sigma_i C_{m-e_i}`
/// with `m = n - e_j`.
fn recurrence_step(
    params: &CharlierParams,
    entries: &BTreeMap<MultiIndex, UniPoly>,
    n: &MultiIndex,
    j: usize,
) -> Option<UniPoly> {
    let m = n.minus_unit(j)?;
    let shift = params.sigma_at(j) + Rational::from_integer(BigInt::from(m.total()));
    let mut out = &UniPoly::linear(&shift) * entries.get(&m)?;
    for i in 0..params.r() {
        if let Some(lower) = m.minus_unit(i) {
            let c = params.sigma_at(i) * Rational::from_integer(m.get(i).into());
            out = &out - &entries.get(&lower)?.scale(&c);
        }
    }
    Some(out)
}

/// Builds `C_n` for all `|n| <= max_total_degree` shell by shell, stepping in
/// the smallest direction with `n_j > 0`.
pub fn build_table(params: &CharlierParams, max_total_degree: usize) -> CharlierTable {
    let r = params.r();
    let mut entries = BTreeMap::new();
    entries.insert(MultiIndex::zero(r), UniPoly::one());
    for m in 1..=max_total_degree {
        let shell: Vec<(MultiIndex, UniPoly)> = MultiIndex::shell(r, m)
            .into_par_iter()
            .map(|n| {
                let j = n
                    .entries()
                    .iter()
                    .position(|&v| v > 0)
                    .expect("nonzero index in a positive shell");
                let poly =
                    recurrence_step(params, &entries, &n, j).expect("lower shells are complete");
                (n, poly)
            })
            .collect();
        entries.extend(shell);
    }
    CharlierTable {
        params: params.clone(),
        max_total_degree,
        entries,
    }
}

/// `(-k)_m = (-k)(-k+1)...(-k+m-1)` as a polynomial in `k`.
pub(crate) fn neg_k_pochhammer(m: usize) -> UniPoly {
    (0..m).fold(UniPoly::one(), |acc, i| {
        let factor = UniPoly::from_coeffs(vec![
            Rational::from_integer(BigInt::from(i)),
            -Rational::one(),
        ]);
        &acc * &factor
    })
}

/// The explicit multiple-sum formula
/// `sum_l prod_i (-n_i)_{l_i} (-sigma_i)^{n_i-l_i} / l_i!  *  (-k)_{|l|}`.
pub fn eval_explicit(n: &MultiIndex, params: &CharlierParams) -> Result<UniPoly> {
    params.check_index(n)?;
    let total = n.total();
    // Per-direction factors, indexed by l_i.
    let factors: Vec<Vec<Rational>> = (0..params.r())
        .map(|i| {
            let ni = n.get(i) as usize;
            let neg_n = -Rational::from_integer(BigInt::from(ni));
            let neg_sigma = -params.sigma_at(i).clone();
            (0..=ni)
                .map(|l| {
                    pochhammer(&neg_n, l) * num_traits::pow(neg_sigma.clone(), ni - l)
                        / Rational::from_integer(factorial(l))
                })
                .collect()
        })
        .collect();

    // Collect the scalar weight of each (-k)_{|l|} before touching polynomials.
    let mut by_length = vec![Rational::zero(); total + 1];
    let mut l = vec![0usize; params.r()];
    loop {
        let weight = l
            .iter()
            .enumerate()
            .fold(Rational::one(), |acc, (i, &li)| acc * &factors[i][li]);
        by_length[l.iter().sum::<usize>()] += weight;
        // odometer over the box 0 <= l_i <= n_i
        let mut i = 0;
        loop {
            if i == l.len() {
                return Ok(by_length
                    .iter()
                    .enumerate()
                    .fold(UniPoly::zero(), |acc, (m, w)| {
                        &acc + &neg_k_pochhammer(m).scale(w)
                    }));
            }
            if l[i] < n.get(i) as usize {
                l[i] += 1;
                break;
            }
            l[i] = 0;
            i += 1;
        }
    }
}

/// Classical monic Charlier polynomial via the terminating `2F0` sum
/// `(-sigma)^n sum_s (-n)_s (-k)_s / s! (-1/sigma)^s`.
pub fn monic_charlier(n: usize, sigma: &Rational) -> Result<UniPoly> {
    if sigma.is_zero() {
        return Err(Error::ZeroSigma);
    }
    let neg_n = -Rational::from_integer(BigInt::from(n));
    let ratio = -sigma.recip();
    let mut acc = UniPoly::zero();
    for s in 0..=n {
        let w = pochhammer(&neg_n, s) * num_traits::pow(ratio.clone(), s)
            / Rational::from_integer(factorial(s));
        acc = &acc + &neg_k_pochhammer(s).scale(&w);
    }
    Ok(acc.scale(&num_traits::pow(-sigma.clone(), n)))
}

/// Squared state normalisation `N_k^2 = e^{-2 sigma_1} / (k! r^k)`.
///
/// `N_k` itself carries a square root, so only the square is stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizationLedger {
    pub k: usize,
    pub n_sq: ScaledScalar,
}

impl NormalizationLedger {
    pub fn new(k: usize, r: usize) -> Self {
        let denom = factorial(k) * num_traits::pow(BigInt::from(r), k);
        let mut exponents = vec![0; r];
        exponents[0] = -2;
        Self {
            k,
            n_sq: ScaledScalar::new(Rational::new(BigInt::one(), denom), exponents),
        }
    }

    /// `N_{k-1}^2 / N_k^2`, expected to be `r k`.
    pub fn step_ratio(&self, r: usize) -> Option<ScaledScalar> {
        let prev = Self::new(self.k.checked_sub(1)?, r);
        Some(&prev.n_sq / &self.n_sq)
    }
}
