//! The three routes to the full lattice of values `C_n(k)`, `|n| <= nmax`,
//! `k <= kmax`: recurrence table, explicit formula, generating function.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::charlier::{build_table, eval_explicit, CharlierParams};
use crate::error::Error;
use crate::multiindex::MultiIndex;
use crate::polycore::{rational_bits, Rational};
use crate::series::gen_lhs;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Recurrence,
    Explicit,
    Genfunc,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::Recurrence, Strategy::Explicit, Strategy::Genfunc];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Recurrence => "recurrence",
            Strategy::Explicit => "explicit",
            Strategy::Genfunc => "genfunc",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Strategy::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| Error::InvalidParams(format!("unknown strategy {s:?}")))
    }
}

/// `C_n(k)` for `k = 0..=kmax`, per index, plus the largest coefficient bit
/// length seen while computing them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeValues {
    pub values: BTreeMap<MultiIndex, Vec<Rational>>,
    pub peak_bits: u64,
}

impl LatticeValues {
    /// First `(index, k)` where the two value sets differ.
    pub fn first_disagreement(&self, other: &LatticeValues) -> Option<(MultiIndex, usize)> {
        for (n, vals) in &self.values {
            match other.values.get(n) {
                None => return Some((n.clone(), 0)),
                Some(o) => {
                    if let Some(k) = (0..vals.len().max(o.len())).find(|&k| vals.get(k) != o.get(k))
                    {
                        return Some((n.clone(), k));
                    }
                }
            }
        }
        other
            .values
            .keys()
            .find(|n| !self.values.contains_key(n))
            .map(|n| (n.clone(), 0))
    }
}

fn peak(values: &BTreeMap<MultiIndex, Vec<Rational>>) -> u64 {
    values
        .values()
        .flatten()
        .map(rational_bits)
        .max()
        .unwrap_or(0)
}

pub fn compute(
    strategy: Strategy,
    params: &CharlierParams,
    nmax: usize,
    kmax: usize,
) -> LatticeValues {
    let ks: Vec<i64> = (0..=kmax as i64).collect();
    match strategy {
        Strategy::Recurrence => {
            let table = build_table(params, nmax);
            let values: BTreeMap<_, _> = table
                .iter()
                .map(|(n, c)| (n.clone(), ks.iter().map(|&k| c.eval_int(k)).collect()))
                .collect();
            let peak_bits = table.max_bits().max(peak(&values));
            LatticeValues { values, peak_bits }
        }
        Strategy::Explicit => {
            let polys: Vec<_> = MultiIndex::up_to(params.r(), nmax)
                .into_par_iter()
                .map(|n| {
                    let c = eval_explicit(&n, params).expect("index matches params");
                    (n, c)
                })
                .collect();
            let poly_bits = polys.iter().map(|(_, c)| c.max_bits()).max().unwrap_or(0);
            let values: BTreeMap<_, _> = polys
                .into_iter()
                .map(|(n, c)| {
                    let v = ks.iter().map(|&k| c.eval_int(k)).collect();
                    (n, v)
                })
                .collect();
            let peak_bits = poly_bits.max(peak(&values));
            LatticeValues { values, peak_bits }
        }
        Strategy::Genfunc => {
            let series: Vec<_> = (0..=kmax)
                .into_par_iter()
                .map(|k| gen_lhs(k, params, nmax))
                .collect();
            let series_bits = series
                .iter()
                .flat_map(|s| s.terms().map(|(_, c)| rational_bits(c)))
                .max()
                .unwrap_or(0);
            let values: BTreeMap<_, _> = MultiIndex::up_to(params.r(), nmax)
                .into_iter()
                .map(|n| {
                    let fact = Rational::from_integer(n.factorial());
                    let v = series.iter().map(|s| s.get(&n) * &fact).collect();
                    (n, v)
                })
                .collect();
            let peak_bits = series_bits.max(peak(&values));
            LatticeValues { values, peak_bits }
        }
    }
}

/// `C_n(k)` at one point by the named route.
pub fn value_at(
    strategy: Strategy,
    params: &CharlierParams,
    n: &MultiIndex,
    k: usize,
) -> crate::Result<Rational> {
    params.check_index(n)?;
    Ok(match strategy {
        Strategy::Recurrence => build_table(params, n.total()).entry(n)?.eval_int(k as i64),
        Strategy::Explicit => eval_explicit(n, params)?.eval_int(k as i64),
        Strategy::Genfunc => {
            gen_lhs(k, params, n.total()).get(n) * Rational::from_integer(n.factorial())
        }
    })
}
