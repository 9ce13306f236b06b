//! Lattice identities checked as exact zero polynomials in `k`.

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use super::{eval_explicit, CharlierTable};
use crate::error::{Error, Result};
use crate::multiindex::MultiIndex;
use crate::polycore::{Rational, UniPoly};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityFailure {
    pub index: MultiIndex,
    /// 1-based directions the case was instantiated with.
    pub directions: Vec<usize>,
    #[serde(with = "crate::serde_util::poly_coeffs")]
    pub residual: UniPoly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub check: String,
    pub cases: usize,
    pub failures: Vec<IdentityFailure>,
}

impl IdentityReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }

    fn merge(check: &str, parts: impl IntoIterator<Item = IdentityReport>) -> Self {
        let mut out = IdentityReport {
            check: check.to_string(),
            cases: 0,
            failures: Vec::new(),
        };
        for p in parts {
            out.cases += p.cases;
            out.failures.extend(p.failures);
        }
        out
    }
}

/// Evaluates `residual` on every case in parallel; order of failures
/// follows the order of `cases`.
fn run_cases<F>(check: &str, cases: Vec<(MultiIndex, Vec<usize>)>, residual: F) -> IdentityReport
where
    F: Fn(&MultiIndex, &[usize]) -> UniPoly + Sync,
{
    let failures: Vec<IdentityFailure> = cases
        .par_iter()
        .filter_map(|(n, dirs)| {
            let res = residual(n, dirs);
            (!res.is_zero()).then(|| IdentityFailure {
                index: n.clone(),
                directions: dirs.iter().map(|d| d + 1).collect(),
                residual: res,
            })
        })
        .collect();
    IdentityReport {
        check: check.to_string(),
        cases: cases.len(),
        failures,
    }
}

fn int(v: usize) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

fn at<'a>(table: &'a CharlierTable, n: &MultiIndex) -> &'a UniPoly {
    table.get(n).expect("case generator stays inside the table")
}

/// Indices whose upward neighbours are still in the table.
fn interior(table: &CharlierTable) -> Vec<MultiIndex> {
    match table.max_total_degree().checked_sub(1) {
        Some(d) => MultiIndex::up_to(table.r(), d),
        None => Vec::new(),
    }
}

/// `C_{n+e_i} - C_{n+e_j} + (sigma_i - sigma_j) C_n = 0` for all `i < j`.
pub fn check_compatibility(table: &CharlierTable) -> IdentityReport {
    let r = table.r();
    let cases = interior(table)
        .into_iter()
        .flat_map(|n| {
            (0..r)
                .flat_map(move |i| (i + 1..r).map(move |j| (i, j)))
                .map(move |(i, j)| (n.clone(), vec![i, j]))
        })
        .collect();
    let sigma = table.params().sigma();
    run_cases("compatibility", cases, |n, d| {
        let (i, j) = (d[0], d[1]);
        let diff = at(table, &n.plus_unit(i)) - at(table, &n.plus_unit(j));
        &diff + &at(table, n).scale(&(&sigma[i] - &sigma[j]))
    })
}

/// `k C_n(k-1) = C_{n+e_j}(k) + sigma_j C_n(k)` for every direction `j`.
pub fn check_backward(table: &CharlierTable) -> IdentityReport {
    let r = table.r();
    let cases = interior(table)
        .into_iter()
        .flat_map(|n| (0..r).map(move |j| (n.clone(), vec![j])))
        .collect();
    let sigma = table.params().sigma();
    run_cases("backward", cases, |n, d| {
        let j = d[0];
        let c = at(table, n);
        let lhs = &UniPoly::k() * &c.shift(-1);
        let rhs = at(table, &n.plus_unit(j)) + &c.scale(&sigma[j]);
        &lhs - &rhs
    })
}

/// `C_n(k+1) = C_n(k) + sum_j n_j C_{n-e_j}(k)`.
pub fn check_forward(table: &CharlierTable) -> IdentityReport {
    let cases = MultiIndex::up_to(table.r(), table.max_total_degree())
        .into_iter()
        .map(|n| (n, Vec::new()))
        .collect();
    run_cases("forward", cases, |n, _| {
        let c = at(table, n);
        let mut res = &c.shift(1) - c;
        for j in 0..n.r() {
            if let Some(lower) = n.minus_unit(j) {
                res = &res - &at(table, &lower).scale(&int(n.get(j) as usize));
            }
        }
        res
    })
}

/// Eliminating `C_{n+e_j}` between the recurrence and the backward relation:
/// `k C_n(k-1) = (k - |n|) C_n(k) - sum_i n_i sigma_i C_{n-e_i}(k)`.
pub fn check_combined_difference(table: &CharlierTable) -> IdentityReport {
    let cases = MultiIndex::up_to(table.r(), table.max_total_degree())
        .into_iter()
        .map(|n| (n, Vec::new()))
        .collect();
    let sigma = table.params().sigma();
    run_cases("difference", cases, |n, _| {
        let c = at(table, n);
        let lhs = &UniPoly::k() * &c.shift(-1);
        let mut rhs = &UniPoly::linear(&int(n.total())) * c;
        for (i, s) in sigma.iter().enumerate() {
            if let Some(lower) = n.minus_unit(i) {
                rhs = &rhs - &at(table, &lower).scale(&(s * int(n.get(i) as usize)));
            }
        }
        &lhs - &rhs
    })
}

/// Result of the symmetry relation check: the relation derived from
/// `R_ij |k>> = 0`, and the variant with the index placement
/// `sum_{s != i} n_i C_{n+e_s-e_i}` reported alongside.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RijReport {
    pub corrected: IdentityReport,
    pub printed: IdentityReport,
}

impl RijReport {
    pub fn pass(&self) -> bool {
        self.corrected.pass()
    }

    pub fn printed_holds(&self) -> bool {
        self.printed.pass()
    }
}

fn rij_common(table: &CharlierTable, n: &MultiIndex, i: usize, j: usize) -> UniPoly {
    let sigma = table.params().sigma();
    let c = at(table, n);
    let ds = &sigma[i] - &sigma[j];
    let ni = Rational::from_integer(n.get(i).into());
    let nj = Rational::from_integer(n.get(j).into());
    let mut res = c.scale(&(ni - nj + &ds));
    res = &res + at(table, &n.plus_unit(i));
    res = &res - at(table, &n.plus_unit(j));
    for s in 0..n.r() {
        if let Some(lower) = n.minus_unit(s) {
            res = &res + &at(table, &lower).scale(&(&ds * int(n.get(s) as usize)));
        }
    }
    res
}

/// Corrected form: `sum_{s != i} n_s C_{n+e_i-e_s} - sum_{s != j} n_s C_{n+e_j-e_s} + ...`.
fn rij_corrected(table: &CharlierTable, n: &MultiIndex, i: usize, j: usize) -> UniPoly {
    let mut res = rij_common(table, n, i, j);
    for s in 0..n.r() {
        let Some(lower) = n.minus_unit(s) else {
            continue;
        };
        let w = int(n.get(s) as usize);
        if s != i {
            res = &res + &at(table, &lower.plus_unit(i)).scale(&w);
        }
        if s != j {
            res = &res - &at(table, &lower.plus_unit(j)).scale(&w);
        }
    }
    res
}

/// Printed form: `sum_{s != i} n_i C_{n+e_s-e_i} - sum_{s != j} n_j C_{n+e_s-e_j} + ...`.
fn rij_printed(table: &CharlierTable, n: &MultiIndex, i: usize, j: usize) -> UniPoly {
    let mut res = rij_common(table, n, i, j);
    for s in 0..n.r() {
        if s != i {
            if let Some(lower) = n.minus_unit(i) {
                res = &res + &at(table, &lower.plus_unit(s)).scale(&int(n.get(i) as usize));
            }
        }
        if s != j {
            if let Some(lower) = n.minus_unit(j) {
                res = &res - &at(table, &lower.plus_unit(s)).scale(&int(n.get(j) as usize));
            }
        }
    }
    res
}

/// Polynomial consequence of `R_ij |k>> = 0` for 0-based directions `i != j`,
/// over every index whose upward neighbours are in the table.
pub fn check_rij_polynomial(table: &CharlierTable, i: usize, j: usize) -> Result<RijReport> {
    let r = table.r();
    for d in [i, j] {
        if d >= r {
            return Err(Error::Direction {
                direction: d + 1,
                r,
            });
        }
    }
    if i == j {
        return Err(Error::InvalidParams(
            "R_ij needs distinct directions".into(),
        ));
    }
    let cases: Vec<_> = interior(table)
        .into_iter()
        .map(|n| (n, vec![i, j]))
        .collect();
    Ok(RijReport {
        corrected: run_cases("rij", cases.clone(), |n, d| {
            rij_corrected(table, n, d[0], d[1])
        }),
        printed: run_cases("rij-printed", cases, |n, d| {
            rij_printed(table, n, d[0], d[1])
        }),
    })
}

/// [`check_rij_polynomial`] over every pair `i < j`.
pub fn check_rij_all(table: &CharlierTable) -> RijReport {
    let r = table.r();
    let reports: Vec<RijReport> = (0..r)
        .flat_map(|i| (i + 1..r).map(move |j| (i, j)))
        .map(|(i, j)| check_rij_polynomial(table, i, j).expect("valid pair"))
        .collect();
    RijReport {
        corrected: IdentityReport::merge("rij", reports.iter().map(|p| p.corrected.clone())),
        printed: IdentityReport::merge("rij-printed", reports.into_iter().map(|p| p.printed)),
    }
}

/// Recomputes each entry through every admissible direction, not just the
/// one used by the builder.
pub fn check_path_independence(table: &CharlierTable) -> IdentityReport {
    let cases = table
        .iter()
        .flat_map(|(n, _)| {
            (0..n.r())
                .filter(|&j| n.get(j) > 0)
                .map(move |j| (n.clone(), vec![j]))
        })
        .collect();
    run_cases("path-independence", cases, |n, d| {
        let via = table
            .recurrence_step(n, d[0])
            .expect("lower shells present");
        &via - at(table, n)
    })
}

/// Table entries against the explicit multiple-sum formula.
pub fn check_explicit_agreement(table: &CharlierTable) -> IdentityReport {
    let cases = table.iter().map(|(n, _)| (n.clone(), Vec::new())).collect();
    run_cases("explicit-agreement", cases, |n, _| {
        let explicit = eval_explicit(n, table.params()).expect("index matches params");
        &explicit - at(table, n)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charlier::{build_table, CharlierParams};

    fn idx(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    fn table_12(d: usize) -> CharlierTable {
        build_table(
            &CharlierParams::from_fractions(&[(1, 1), (2, 1)]).unwrap(),
            d,
        )
    }

    #[test]
    fn compatibility_examples() {
        assert!(check_compatibility(&table_12(1)).pass());
        let one = build_table(&CharlierParams::from_fractions(&[(1, 1)]).unwrap(), 5);
        let rep = check_compatibility(&one);
        assert_eq!(rep.cases, 0);
        assert!(rep.pass());
        let t3 = build_table(
            &CharlierParams::from_fractions(&[(1, 2), (1, 1), (2, 1)]).unwrap(),
            5,
        );
        let rep = check_compatibility(&t3);
        assert!(rep.pass());
        // 35 indices with |n| <= 4, three pairs each
        assert_eq!(rep.cases, 35 * 3);
    }

    #[test]
    fn backward_examples() {
        let t = table_12(2);
        // both sides k^2 - 2k at n = (1,0), j = 2
        let lhs = &UniPoly::k() * &t.get(&idx(&[1, 0])).unwrap().shift(-1);
        assert_eq!(lhs, UniPoly::from_ints(&[0, -2, 1]));
        let rhs = t.get(&idx(&[1, 1])).unwrap()
            + &t.get(&idx(&[1, 0]))
                .unwrap()
                .scale(&Rational::from_integer(2.into()));
        assert_eq!(rhs, lhs);
        assert!(check_backward(&t).pass());

        // r = 1, sigma = 1, n = 1: k C_1(k-1) = k (k-2) = C_2(k) + C_1(k)
        let one = build_table(&CharlierParams::from_fractions(&[(1, 1)]).unwrap(), 2);
        let c1 = one.get(&idx(&[1])).unwrap();
        assert_eq!(
            &UniPoly::k() * &c1.shift(-1),
            UniPoly::from_ints(&[0, -2, 1])
        );
        assert_eq!(
            one.get(&idx(&[2])).unwrap() + c1,
            UniPoly::from_ints(&[0, -2, 1])
        );
        assert!(check_backward(&one).pass());
    }

    #[test]
    fn forward_examples() {
        let t = table_12(2);
        let c = t.get(&idx(&[1, 1])).unwrap();
        assert_eq!(c.shift(1), UniPoly::from_ints(&[-1, -2, 1]));
        assert!(check_forward(&t).pass());
    }

    #[test]
    fn combined_difference_examples() {
        // r = 1: k (k - 1 - sigma) = (k - 1)(k - sigma) - sigma
        let one = build_table(&CharlierParams::from_fractions(&[(3, 7)]).unwrap(), 1);
        assert!(check_combined_difference(&one).pass());
        assert!(check_combined_difference(&table_12(4)).pass());
    }

    #[test]
    fn rij_examples() {
        let t = table_12(3);
        let rep = check_rij_polynomial(&t, 0, 1).unwrap();
        assert!(rep.pass());
        assert!(check_rij_polynomial(&t, 0, 0).is_err());
        assert!(check_rij_polynomial(&t, 0, 2).is_err());

        let t3 = build_table(
            &CharlierParams::from_fractions(&[(1, 2), (1, 1), (2, 1)]).unwrap(),
            4,
        );
        let all = check_rij_all(&t3);
        assert!(all.pass());
        assert_eq!(all.corrected.cases, 20 * 3);
    }

    #[test]
    fn rij_at_origin_reduces_to_compatibility() {
        let t = table_12(1);
        let rep = check_rij_polynomial(&t, 0, 1).unwrap();
        assert_eq!(rep.corrected.cases, 1);
        assert!(rep.pass());
        assert!(rep.printed_holds());
    }

    #[test]
    fn printed_rij_variant_fails_off_origin() {
        let t = table_12(3);
        let rep = check_rij_polynomial(&t, 0, 1).unwrap();
        assert!(!rep.printed_holds());
        assert!(rep.printed.failures.iter().all(|f| !f.index.is_zero()));
    }

    #[test]
    fn path_independence_and_explicit_agreement() {
        let t = build_table(
            &CharlierParams::from_fractions(&[(1, 3), (1, 1), (5, 2)]).unwrap(),
            5,
        );
        assert!(check_path_independence(&t).pass());
        assert!(check_explicit_agreement(&t).pass());
    }

    #[test]
    fn corrupted_entry_is_located() {
        let mut t = table_12(3);
        let n = idx(&[1, 1]);
        let bad = t.get(&n).unwrap() + &UniPoly::from_ints(&[1]);
        t.replace(&n, bad).unwrap();
        let rep = check_backward(&t);
        assert!(!rep.pass());
        assert!(rep.failures.iter().any(|f| f.index == n));
    }
}
