//! Interior-exact operator identity checks.
//!
//! An identity whose operators carry guard band `g` is compared only on
//! output coefficients of total degree `<= D - g`. Basis-monomial checks feed
//! monomials of degree `<= D - g` so that no intermediate image reaches the
//! cutoff; state checks rely on the derivative count instead, since a
//! truncated state is exact only up to `D`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::{
    apply_s_projective, bargmann_norm_sq, difference_op, lowering_x, make_hamiltonian, raising_y,
    state_u, state_w, symmetry_r, FockOp,
};
use crate::charlier::{CharlierParams, CharlierTable, NormalizationLedger};
use crate::error::{Error, Result};
use crate::multiindex::MultiIndex;
use crate::polycore::{factorial, Rational, ScaledScalar};
use crate::series::MSeries;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InteriorFailure {
    pub part: String,
    /// Basis monomial fed to the operators, when the check runs on monomials.
    pub input: Option<MultiIndex>,
    pub exp: MultiIndex,
    #[serde(with = "crate::serde_util::rational_str")]
    pub lhs: Rational,
    #[serde(with = "crate::serde_util::rational_str")]
    pub rhs: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InteriorReport {
    pub check: String,
    pub params: Option<CharlierParams>,
    pub cutoff: usize,
    /// Strictest band used by any part of the check.
    pub interior_degree: usize,
    pub max_residual_degree_checked: usize,
    pub comparisons: usize,
    pub pass: bool,
    pub failures: Vec<InteriorFailure>,
}

impl InteriorReport {
    fn new(check: &str, params: Option<&CharlierParams>, cutoff: usize) -> Self {
        Self {
            check: check.to_string(),
            params: params.cloned(),
            cutoff,
            interior_degree: cutoff,
            max_residual_degree_checked: 0,
            comparisons: 0,
            pass: true,
            failures: Vec::new(),
        }
    }

    fn compare(
        &mut self,
        part: &str,
        input: Option<&MultiIndex>,
        lhs: &MSeries,
        rhs: &MSeries,
        interior: usize,
    ) {
        self.interior_degree = self.interior_degree.min(interior);
        self.comparisons += 1;
        if let Some(top) = lhs
            .terms()
            .chain(rhs.terms())
            .map(|(m, _)| m.total())
            .filter(|&d| d <= interior)
            .max()
        {
            self.max_residual_degree_checked = self.max_residual_degree_checked.max(top);
        }
        for (exp, l, r) in lhs.mismatches(rhs, interior) {
            self.pass = false;
            self.failures.push(InteriorFailure {
                part: part.to_string(),
                input: input.cloned(),
                exp,
                lhs: l,
                rhs: r,
            });
        }
    }

    /// Runs `pair` on every monomial of degree `<= interior` in parallel and
    /// records the comparisons in graded-lex order of the inputs.
    fn on_monomials<F>(&mut self, part: &str, r: usize, interior: usize, pair: F)
    where
        F: Fn(&MSeries) -> (MSeries, MSeries) + Sync,
    {
        let cutoff = self.cutoff;
        let results: Vec<(MultiIndex, MSeries, MSeries)> = MultiIndex::up_to(r, interior)
            .into_par_iter()
            .map(|m| {
                let f = MSeries::monomial(m.clone(), Rational::one(), cutoff);
                let (l, rr) = pair(&f);
                (m, l, rr)
            })
            .collect();
        for (m, l, rr) in results {
            self.compare(part, Some(&m), &l, &rr, interior);
        }
    }

    /// Merges reports of the same family into one.
    pub fn merge(check: &str, parts: impl IntoIterator<Item = InteriorReport>) -> Self {
        let mut out: Option<InteriorReport> = None;
        for p in parts {
            match &mut out {
                None => {
                    let mut first = p;
                    first.check = check.to_string();
                    out = Some(first);
                }
                Some(acc) => {
                    acc.interior_degree = acc.interior_degree.min(p.interior_degree);
                    acc.max_residual_degree_checked = acc
                        .max_residual_degree_checked
                        .max(p.max_residual_degree_checked);
                    acc.comparisons += p.comparisons;
                    acc.pass &= p.pass;
                    acc.failures.extend(p.failures);
                }
            }
        }
        out.unwrap_or_else(|| InteriorReport::new(check, None, 0))
    }
}

fn int(v: usize) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

fn zero_like(f: &MSeries) -> MSeries {
    MSeries::zero(f.r(), f.cutoff())
}

/// `[d_i, z_j] = delta_ij` on monomials of degree `<= D - 1`.
pub fn check_canonical_commutators(r: usize, cutoff: usize) -> InteriorReport {
    let mut rep = InteriorReport::new("canonical-commutators", None, cutoff);
    let Some(band) = cutoff.checked_sub(1) else {
        return rep;
    };
    for i in 0..r {
        for j in 0..r {
            let op = FockOp::annihilation(i, r).commutator(&FockOp::creation(j, r));
            let part = format!("[a{}, a{}+]", i + 1, j + 1);
            rep.on_monomials(&part, r, band, |f| {
                let rhs = if i == j { f.clone() } else { zero_like(f) };
                (op.apply(f), rhs)
            });
        }
    }
    rep
}

/// `z_i d_i z^m = m_i z^m` on every stored monomial.
pub fn check_number_operators(r: usize, cutoff: usize) -> InteriorReport {
    let mut rep = InteriorReport::new("number-operators", None, cutoff);
    for i in 0..r {
        let op = FockOp::number(i, r);
        let part = format!("N{}", i + 1);
        let cut = cutoff;
        rep.on_monomials(&part, r, cutoff, |f| {
            let m = f.terms().next().map(|(m, _)| m.clone()).expect("monomial");
            (
                op.apply(f),
                f.scale(&int(m.get(i) as usize)).with_cutoff(cut),
            )
        });
    }
    rep
}

/// `[H_i, H_j] = d_i - d_j + sigma_i - sigma_j` on monomials, and the
/// commutator annihilating every `u_k` ("on shell").
pub fn check_commutator_hh(
    i: usize,
    j: usize,
    params: &CharlierParams,
    cutoff: usize,
) -> Result<InteriorReport> {
    let r = params.r();
    let hi = make_hamiltonian(i, params)?;
    let hj = make_hamiltonian(j, params)?;
    let comm = hi.commutator(&hj);
    let expected = difference_op(i, j, params)?;
    let mut rep = InteriorReport::new("commutator-hh", Some(params), cutoff);
    if let Some(band) = cutoff.checked_sub(2) {
        rep.on_monomials("operator identity", r, band, |f| {
            (comm.apply(f), expected.apply(f))
        });
        for k in 0..=cutoff {
            let u = state_u(k, params, cutoff)?;
            rep.compare(
                &format!("on-shell k={k}"),
                None,
                &comm.apply(&u),
                &zero_like(&u),
                band,
            );
        }
    }
    if let Some(band) = cutoff.checked_sub(1) {
        for k in 0..=cutoff {
            let u = state_u(k, params, cutoff)?;
            rep.compare(
                &format!("difference factor k={k}"),
                None,
                &expected.apply(&u),
                &zero_like(&u),
                band,
            );
        }
    }
    Ok(rep)
}

/// `H_i u_k = k u_k` up to degree `D - 1`; requires `k <= D - 1`.
pub fn check_eigen(
    i: usize,
    k: usize,
    params: &CharlierParams,
    cutoff: usize,
) -> Result<InteriorReport> {
    let band = cutoff
        .checked_sub(1)
        .filter(|&b| k <= b)
        .ok_or(Error::BeyondCutoff {
            degree: k + 1,
            cutoff,
        })?;
    let h = make_hamiltonian(i, params)?;
    let u = state_u(k, params, cutoff)?;
    let mut rep = InteriorReport::new("eigen", Some(params), cutoff);
    rep.compare(
        &format!("H{} u_{k}", i + 1),
        None,
        &h.apply(&u),
        &u.scale(&int(k)),
        band,
    );
    Ok(rep)
}

/// `H_i S_i f = S_i H_0 f` on monomials of degree `<= D - 2`.
pub fn check_similarity(
    i: usize,
    params: &CharlierParams,
    cutoff: usize,
) -> Result<InteriorReport> {
    let r = params.r();
    let h = make_hamiltonian(i, params)?;
    let h0 = FockOp::h0(r);
    let mut rep = InteriorReport::new("similarity", Some(params), cutoff);
    if let Some(band) = cutoff.checked_sub(2) {
        rep.on_monomials(&format!("H{} S{}", i + 1, i + 1), r, band, |f| {
            let lhs = h.apply(&apply_s_projective(i, f, params).expect("valid direction"));
            let rhs = apply_s_projective(i, &h0.apply(f), params).expect("valid direction");
            (lhs, rhs)
        });
    }
    Ok(rep)
}

/// `(d_j + sigma_j) u_k = k u_{k-1}` up to degree `D - 1`; `1 <= k <= D`.
pub fn check_ladder_x(
    j: usize,
    k: usize,
    params: &CharlierParams,
    cutoff: usize,
) -> Result<InteriorReport> {
    if k == 0 || k > cutoff {
        return Err(Error::BeyondCutoff { degree: k, cutoff });
    }
    let x = lowering_x(j, params)?;
    let mut rep = InteriorReport::new("ladder-x", Some(params), cutoff);
    let lhs = x.apply(&state_u(k, params, cutoff)?);
    let rhs = state_u(k - 1, params, cutoff)?.scale(&int(k));
    rep.compare(&format!("X{} u_{k}", j + 1), None, &lhs, &rhs, cutoff - 1);
    Ok(rep)
}

/// `(z_1 + ... + z_r + 1) u_k = u_{k+1}` up to degree `D - 1`; `k + 1 <= D`.
pub fn check_ladder_y(k: usize, params: &CharlierParams, cutoff: usize) -> Result<InteriorReport> {
    if k + 1 > cutoff {
        return Err(Error::BeyondCutoff {
            degree: k + 1,
            cutoff,
        });
    }
    let y = raising_y(params.r());
    let mut rep = InteriorReport::new("ladder-y", Some(params), cutoff);
    let lhs = y.apply(&state_u(k, params, cutoff)?);
    let rhs = state_u(k + 1, params, cutoff)?;
    rep.compare(&format!("Y u_{k}"), None, &lhs, &rhs, cutoff - 1);
    Ok(rep)
}

/// Symmetry checks for `R_ij` with every pair `(k, l)`, `k < l`, in the
/// involution part.
pub fn check_r(
    i: usize,
    j: usize,
    k_list: &[usize],
    params: &CharlierParams,
    cutoff: usize,
) -> Result<InteriorReport> {
    let r = params.r();
    let pairs: Vec<(usize, usize)> = (0..r)
        .flat_map(|k| (k + 1..r).map(move |l| (k, l)))
        .collect();
    check_r_with_pairs(i, j, k_list, &pairs, params, cutoff)
}

/// (a) `R_ij u_k = 0` up to `D - 2`; (b) `[H_m, R_ij] = 0` on monomials up to
/// `D - 3` for every `m`; (c) `[R_ij, R_kl] = 0` on monomials up to `D - 4`
/// for the given pairs.
pub fn check_r_with_pairs(
    i: usize,
    j: usize,
    k_list: &[usize],
    pairs: &[(usize, usize)],
    params: &CharlierParams,
    cutoff: usize,
) -> Result<InteriorReport> {
    let r = params.r();
    let rij = symmetry_r(i, j, params)?;
    let mut rep = InteriorReport::new("symmetry-r", Some(params), cutoff);
    let tag = format!("R{}{}", i + 1, j + 1);
    if let Some(band) = cutoff.checked_sub(2) {
        for &k in k_list {
            let u = state_u(k, params, cutoff)?;
            rep.compare(
                &format!("{tag} u_{k}"),
                None,
                &rij.apply(&u),
                &zero_like(&u),
                band,
            );
        }
    }
    if let Some(band) = cutoff.checked_sub(3) {
        for m in 0..r {
            let comm = make_hamiltonian(m, params)?.commutator(&rij);
            rep.on_monomials(&format!("[H{}, {tag}]", m + 1), r, band, |f| {
                (comm.apply(f), zero_like(f))
            });
        }
    }
    if let Some(band) = cutoff.checked_sub(4) {
        for &(k, l) in pairs {
            let comm = rij.commutator(&symmetry_r(k, l, params)?);
            rep.on_monomials(&format!("[{tag}, R{}{}]", k + 1, l + 1), r, band, |f| {
                (comm.apply(f), zero_like(f))
            });
        }
    }
    Ok(rep)
}

/// `n! [z^n] u_k = C_n(k)` for every table index within the cutoff.
pub fn check_state_against_table(
    table: &CharlierTable,
    kmax: usize,
    cutoff: usize,
) -> Result<InteriorReport> {
    let params = table.params();
    let band = cutoff.min(table.max_total_degree());
    let mut rep = InteriorReport::new("state-coefficients", Some(params), cutoff);
    for k in 0..=kmax.min(cutoff) {
        let u = state_u(k, params, cutoff)?;
        let mut scaled = MSeries::zero(params.r(), cutoff);
        let mut from_table = MSeries::zero(params.r(), cutoff);
        for n in MultiIndex::up_to(params.r(), band) {
            let fact = Rational::from_integer(n.factorial());
            let c = table.entry(&n)?.eval_int(k as i64);
            scaled = scaled.add(&MSeries::monomial(n.clone(), u.get(&n) * fact, cutoff))?;
            from_table = from_table.add(&MSeries::monomial(n, c, cutoff))?;
        }
        rep.compare(&format!("k={k}"), None, &scaled, &from_table, band);
    }
    Ok(rep)
}

/// Properties of the symmetric states `w_k`: `d_i w_k = k w_{k-1}`,
/// `(sum z) w_k = w_{k+1}`, `(d_i - d_j) w_k = 0`, and `S_i w_k`
/// independent of `i`.
pub fn check_reference_states(params: &CharlierParams, cutoff: usize) -> Result<InteriorReport> {
    let r = params.r();
    let mut rep = InteriorReport::new("reference-states", Some(params), cutoff);
    let sum_z = FockOp::sum((0..r).map(|j| FockOp::creation(j, r)).collect());
    for k in 0..=cutoff {
        let w = state_w(k, r, cutoff)?;
        for i in 0..r {
            if k >= 1 {
                let lower = state_w(k - 1, r, cutoff)?.scale(&int(k));
                rep.compare(
                    &format!("a{} w_{k}", i + 1),
                    None,
                    &w.derivative(i),
                    &lower,
                    cutoff,
                );
            }
            for j in i + 1..r {
                let d = w.derivative(i).sub(&w.derivative(j))?;
                rep.compare(
                    &format!("(a{} - a{}) w_{k}", i + 1, j + 1),
                    None,
                    &d,
                    &zero_like(&w),
                    cutoff,
                );
            }
        }
        if k < cutoff {
            let up = state_w(k + 1, r, cutoff)?;
            rep.compare(
                &format!("sum a+ w_{k}"),
                None,
                &sum_z.apply(&w),
                &up,
                cutoff,
            );
        }
        let first = apply_s_projective(0, &w, params)?;
        for i in 1..r {
            let other = apply_s_projective(i, &w, params)?;
            rep.compare(&format!("S{} w_{k}", i + 1), None, &other, &first, cutoff);
        }
    }
    Ok(rep)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BookkeepingReport {
    pub check: String,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl BookkeepingReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Squared-norm identities behind the `sqrt` factors of the ladder actions:
/// `|w_k|^2 = k! r^k`, `k^2 |w_{k-1}|^2 / |w_k|^2 = k / r`,
/// `|w_{k+1}|^2 / |w_k|^2 = r (k+1)` and `N_{k-1}^2 / N_k^2 = r k`.
pub fn check_norm_bookkeeping(r: usize, kmax: usize) -> BookkeepingReport {
    let mut rep = BookkeepingReport {
        check: "norm-bookkeeping".into(),
        cases: 0,
        failures: Vec::new(),
    };
    let cutoff = kmax + 1;
    let norms: Vec<Rational> = (0..=cutoff)
        .map(|k| bargmann_norm_sq(&state_w(k, r, cutoff).expect("k <= cutoff")))
        .collect();
    let rr = int(r);
    let mut expect = |ok: bool, what: String| {
        rep.cases += 1;
        if !ok {
            rep.failures.push(what);
        }
    };
    for k in 0..=kmax {
        let want = Rational::from_integer(factorial(k)) * num_traits::pow(rr.clone(), k);
        expect(
            norms[k] == want,
            format!("|w_{k}|^2 = {} != {want}", norms[k]),
        );
        let up = &norms[k + 1] / &norms[k];
        expect(
            up == &rr * int(k + 1),
            format!("|w_{}|^2/|w_{k}|^2 = {up}", k + 1),
        );
        if k >= 1 {
            let down = int(k * k) * &norms[k - 1] / &norms[k];
            expect(
                down == int(k) / &rr,
                format!("k^2 |w_{}|^2/|w_{k}|^2 = {down}", k - 1),
            );
            let ratio = NormalizationLedger::new(k, r)
                .step_ratio(r)
                .expect("k >= 1");
            let want = ScaledScalar::rational(&rr * int(k), r);
            expect(ratio == want, format!("N_{}^2/N_{k}^2 = {ratio}", k - 1));
        }
    }
    if norms.iter().any(Zero::is_zero) {
        rep.failures.push("zero norm".into());
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charlier::build_table;

    fn p12() -> CharlierParams {
        CharlierParams::from_fractions(&[(1, 1), (2, 1)]).unwrap()
    }

    fn p3() -> CharlierParams {
        CharlierParams::from_fractions(&[(1, 2), (1, 1), (2, 1)]).unwrap()
    }

    #[test]
    fn canonical_and_number() {
        for r in 1..=3 {
            assert!(check_canonical_commutators(r, 5).pass);
            assert!(check_number_operators(r, 5).pass);
        }
    }

    #[test]
    fn commutator_examples() {
        let rep = check_commutator_hh(0, 1, &p12(), 6).unwrap();
        assert!(rep.pass, "{:?}", rep.failures);
        assert_eq!(rep.interior_degree, 4);
        assert!(check_commutator_hh(1, 1, &p12(), 6).unwrap().pass);
    }

    #[test]
    fn commutator_is_not_zero_off_shell() {
        // H_1 H_2 - H_2 H_1 applied to 1 has constant term sigma_1 - sigma_2.
        let p = p12();
        let comm = make_hamiltonian(0, &p)
            .unwrap()
            .commutator(&make_hamiltonian(1, &p).unwrap());
        let out = comm.apply(&MSeries::one(2, 6));
        assert_eq!(
            out.get(&MultiIndex::zero(2)),
            Rational::from_integer((-1).into())
        );
    }

    #[test]
    fn eigen_examples() {
        let p1 = CharlierParams::from_fractions(&[(1, 1)]).unwrap();
        assert!(check_eigen(0, 1, &p1, 6).unwrap().pass);
        assert!(check_eigen(0, 0, &p12(), 3).unwrap().pass);
        assert!(check_eigen(1, 3, &p12(), 8).unwrap().pass);
        assert!(check_eigen(0, 8, &p12(), 8).is_err());
    }

    #[test]
    fn eigen_fails_for_wrong_eigenvalue_state() {
        // H_i applied to w_k (the H_0 state) is not k w_k.
        let p = p12();
        let h = make_hamiltonian(0, &p).unwrap();
        let w = state_w(2, 2, 6).unwrap();
        assert!(!h.apply(&w).mismatches(&w.scale(&int(2)), 5).is_empty());
    }

    #[test]
    fn similarity_examples() {
        let p1 = CharlierParams::from_fractions(&[(1, 1)]).unwrap();
        assert!(check_similarity(0, &p1, 6).unwrap().pass);
        let rep = check_similarity(1, &p3(), 6).unwrap();
        assert!(rep.pass, "{:?}", rep.failures.first());
        assert_eq!(rep.comparisons, 35);
    }

    #[test]
    fn ladder_examples() {
        assert!(check_ladder_x(1, 3, &p12(), 8).unwrap().pass);
        assert!(check_ladder_x(0, 1, &p12(), 4).unwrap().pass);
        assert!(check_ladder_x(0, 0, &p12(), 4).is_err());
        assert!(check_ladder_y(0, &p12(), 4).unwrap().pass);
        assert!(check_ladder_y(4, &p12(), 4).is_err());
    }

    #[test]
    fn symmetry_examples() {
        let rep = check_r(0, 1, &[2], &p12(), 8).unwrap();
        assert!(rep.pass);
        let rep = check_r_with_pairs(0, 1, &[0, 3], &[(0, 2)], &p3(), 8).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.interior_degree, 4);
    }

    #[test]
    fn state_coefficients_and_reference_states() {
        let t = build_table(&p3(), 5);
        assert!(check_state_against_table(&t, 5, 6).unwrap().pass);
        assert!(check_reference_states(&p3(), 6).unwrap().pass);
    }

    #[test]
    fn corrupted_table_fails_state_check() {
        let mut t = build_table(&p12(), 3);
        let n = MultiIndex::new(vec![1, 1]);
        t.replace(&n, crate::UniPoly::from_ints(&[2, -4, 2]))
            .unwrap();
        let rep = check_state_against_table(&t, 3, 4).unwrap();
        assert!(!rep.pass);
        assert!(rep.failures.iter().all(|f| f.exp == n));
    }

    #[test]
    fn norm_bookkeeping() {
        for r in 1..=3 {
            let rep = check_norm_bookkeeping(r, 8);
            assert!(rep.pass(), "{:?}", rep.failures);
        }
        // r = 2, k = 1: |w_2|^2 / |w_1|^2 = 8 / 2
        let w1 = bargmann_norm_sq(&state_w(1, 2, 3).unwrap());
        let w2 = bargmann_norm_sq(&state_w(2, 2, 3).unwrap());
        assert_eq!((w1.clone(), w2.clone()), (int(2), int(8)));
        assert_eq!(w2 / w1, int(4));
    }
}
