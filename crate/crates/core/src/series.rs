//! Multivariate power series in `z_1..z_r`, truncated at total degree `D`,
//! with exact rational coefficients.
//!
//! In the Bargmann picture the monomial `z^m` stands for the number state
//! `|m>` scaled by `sqrt(m!)`, so every state the oscillator model needs has
//! rational coefficients here.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::charlier::CharlierParams;
use crate::error::{Error, Result};
use crate::multiindex::MultiIndex;
use crate::polycore::{factorial, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MSeries {
    r: usize,
    cutoff: usize,
    coeffs: BTreeMap<MultiIndex, Rational>,
}

#[derive(Serialize)]
struct SeriesDocument<'a> {
    r: usize,
    cutoff: usize,
    terms: Vec<TermDocument<'a>>,
}

#[derive(Serialize)]
struct TermDocument<'a> {
    exp: &'a MultiIndex,
    #[serde(with = "crate::serde_util::rational_str")]
    coeff: Rational,
}

impl MSeries {
    pub fn zero(r: usize, cutoff: usize) -> Self {
        assert!(r >= 1, "series need at least one variable");
        Self {
            r,
            cutoff,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(c: Rational, r: usize, cutoff: usize) -> Self {
        let mut s = Self::zero(r, cutoff);
        s.add_term(MultiIndex::zero(r), c);
        s
    }

    pub fn one(r: usize, cutoff: usize) -> Self {
        Self::constant(Rational::one(), r, cutoff)
    }

    /// `c z^m`; zero when `|m|` exceeds the cutoff.
    pub fn monomial(m: MultiIndex, c: Rational, cutoff: usize) -> Self {
        let mut s = Self::zero(m.r(), cutoff);
        s.add_term(m, c);
        s
    }

    /// The variable `z_i` (0-based).
    pub fn variable(i: usize, r: usize, cutoff: usize) -> Self {
        Self::monomial(MultiIndex::unit(i, r), Rational::one(), cutoff)
    }

    /// `c_0 + sum_j c_j z_j`.
    pub fn linear(constant: Rational, slopes: &[Rational], cutoff: usize) -> Self {
        let r = slopes.len();
        let mut s = Self::constant(constant, r, cutoff);
        for (j, c) in slopes.iter().enumerate() {
            s.add_term(MultiIndex::unit(j, r), c.clone());
        }
        s
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    fn add_term(&mut self, m: MultiIndex, c: Rational) {
        if m.total() > self.cutoff || c.is_zero() {
            return;
        }
        match self.coeffs.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Coefficient of `z^m`; asking beyond the cutoff is an error because
    /// those coefficients were truncated away, not zero.
    pub fn coeff(&self, m: &MultiIndex) -> Result<Rational> {
        if m.r() != self.r {
            return Err(Error::DimensionMismatch {
                expected: self.r,
                found: m.r(),
            });
        }
        if m.total() > self.cutoff {
            return Err(Error::BeyondCutoff {
                degree: m.total(),
                cutoff: self.cutoff,
            });
        }
        Ok(self.get(m))
    }

    /// Stored coefficient or zero, without the cutoff check.
    pub fn get(&self, m: &MultiIndex) -> Rational {
        self.coeffs.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Nonzero terms in graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Rational)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Highest total degree carrying a nonzero coefficient.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.keys().map(MultiIndex::total).max()
    }

    pub fn with_cutoff(&self, cutoff: usize) -> Self {
        Self {
            r: self.r,
            cutoff,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(m, _)| m.total() <= cutoff)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    fn check_r(&self, other: &Self) -> Result<()> {
        if self.r != other.r {
            return Err(Error::DimensionMismatch {
                expected: self.r,
                found: other.r,
            });
        }
        Ok(())
    }

    /// Sum; the cutoff of the result is the smaller one.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_r(other)?;
        let mut out = self.with_cutoff(self.cutoff.min(other.cutoff));
        for (m, c) in &other.coeffs {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.r, self.cutoff);
        }
        Self {
            r: self.r,
            cutoff: self.cutoff,
            coeffs: self
                .coeffs
                .iter()
                .map(|(m, v)| (m.clone(), v * c))
                .collect(),
        }
    }

    /// Truncated Cauchy product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_r(other)?;
        let cutoff = self.cutoff.min(other.cutoff);
        let mut out = BTreeMap::<MultiIndex, Rational>::new();
        for (a, ca) in &self.coeffs {
            let room = match cutoff.checked_sub(a.total()) {
                Some(room) => room,
                None => continue,
            };
            for (b, cb) in &other.coeffs {
                if b.total() > room {
                    continue;
                }
                let m: Vec<u32> = a
                    .entries()
                    .iter()
                    .zip(b.entries())
                    .map(|(x, y)| x + y)
                    .collect();
                *out.entry(MultiIndex::new(m)).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        out.retain(|_, v| !v.is_zero());
        Ok(Self {
            r: self.r,
            cutoff,
            coeffs: out,
        })
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(Self::one(self.r, self.cutoff), |acc, _| {
            acc.mul(self).expect("same r")
        })
    }

    /// `d/dz_i`; the top shell of the result is missing whatever the
    /// truncated degree `D + 1` terms would have contributed.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.r, self.cutoff);
        for (m, c) in &self.coeffs {
            if let Some(lower) = m.minus_unit(i) {
                out.add_term(lower, c * Rational::from_integer(m.get(i).into()));
            }
        }
        out
    }

    /// Multiplication by `z_i`, truncated.
    pub fn mul_var(&self, i: usize) -> Self {
        let mut out = Self::zero(self.r, self.cutoff);
        for (m, c) in &self.coeffs {
            out.add_term(m.plus_unit(i), c.clone());
        }
        out
    }

    /// Substitutes `z_i -> z_i + 1`. Exact: the total degree never grows.
    pub fn shift_var(&self, i: usize) -> Self {
        let mut out = Self::zero(self.r, self.cutoff);
        for (m, c) in &self.coeffs {
            let top = m.get(i);
            let mut binom = BigInt::one();
            for t in (0..=top).rev() {
                let mut e = m.entries().to_vec();
                e[i] = t;
                out.add_term(
                    MultiIndex::new(e),
                    c * Rational::from_integer(binom.clone()),
                );
                // binom(top, top - t) -> binom(top, top - t + 1)
                binom = binom * BigInt::from(t) / BigInt::from(top - t + 1);
            }
        }
        out
    }

    /// Exponents where `self` and `other` differ, restricted to total degree
    /// at most `max_degree`.
    pub fn mismatches(
        &self,
        other: &Self,
        max_degree: usize,
    ) -> Vec<(MultiIndex, Rational, Rational)> {
        let mut keys: Vec<&MultiIndex> = self
            .coeffs
            .keys()
            .chain(other.coeffs.keys())
            .filter(|m| m.total() <= max_degree)
            .collect();
        keys.sort();
        keys.dedup();
        keys.into_iter()
            .filter_map(|m| {
                let (a, b) = (self.get(m), other.get(m));
                (a != b).then(|| (m.clone(), a, b))
            })
            .collect()
    }

    /// `{r, cutoff, terms: [{exp, coeff}]}` in graded-lex order.
    pub fn to_json(&self) -> String {
        let doc = SeriesDocument {
            r: self.r,
            cutoff: self.cutoff,
            terms: self
                .coeffs
                .iter()
                .map(|(m, c)| TermDocument {
                    exp: m,
                    coeff: c.clone(),
                })
                .collect(),
        };
        serde_json::to_string(&doc).expect("series serializes")
    }
}

/// Truncated `exp(sum_j c_j z_j)`: coefficient of `z^m` is
/// `prod_j c_j^{m_j} / m_j!`.
pub fn exp_linear(c: &[Rational], cutoff: usize) -> MSeries {
    let r = c.len();
    let mut out = MSeries::zero(r, cutoff);
    for m in MultiIndex::up_to(r, cutoff) {
        let v = m
            .entries()
            .iter()
            .zip(c)
            .fold(Rational::one(), |acc, (&mj, cj)| {
                acc * num_traits::pow(cj.clone(), mj as usize)
                    / Rational::from_integer(factorial(mj as usize))
            });
        out.add_term(m, v);
    }
    out
}

/// `series_mul` as a free function.
pub fn series_mul(a: &MSeries, b: &MSeries) -> Result<MSeries> {
    a.mul(b)
}

/// `shift_var` as a free function (0-based direction).
pub fn shift_var(f: &MSeries, i: usize) -> MSeries {
    f.shift_var(i)
}

/// `coeff` as a free function.
pub fn coeff(f: &MSeries, m: &MultiIndex) -> Result<Rational> {
    f.coeff(m)
}

/// `exp(-sigma . z) (1 + z_1 + ... + z_r)^k`, whose coefficient of `z^n` is
/// `C_n(k) / n!`.
pub fn gen_lhs(k: usize, params: &CharlierParams, cutoff: usize) -> MSeries {
    let neg_sigma: Vec<Rational> = params.sigma().iter().map(|s| -s.clone()).collect();
    let ones = vec![Rational::one(); params.r()];
    let base = MSeries::linear(Rational::one(), &ones, cutoff).pow(k);
    exp_linear(&neg_sigma, cutoff).mul(&base).expect("same r")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charlier::build_table;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn idx(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    #[test]
    fn mul_examples() {
        let a = exp_linear(&[q(1, 2), q(-3, 1)], 5);
        assert_eq!(a.mul(&MSeries::one(2, 5)).unwrap(), a);
        let z = MSeries::variable(0, 1, 2);
        assert_eq!(z.mul(&z).unwrap(), MSeries::monomial(idx(&[2]), q(1, 1), 2));
        assert!(a.mul(&z).is_err());
    }

    #[test]
    fn exp_products_cancel() {
        let c = [q(1, 3), q(-2, 1), q(5, 2)];
        let neg: Vec<_> = c.iter().map(|x| -x.clone()).collect();
        let p = exp_linear(&c, 6).mul(&exp_linear(&neg, 6)).unwrap();
        assert_eq!(p, MSeries::one(3, 6));
    }

    #[test]
    fn exp_cauchy_oracle() {
        // coefficient of z^3 in e^{az} e^{bz} from the Cauchy product of
        // Taylor coefficients: sum_i a^i/i! b^(3-i)/(3-i)! = (a+b)^3/3!
        let (a, b) = (q(2, 3), q(-5, 4));
        let mut oracle = q(0, 1);
        for i in 0..=3usize {
            oracle += num_traits::pow(a.clone(), i) * num_traits::pow(b.clone(), 3 - i)
                / Rational::from_integer(factorial(i) * factorial(3 - i));
        }
        let p = exp_linear(&[a], 4).mul(&exp_linear(&[b], 4)).unwrap();
        assert_eq!(p.coeff(&idx(&[3])).unwrap(), oracle);
    }

    #[test]
    fn exp_linear_examples() {
        assert_eq!(exp_linear(&[q(0, 1), q(0, 1)], 4), MSeries::one(2, 4));
        let e = exp_linear(&[q(-1, 1)], 2);
        assert_eq!(e.get(&idx(&[0])), q(1, 1));
        assert_eq!(e.get(&idx(&[1])), q(-1, 1));
        assert_eq!(e.get(&idx(&[2])), q(1, 2));
        assert_eq!(e.terms().count(), 3);
        let e2 = exp_linear(&[q(-1, 1), q(-2, 1)], 3);
        assert_eq!(e2.get(&idx(&[1, 1])), q(2, 1));
    }

    #[test]
    fn shift_var_examples() {
        assert_eq!(MSeries::one(2, 3).shift_var(0), MSeries::one(2, 3));
        let z2 = MSeries::monomial(idx(&[2]), q(1, 1), 3);
        let want = MSeries::linear(q(1, 1), &[q(2, 1)], 3).add(&z2).unwrap();
        assert_eq!(z2.shift_var(0), want);
        let z1z2 = MSeries::monomial(idx(&[1, 1]), q(1, 1), 3);
        let want = z1z2.add(&MSeries::variable(0, 2, 3)).unwrap();
        assert_eq!(z1z2.shift_var(1), want);
    }

    #[test]
    fn coeff_examples() {
        assert_eq!(MSeries::one(2, 3).coeff(&idx(&[0, 0])).unwrap(), q(1, 1));
        assert_eq!(
            MSeries::variable(0, 2, 3).coeff(&idx(&[0, 1])).unwrap(),
            q(0, 1)
        );
        assert_eq!(
            MSeries::one(2, 3).coeff(&idx(&[2, 2])),
            Err(Error::BeyondCutoff {
                degree: 4,
                cutoff: 3
            })
        );
        let p = CharlierParams::from_fractions(&[(1, 1), (2, 1)]).unwrap();
        assert_eq!(gen_lhs(2, &p, 4).coeff(&idx(&[1, 1])).unwrap(), q(-2, 1));
    }

    #[test]
    fn gen_lhs_examples() {
        let p1 = CharlierParams::from_fractions(&[(1, 1)]).unwrap();
        assert_eq!(gen_lhs(0, &p1, 3).get(&idx(&[0])), q(1, 1));
        let p = CharlierParams::from_fractions(&[(1, 1), (2, 1)]).unwrap();
        for k in 0..=4 {
            let g = gen_lhs(k, &p, 4);
            assert_eq!(g.get(&idx(&[1, 0])), q(k as i64 - 1, 1));
        }
        assert_eq!(gen_lhs(3, &p, 4).get(&idx(&[1, 1])), q(-1, 1));
    }

    #[test]
    fn generating_function_matches_table() {
        let p = CharlierParams::from_fractions(&[(1, 3), (1, 1), (5, 2)]).unwrap();
        let t = build_table(&p, 5);
        for k in 0..=5 {
            let g = gen_lhs(k, &p, 5);
            for (n, c) in t.iter() {
                let v = g.get(n) * Rational::from_integer(n.factorial());
                assert_eq!(v, c.eval_int(k as i64), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn derivative_and_mul_var() {
        let f = MSeries::monomial(idx(&[2, 1]), q(3, 1), 4);
        assert_eq!(f.derivative(0), MSeries::monomial(idx(&[1, 1]), q(6, 1), 4));
        assert!(f.derivative(0).derivative(0).derivative(0).is_zero());
        assert_eq!(f.mul_var(1), MSeries::monomial(idx(&[2, 2]), q(3, 1), 4));
        assert!(f.mul_var(1).mul_var(0).is_zero());
    }

    #[test]
    fn json_dump_is_sorted() {
        let s = MSeries::linear(q(1, 1), &[q(-1, 2), q(3, 1)], 2);
        assert_eq!(
            s.to_json(),
            r#"{"r":2,"cutoff":2,"terms":[{"exp":[0,0],"coeff":"1"},{"exp":[1,0],"coeff":"-1/2"},{"exp":[0,1],"coeff":"3"}]}"#
        );
    }

    fn arb_poly(r: usize, deg: usize, cutoff: usize) -> impl Strategy<Value = MSeries> {
        proptest::collection::vec((-9i64..9, 1i64..4), MultiIndex::up_to(r, deg).len()).prop_map(
            move |cs| {
                let mut s = MSeries::zero(r, cutoff);
                for (m, (n, d)) in MultiIndex::up_to(r, deg).into_iter().zip(cs) {
                    s = s.add(&MSeries::monomial(m, q(n, d), cutoff)).unwrap();
                }
                s
            },
        )
    }

    proptest! {
        #[test]
        fn shift_commutes_with_mul(a in arb_poly(2, 3, 6), b in arb_poly(2, 3, 6), i in 0usize..2) {
            let lhs = a.mul(&b).unwrap().shift_var(i);
            let rhs = a.shift_var(i).mul(&b.shift_var(i)).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn exp_is_a_homomorphism(
            c in proptest::collection::vec((-5i64..5, 1i64..4), 2),
            d in proptest::collection::vec((-5i64..5, 1i64..4), 2),
        ) {
            let c: Vec<_> = c.into_iter().map(|(n, m)| q(n, m)).collect();
            let d: Vec<_> = d.into_iter().map(|(n, m)| q(n, m)).collect();
            let sum: Vec<_> = c.iter().zip(&d).map(|(x, y)| x + y).collect();
            prop_assert_eq!(
                exp_linear(&c, 5).mul(&exp_linear(&d, 5)).unwrap(),
                exp_linear(&sum, 5)
            );
        }
    }
}
