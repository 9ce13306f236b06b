//! Bargmann-representation operator engine.
//!
//! Annihilation is `d/dz_i`, creation is multiplication by `z_i`, and states
//! are [`MSeries`] values. Scalars that are irrational or transcendental
//! (`e^{-sigma_1}`, `r^{-k/2}`, `1/sqrt(k!)`) are never represented: states
//! are unnormalised representatives and normalisation claims are checked in
//! squared form.
//!
//! Truncation at total degree `D` corrupts only the top shells of an
//! operator image, so every identity is compared on an interior band
//! `|m| <= D - g` (see [`checks`]).

use num_traits::{One, Zero};

use crate::charlier::CharlierParams;
use crate::error::{Error, Result};
use crate::polycore::Rational;
use crate::series::MSeries;

pub mod checks;
mod psi;
mod states;

pub use checks::{
    check_canonical_commutators, check_commutator_hh, check_eigen, check_ladder_x, check_ladder_y,
    check_norm_bookkeeping, check_number_operators, check_r, check_r_with_pairs,
    check_reference_states, check_similarity, check_state_against_table, BookkeepingReport,
    InteriorFailure, InteriorReport,
};
pub use psi::{check_psi, psi_rationalized, PsiFailure, PsiReport};
pub use states::{apply_s_projective, bargmann_norm_sq, state_u, state_w};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Action {
    /// `d/dz_i`
    Diff(usize),
    /// multiplication by `z_i`
    MulVar(usize),
    /// multiplication by a fixed series
    MulSeries(MSeries),
    /// `c * identity`
    Scalar(Rational),
    Sum(Vec<FockOp>),
    /// `ops[0] ∘ ops[1] ∘ ...`; the last factor acts first.
    Compose(Vec<FockOp>),
}

/// A linear operator on truncated series, kept as an expression tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FockOp {
    r: usize,
    action: Action,
    raising_degree: usize,
    lowering_depth: usize,
}

impl FockOp {
    fn from_action(r: usize, action: Action) -> Self {
        let (raising_degree, lowering_depth) = match &action {
            Action::Diff(_) => (0, 1),
            Action::MulVar(_) => (1, 0),
            Action::MulSeries(s) => (s.degree().unwrap_or(0), 0),
            Action::Scalar(_) => (0, 0),
            Action::Sum(ops) => (
                ops.iter().map(|o| o.raising_degree).max().unwrap_or(0),
                ops.iter().map(|o| o.lowering_depth).max().unwrap_or(0),
            ),
            Action::Compose(ops) => (
                ops.iter().map(|o| o.raising_degree).sum(),
                ops.iter().map(|o| o.lowering_depth).sum(),
            ),
        };
        Self {
            r,
            action,
            raising_degree,
            lowering_depth,
        }
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn action(&self) -> &Action {
        &self.action
    }

    /// Largest net increase of total degree along any path of the tree;
    /// derivatives count as zero.
    pub fn raising_degree(&self) -> usize {
        self.raising_degree
    }

    /// Number of derivatives along the deepest path. Applied to a series
    /// truncated at `D`, the image is exact up to degree `D - lowering_depth`.
    pub fn lowering_depth(&self) -> usize {
        self.lowering_depth
    }

    pub fn annihilation(i: usize, r: usize) -> Self {
        Self::from_action(r, Action::Diff(i))
    }

    pub fn creation(i: usize, r: usize) -> Self {
        Self::from_action(r, Action::MulVar(i))
    }

    pub fn scalar(c: Rational, r: usize) -> Self {
        Self::from_action(r, Action::Scalar(c))
    }

    pub fn identity(r: usize) -> Self {
        Self::scalar(Rational::one(), r)
    }

    pub fn zero(r: usize) -> Self {
        Self::scalar(Rational::zero(), r)
    }

    pub fn multiply_by(s: MSeries) -> Self {
        Self::from_action(s.r(), Action::MulSeries(s))
    }

    pub fn sum(ops: Vec<FockOp>) -> Self {
        let r = ops.first().map_or(1, |o| o.r);
        assert!(
            ops.iter().all(|o| o.r == r),
            "operators on different spaces"
        );
        Self::from_action(r, Action::Sum(ops))
    }

    pub fn compose(ops: Vec<FockOp>) -> Self {
        let r = ops.first().map_or(1, |o| o.r);
        assert!(
            ops.iter().all(|o| o.r == r),
            "operators on different spaces"
        );
        Self::from_action(r, Action::Compose(ops))
    }

    pub fn then(&self, outer: &FockOp) -> Self {
        Self::compose(vec![outer.clone(), self.clone()])
    }

    pub fn plus(&self, other: &FockOp) -> Self {
        Self::sum(vec![self.clone(), other.clone()])
    }

    pub fn scaled(&self, c: Rational) -> Self {
        Self::compose(vec![Self::scalar(c, self.r), self.clone()])
    }

    pub fn minus(&self, other: &FockOp) -> Self {
        self.plus(&other.scaled(-Rational::one()))
    }

    /// `self ∘ other - other ∘ self`
    pub fn commutator(&self, other: &FockOp) -> Self {
        Self::compose(vec![self.clone(), other.clone()])
            .minus(&Self::compose(vec![other.clone(), self.clone()]))
    }

    /// Number operator `z_i d/dz_i`.
    pub fn number(i: usize, r: usize) -> Self {
        Self::compose(vec![Self::creation(i, r), Self::annihilation(i, r)])
    }

    /// `H_0 = sum_j z_j d/dz_j`.
    pub fn h0(r: usize) -> Self {
        Self::sum((0..r).map(|j| Self::number(j, r)).collect())
    }

    pub fn apply(&self, f: &MSeries) -> MSeries {
        assert_eq!(f.r(), self.r, "operator and state live on different spaces");
        match &self.action {
            Action::Diff(i) => f.derivative(*i),
            Action::MulVar(i) => f.mul_var(*i),
            Action::MulSeries(s) => s.with_cutoff(f.cutoff()).mul(f).expect("same r"),
            Action::Scalar(c) => f.scale(c),
            Action::Sum(ops) => ops.iter().fold(MSeries::zero(f.r(), f.cutoff()), |acc, o| {
                acc.add(&o.apply(f)).expect("same r")
            }),
            Action::Compose(ops) => ops.iter().rev().fold(f.clone(), |acc, o| o.apply(&acc)),
        }
    }
}

fn check_direction(i: usize, r: usize) -> Result<()> {
    if i >= r {
        return Err(Error::Direction {
            direction: i + 1,
            r,
        });
    }
    Ok(())
}

/// `H_i = sum_j z_j d_j + sum_j sigma_j z_j + d_i + sigma_i` (0-based `i`).
pub fn make_hamiltonian(i: usize, params: &CharlierParams) -> Result<FockOp> {
    let r = params.r();
    check_direction(i, r)?;
    let mut terms = vec![FockOp::h0(r)];
    terms.extend((0..r).map(|j| FockOp::creation(j, r).scaled(params.sigma_at(j).clone())));
    terms.push(FockOp::annihilation(i, r));
    terms.push(FockOp::scalar(params.sigma_at(i).clone(), r));
    Ok(FockOp::sum(terms))
}

/// Joint lowering operator `X_j = d_j + sigma_j`.
pub fn lowering_x(j: usize, params: &CharlierParams) -> Result<FockOp> {
    let r = params.r();
    check_direction(j, r)?;
    Ok(FockOp::annihilation(j, r).plus(&FockOp::scalar(params.sigma_at(j).clone(), r)))
}

/// Joint raising operator `Y = z_1 + ... + z_r + 1`.
pub fn raising_y(r: usize) -> FockOp {
    let mut terms: Vec<FockOp> = (0..r).map(|j| FockOp::creation(j, r)).collect();
    terms.push(FockOp::identity(r));
    FockOp::sum(terms)
}

/// `d_i + sigma_i - d_j - sigma_j`.
pub fn difference_op(i: usize, j: usize, params: &CharlierParams) -> Result<FockOp> {
    let r = params.r();
    check_direction(i, r)?;
    check_direction(j, r)?;
    if i == j {
        return Ok(FockOp::zero(r));
    }
    Ok(FockOp::sum(vec![
        FockOp::annihilation(i, r),
        FockOp::annihilation(j, r).scaled(-Rational::one()),
        FockOp::scalar(params.sigma_at(i) - params.sigma_at(j), r),
    ]))
}

/// Common symmetry `R_ij = Y (d_i + sigma_i - d_j - sigma_j)`.
pub fn symmetry_r(i: usize, j: usize, params: &CharlierParams) -> Result<FockOp> {
    Ok(FockOp::compose(vec![
        raising_y(params.r()),
        difference_op(i, j, params)?,
    ]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiindex::MultiIndex;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn mono(v: &[u32], c: Rational, d: usize) -> MSeries {
        MSeries::monomial(MultiIndex::new(v.to_vec()), c, d)
    }

    #[test]
    fn degrees_of_standard_operators() {
        let p = CharlierParams::from_fractions(&[(1, 1), (2, 1)]).unwrap();
        let h = make_hamiltonian(0, &p).unwrap();
        assert_eq!(h.raising_degree(), 1);
        assert_eq!(h.lowering_depth(), 1);
        assert_eq!(FockOp::annihilation(0, 2).raising_degree(), 0);
        let r = symmetry_r(0, 1, &p).unwrap();
        assert_eq!(r.raising_degree(), 1);
        assert_eq!(r.lowering_depth(), 1);
        assert_eq!(h.commutator(&r).raising_degree(), 2);
        assert!(make_hamiltonian(2, &p).is_err());
    }

    #[test]
    fn hamiltonian_on_constant() {
        let p = CharlierParams::from_fractions(&[(1, 1), (2, 1)]).unwrap();
        let h = make_hamiltonian(1, &p).unwrap();
        let out = h.apply(&MSeries::one(2, 4));
        let want = MSeries::linear(q(2, 1), &[q(1, 1), q(2, 1)], 4);
        assert_eq!(out, want);
    }

    #[test]
    fn hamiltonian_on_variable() {
        // H_i z_i = z_i + sum_j sigma_j z_j z_i + 1 + sigma_i z_i
        let p = CharlierParams::from_fractions(&[(1, 1), (2, 1)]).unwrap();
        let h = make_hamiltonian(0, &p).unwrap();
        let out = h.apply(&mono(&[1, 0], q(1, 1), 4));
        let mut want = MSeries::linear(q(1, 1), &[q(2, 1), q(0, 1)], 4);
        want = want.add(&mono(&[2, 0], q(1, 1), 4)).unwrap();
        want = want.add(&mono(&[1, 1], q(2, 1), 4)).unwrap();
        assert_eq!(out, want);
    }

    #[test]
    fn hamiltonian_r1_on_square_by_primitives() {
        // H = z d + z + d + 1 at sigma = 1 on z^2:
        //   z d z^2 = 2 z^2, z z^2 = z^3, d z^2 = 2 z, 1 z^2 = z^2
        let p = CharlierParams::from_fractions(&[(1, 1)]).unwrap();
        let h = make_hamiltonian(0, &p).unwrap();
        let f = mono(&[2], q(1, 1), 5);
        let mut want = mono(&[2], q(3, 1), 5);
        want = want.add(&mono(&[3], q(1, 1), 5)).unwrap();
        want = want.add(&mono(&[1], q(2, 1), 5)).unwrap();
        assert_eq!(h.apply(&f), want);
    }

    #[test]
    fn degenerate_pairs_give_zero_operators() {
        let p = CharlierParams::from_fractions(&[(1, 1), (2, 1)]).unwrap();
        let r = symmetry_r(1, 1, &p).unwrap();
        let f = crate::series::exp_linear(&[q(1, 1), q(-1, 2)], 5);
        assert!(r.apply(&f).is_zero());
        let h = make_hamiltonian(0, &p).unwrap();
        assert!(h.commutator(&h).apply(&f).is_zero());
    }
}
