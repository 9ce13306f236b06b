use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Multi-index `(n_1, ..., n_r)` of naturals.
///
/// Ordered graded-lexicographically: by total degree first, then with larger
/// leading entries first, so shell 2 in two directions is
/// `(2,0), (1,1), (0,2)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        Self(entries)
    }

    pub fn zero(r: usize) -> Self {
        Self(vec![0; r])
    }

    /// Unit vector in the 0-based direction `j`.
    pub fn unit(j: usize, r: usize) -> Self {
        let mut v = vec![0; r];
        v[j] = 1;
        Self(v)
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn r(&self) -> usize {
        self.0.len()
    }

    pub fn get(&self, j: usize) -> u32 {
        self.0[j]
    }

    pub fn total(&self) -> usize {
        self.0.iter().map(|&n| n as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&n| n == 0)
    }

    pub fn plus_unit(&self, j: usize) -> Self {
        let mut v = self.0.clone();
        v[j] += 1;
        Self(v)
    }

    /// `None` when the entry in direction `j` is already zero.
    pub fn minus_unit(&self, j: usize) -> Option<Self> {
        let mut v = self.0.clone();
        v[j] = v[j].checked_sub(1)?;
        Some(Self(v))
    }

    /// `n_1! ... n_r!` as an exact integer.
    pub fn factorial(&self) -> num_bigint::BigInt {
        self.0
            .iter()
            .map(|&n| crate::polycore::factorial(n as usize))
            .product()
    }

    /// All indices of total degree exactly `m`, in graded-lex order.
    pub fn shell(r: usize, m: usize) -> Vec<Self> {
        fn fill(prefix: &mut Vec<u32>, left: usize, slots: usize, out: &mut Vec<MultiIndex>) {
            if slots == 1 {
                prefix.push(left as u32);
                out.push(MultiIndex(prefix.clone()));
                prefix.pop();
                return;
            }
            for first in (0..=left).rev() {
                prefix.push(first as u32);
                fill(prefix, left - first, slots - 1, out);
                prefix.pop();
            }
        }
        assert!(r >= 1, "multi-indices need at least one direction");
        let mut out = Vec::new();
        fill(&mut Vec::with_capacity(r), m, r, &mut out);
        out
    }

    /// All indices with total degree at most `d`, in graded-lex order.
    pub fn up_to(r: usize, d: usize) -> Vec<Self> {
        (0..=d).flat_map(|m| Self::shell(r, m)).collect()
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total()
            .cmp(&other.total())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        Self(v)
    }
}
