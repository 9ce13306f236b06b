use std::fmt;
use std::ops::{Div, Mul};

use num_traits::{One, Zero};

use super::Rational;

/// Exact value `mantissa * exp(sum_j c_j sigma_j)` with the exponential kept
/// symbolic, so transcendental factors never enter the arithmetic.
#[derive(Clone, Debug)]
pub struct ScaledScalar {
    mantissa: Rational,
    exponents: Vec<i64>,
}

impl ScaledScalar {
    pub fn new(mantissa: Rational, exponents: Vec<i64>) -> Self {
        Self {
            mantissa,
            exponents,
        }
    }

    pub fn rational(mantissa: Rational, r: usize) -> Self {
        Self::new(mantissa, vec![0; r])
    }

    /// `exp(sigma_j)` for the 0-based direction `j` among `r`.
    pub fn exp_unit(j: usize, r: usize) -> Self {
        let mut exponents = vec![0; r];
        exponents[j] = 1;
        Self::new(Rational::one(), exponents)
    }

    pub fn mantissa(&self) -> &Rational {
        &self.mantissa
    }

    pub fn exponents(&self) -> &[i64] {
        &self.exponents
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(Self::new(
            self.mantissa.recip(),
            self.exponents.iter().map(|c| -c).collect(),
        ))
    }

    fn combine(&self, other: &Self, sign: i64) -> Vec<i64> {
        assert_eq!(
            self.exponents.len(),
            other.exponents.len(),
            "exponent vectors of different length"
        );
        self.exponents
            .iter()
            .zip(&other.exponents)
            .map(|(a, b)| a + sign * b)
            .collect()
    }
}

impl PartialEq for ScaledScalar {
    fn eq(&self, other: &Self) -> bool {
        (self.is_zero() && other.is_zero())
            || (self.mantissa == other.mantissa && self.exponents == other.exponents)
    }
}

impl Eq for ScaledScalar {}

impl Mul for &ScaledScalar {
    type Output = ScaledScalar;

    fn mul(self, rhs: &ScaledScalar) -> ScaledScalar {
        ScaledScalar::new(&self.mantissa * &rhs.mantissa, self.combine(rhs, 1))
    }
}

impl Mul for ScaledScalar {
    type Output = ScaledScalar;

    fn mul(self, rhs: ScaledScalar) -> ScaledScalar {
        &self * &rhs
    }
}

impl Div for &ScaledScalar {
    type Output = ScaledScalar;

    /// Panics on division by zero, like rational division.
    fn div(self, rhs: &ScaledScalar) -> ScaledScalar {
        assert!(!rhs.is_zero(), "division by a zero ScaledScalar");
        ScaledScalar::new(&self.mantissa / &rhs.mantissa, self.combine(rhs, -1))
    }
}

impl fmt::Display for ScaledScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.mantissa)?;
        if self.mantissa.is_zero() {
            return Ok(());
        }
        for (j, c) in self.exponents.iter().enumerate() {
            match c {
                0 => {}
                1 => write!(f, "*e^(s{})", j + 1)?,
                c => write!(f, "*e^({}*s{})", c, j + 1)?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn zero_ignores_exponents() {
        let a = ScaledScalar::new(q(0, 1), vec![1, 0]);
        let b = ScaledScalar::new(q(0, 1), vec![0, -3]);
        assert_eq!(a, b);
        assert_ne!(
            ScaledScalar::new(q(1, 1), vec![1, 0]),
            ScaledScalar::new(q(1, 1), vec![0, 1])
        );
    }

    #[test]
    fn product_adds_exponents() {
        let a = ScaledScalar::new(q(2, 3), vec![1, -1]);
        let b = ScaledScalar::new(q(3, 4), vec![2, 1]);
        let p = &a * &b;
        assert_eq!(p.mantissa(), &q(1, 2));
        assert_eq!(p.exponents(), &[3, 0]);
        assert_eq!(&p / &b, a);
        assert_eq!(format!("{}", p), "1/2*e^(3*s1)");
    }

    fn arb_scaled() -> impl Strategy<Value = ScaledScalar> {
        (-20i64..20, 1i64..20, proptest::collection::vec(-4i64..4, 3))
            .prop_map(|(n, d, e)| ScaledScalar::new(q(n, d), e))
    }

    proptest! {
        #[test]
        fn multiplication_is_commutative_and_associative(
            a in arb_scaled(), b in arb_scaled(), c in arb_scaled()
        ) {
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        }
    }
}
