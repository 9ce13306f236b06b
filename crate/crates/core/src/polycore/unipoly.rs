use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::rational::{rational_bits, Rational};

/// Dense univariate polynomial in the spectral variable `k`.
///
/// `coeffs[i]` is the coefficient of `k^i`. Trailing zeros are never stored,
/// so the zero polynomial has an empty coefficient vector and equality is
/// plain vector equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The polynomial `k`.
    pub fn k() -> Self {
        Self::from_coeffs(vec![Rational::zero(), Rational::one()])
    }

    /// `k - a`.
    pub fn linear(a: &Rational) -> Self {
        Self::from_coeffs(vec![-a.clone(), Rational::one()])
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(
            coeffs
                .iter()
                .map(|&c| Rational::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `k^i`, zero past the degree.
    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_int(&self, x: i64) -> Rational {
        self.eval(&Rational::from_integer(x.into()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Multiplication by `k^m`.
    pub fn shift_up(&self, m: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Rational::zero(); m];
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    /// `q(k) = p(k + s)`, expanded exactly with binomial coefficients.
    pub fn shift(&self, s: i64) -> Self {
        let s = Rational::from_integer(BigInt::from(s));
        let n = self.coeffs.len();
        let mut out = vec![Rational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            // c (k + s)^i = c sum_j binom(i, j) s^(i-j) k^j
            let mut binom = BigInt::one();
            let mut s_pow = vec![Rational::one(); i + 1];
            for e in 1..=i {
                s_pow[e] = &s_pow[e - 1] * &s;
            }
            for j in 0..=i {
                out[j] += c * Rational::from_integer(binom.clone()) * &s_pow[i - j];
                binom = binom * BigInt::from(i - j) / BigInt::from(j + 1);
            }
        }
        Self::from_coeffs(out)
    }

    /// The falling factorial `k (k-1) ... (k-m+1)` as a polynomial.
    pub fn falling_factorial(m: usize) -> Self {
        (0..m).fold(Self::one(), |acc, i| {
            &acc * &Self::linear(&Rational::from_integer(BigInt::from(i)))
        })
    }

    /// Coefficients `c_m` with `p(k) = sum_m c_m k(k-1)...(k-m+1)`.
    ///
    /// Repeated synthetic division by `k - m`, `m = 0, 1, ...`; each
    /// remainder is the next coefficient.
    pub fn to_falling_factorial(&self) -> Vec<Rational> {
        let mut rest = self.coeffs.clone();
        let mut out = Vec::with_capacity(rest.len());
        let mut m = 0i64;
        while !rest.is_empty() {
            let root = Rational::from_integer(m.into());
            let mut quotient = vec![Rational::zero(); rest.len() - 1];
            let mut carry = Rational::zero();
            for i in (0..rest.len()).rev() {
                carry = carry * &root + &rest[i];
                if i > 0 {
                    quotient[i - 1] = carry.clone();
                }
            }
            out.push(carry);
            rest = quotient;
            m += 1;
        }
        out
    }

    pub fn from_falling_factorial(c: &[Rational]) -> Self {
        let mut acc = Self::zero();
        let mut basis = Self::one();
        for (m, cm) in c.iter().enumerate() {
            acc = &acc + &basis.scale(cm);
            basis = &basis * &Self::linear(&Rational::from_integer(BigInt::from(m)));
        }
        acc
    }

    /// Largest combined numerator/denominator bit length over the coefficients.
    pub fn max_bits(&self) -> u64 {
        self.coeffs.iter().map(rational_bits).max().unwrap_or(0)
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;

    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::from_coeffs((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;

    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::from_coeffs((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;

    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::from_coeffs(out)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;

    fn neg(self) -> UniPoly {
        UniPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for UniPoly {
            type Output = UniPoly;

            fn $m(self, rhs: UniPoly) -> UniPoly {
                (&self).$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            }
            first = false;
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => {}
                (_, false) => write!(f, "{mag}*")?,
            }
            match i {
                0 => {}
                1 => write!(f, "k")?,
                _ => write!(f, "k^{i}")?,
            }
        }
        Ok(())
    }
}
