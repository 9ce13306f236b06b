use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// Parses `"p"` or `"p/q"` where `p` and `q` are decimal integers and only
/// `p` may carry a leading minus sign.
pub fn parse_rational(s: &str) -> Result<Rational> {
    fn is_int(t: &str, allow_minus: bool) -> bool {
        let digits = match t.strip_prefix('-') {
            Some(rest) if allow_minus => rest,
            _ => t,
        };
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    }
    let bad = || Error::ParseRational(s.to_string());
    let (num, den) = match s.split_once('/') {
        Some((p, q)) => (p, Some(q)),
        None => (s, None),
    };
    if !is_int(num, true) {
        return Err(bad());
    }
    let numer: BigInt = num.parse().map_err(|_| bad())?;
    let denom: BigInt = match den {
        Some(q) if is_int(q, false) => q.parse().map_err(|_| bad())?,
        Some(_) => return Err(bad()),
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return Err(Error::ZeroDenominator(s.to_string()));
    }
    Ok(Rational::new(numer, denom))
}

/// Rising factorial `a (a+1) ... (a+m-1)`; the empty product is one.
pub fn pochhammer(a: &Rational, m: usize) -> Rational {
    let mut acc = Rational::one();
    let mut term = a.clone();
    for _ in 0..m {
        if term.is_zero() {
            return Rational::zero();
        }
        acc *= &term;
        term += Rational::one();
    }
    acc
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Combined bit length of numerator and denominator.
pub fn rational_bits(q: &Rational) -> u64 {
    q.numer().bits() + q.denom().bits()
}
