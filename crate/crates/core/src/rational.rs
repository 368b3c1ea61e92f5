//! Exact rational scalars and their text form (`a/b`).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qfrac(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn qbig(n: BigInt) -> Q {
    Q::from_integer(n)
}

/// `a/b`, or `a` when the denominator is one.
pub fn fmt_q(c: &Q) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational `{s}`"));
    match s.split_once('/') {
        Some((a, b)) => {
            let a: BigInt = a.trim().parse().map_err(|_| bad())?;
            let b: BigInt = b.trim().parse().map_err(|_| bad())?;
            if b.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(a, b))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Integer power with a possibly negative exponent.
///
/// `0^0 = 1`; a negative exponent on a zero base yields `None`.
pub fn pow_i(base: &Q, exp: i64) -> Option<Q> {
    if exp >= 0 {
        Some(num_traits::pow(base.clone(), exp as usize))
    } else if base.is_zero() {
        None
    } else {
        Some(num_traits::pow(base.recip(), exp.unsigned_abs() as usize))
    }
}

pub fn is_integer(c: &Q) -> bool {
    c.denom().is_one()
}

pub fn is_nonneg_integer(c: &Q) -> bool {
    is_integer(c) && !c.is_negative()
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_and_parse() {
        assert_eq!(fmt_q(&qfrac(2, 4)), "1/2");
        assert_eq!(fmt_q(&qfrac(-6, 3)), "-2");
        assert_eq!(parse_q("-3/9").unwrap(), qfrac(-1, 3));
        assert_eq!(parse_q("7").unwrap(), q(7));
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("x").is_err());
    }

    #[test]
    fn powers_follow_conventions() {
        assert_eq!(pow_i(&q(0), 0), Some(q(1)));
        assert_eq!(pow_i(&q(-1), -1), Some(q(-1)));
        assert_eq!(pow_i(&q(-1), -2), Some(q(1)));
        assert_eq!(pow_i(&q(2), -3), Some(qfrac(1, 8)));
        assert_eq!(pow_i(&q(0), -1), None);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(6, 2), BigInt::from(15));
        assert_eq!(binomial(3, 5), BigInt::zero());
        assert_eq!(factorial(5), BigInt::from(120));
    }
}
