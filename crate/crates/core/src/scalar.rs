//! Exact rational scalars.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use num_rational::BigRational as Rational;

/// `n / d` as a rational; panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Integer value if the rational is integral and fits in an `i64`.
pub fn to_i64(q: &Rational) -> Option<i64> {
    if q.is_integer() {
        q.to_integer().to_i64()
    } else {
        None
    }
}

/// Canonical text: `n` for integers, `p/q` otherwise, with a leading `-` when negative.
pub fn format(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `n`, `-n`, `p/q` or `-p/q`.
pub fn parse(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest.trim()),
        None => (false, s.strip_prefix('+').unwrap_or(s).trim()),
    };
    if body.is_empty() {
        return None;
    }
    let value = match body.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = digits(p)?;
            let q: BigInt = digits(q)?;
            if q.is_zero() {
                return None;
            }
            Rational::new(p, q)
        }
        None => Rational::from_integer(digits(body)?),
    };
    Some(if neg { -value } else { value })
}

fn digits(s: &str) -> Option<BigInt> {
    let s = s.trim();
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

pub fn abs(q: &Rational) -> Rational {
    q.abs()
}

/// Integer power with a possibly negative exponent; `base` must be nonzero when `exp < 0`.
pub fn pow(base: &Rational, exp: i64) -> Rational {
    let mut acc = one();
    for _ in 0..exp.unsigned_abs() {
        acc *= base;
    }
    if exp < 0 {
        acc.recip()
    } else {
        acc
    }
}
