//! Exact rational scalars.
//!
//! `BigRational` already keeps values reduced with a positive denominator, so
//! equality is value equality.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn from_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn from_frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Parses `"p/q"`, `"p"` or a JSON integer-looking string.
pub fn parse(s: &str) -> Result<Rational> {
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(n, d))
}

/// Always writes `p/q`, even for integers, so the wire format is uniform.
pub fn to_fraction_string(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn sign(x: &Rational) -> i8 {
    if x.is_zero() {
        0
    } else if x.numer() > &BigInt::zero() {
        1
    } else {
        -1
    }
}
