use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};

/// Exact rational coefficient, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses `"p/q"` or `"p"`. Decimal points, exponents and zero denominators
/// are rejected rather than rounded.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || Error::MalformedRational(text.to_string());
    let (numer, denom) = match text.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (text, None),
    };
    let digits = |s: &str| {
        let body = s.strip_prefix(['-', '+']).unwrap_or(s);
        !body.is_empty() && body.bytes().all(|b| b.is_ascii_digit())
    };
    if !digits(numer) || !denom.map_or(true, digits) {
        return Err(bad());
    }
    let numer = BigInt::from_str(numer).map_err(|_| bad())?;
    let denom = match denom {
        Some(d) => BigInt::from_str(d).map_err(|_| bad())?,
        None => BigInt::from(1),
    };
    if denom == BigInt::from(0) {
        return Err(bad());
    }
    Ok(Rational::new(numer, denom))
}

/// Canonical text form: `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(value: &Rational) -> String {
    value.to_string()
}
