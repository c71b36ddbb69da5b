//! Exact rationals and their `p/q` text form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    BigRational::from_integer(BigInt::from(value))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Writes `p` for integers and `p/q` otherwise.
pub fn format(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

pub fn parse(token: &str) -> std::result::Result<Rational, String> {
    let token = token.trim();
    let (p, q) = match token.split_once('/') {
        Some((p, q)) => (p, q),
        None => (token, "1"),
    };
    let numer: BigInt = p.parse().map_err(|_| format!("bad numerator in {token:?}"))?;
    let denom: BigInt = q.parse().map_err(|_| format!("bad denominator in {token:?}"))?;
    if denom.is_zero() {
        return Err(format!("zero denominator in {token:?}"));
    }
    Ok(BigRational::new(numer, denom))
}

pub(crate) fn parse_at(token: &str, line: usize) -> Result<Rational> {
    parse(token).map_err(|message| Error::Parse { line, message })
}

/// `(-1)^k`.
pub fn parity_sign(k: usize) -> i8 {
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `value` negated when `sign` is negative.
pub fn signed(sign: i8, value: Rational) -> Rational {
    if sign < 0 {
        -value
    } else {
        value
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_form_reduces_and_round_trips() {
        assert_eq!(format(&rat(6, -4)), "-3/2");
        assert_eq!(format(&int(7)), "7");
        assert_eq!(parse("-3/2").unwrap(), rat(-3, 2));
        assert_eq!(parse("4/2").unwrap(), int(2));
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
    }
}
