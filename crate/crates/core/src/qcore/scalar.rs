//! Exact rational scalars.
//!
//! `BigRational` already keeps values in lowest terms with a positive
//! denominator, so it is used directly as the scalar type.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{QrsError, Result};

pub type ExactScalar = BigRational;

/// `num/den` as an exact scalar. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> ExactScalar {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> ExactScalar {
    BigRational::from_integer(BigInt::from(n))
}

/// `r^e` for a signed exponent.
pub fn pow_i(r: &ExactScalar, e: i64) -> Result<ExactScalar> {
    if e >= 0 {
        Ok(pow_u(r, e as u64))
    } else if r.is_zero() {
        Err(QrsError::DivisionByZero(format!("0^{e}")))
    } else {
        Ok(pow_u(r, (-e) as u64).recip())
    }
}

pub fn pow_u(r: &ExactScalar, e: u64) -> ExactScalar {
    num_traits::pow::pow(r.clone(), e as usize)
}

/// Parses `"p/q"`, `"-p/q"` or an integer string.
pub fn parse_rational(s: &str) -> Result<ExactScalar> {
    let s = s.trim();
    let bad = || QrsError::Parse(format!("`{s}` is not a rational of the form num/den"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = n.parse().map_err(|_| bad())?;
    let den: BigInt = d.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(QrsError::DivisionByZero(s.to_string()));
    }
    Ok(BigRational::new(num, den))
}

/// Canonical `"num/den"` form used by every JSON surface.
pub fn format_rational(r: &ExactScalar) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Short human form: integers print without a denominator.
pub fn display_rational(r: &ExactScalar) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &ExactScalar) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Very large numerator and denominator: scale through the bit lengths.
        let shift = r.numer().bits().max(r.denom().bits()) as i64 - 1000;
        let n = (r.numer() >> shift.max(0) as usize).to_f64().unwrap_or(f64::NAN);
        let d = (r.denom() >> shift.max(0) as usize).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Exact rational value of a finite double.
pub fn from_f64(x: f64) -> Result<ExactScalar> {
    BigRational::from_float(x).ok_or_else(|| QrsError::Parse(format!("non-finite value {x}")))
}

pub fn abs_lt_one(r: &ExactScalar) -> bool {
    r.abs() < BigRational::one()
}

/// k choose 2.
pub fn binom2(k: u64) -> u64 {
    k * k.saturating_sub(1) / 2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("2/4").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-3").unwrap(), int(-3));
        assert_eq!(parse_rational(" 6/-4 ").unwrap(), rat(-3, 2));
        assert!(parse_rational("0.5").is_err());
        assert!(parse_rational("1/0").is_err());
        assert_eq!(format_rational(&int(3)), "3/1");
        assert_eq!(display_rational(&rat(-3, 2)), "-3/2");
    }

    #[test]
    fn signed_powers() {
        assert_eq!(pow_i(&rat(1, 2), -3).unwrap(), int(8));
        assert_eq!(pow_i(&rat(2, 3), 2).unwrap(), rat(4, 9));
        assert!(pow_i(&int(0), -1).is_err());
    }

    #[test]
    fn float_round_trip() {
        let r = from_f64(0.3).unwrap();
        assert_eq!(to_f64(&r), 0.3);
    }
}
