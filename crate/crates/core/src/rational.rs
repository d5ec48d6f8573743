//! Exact rational scalars and their text form.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rat = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rint(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses "p", "-p" or "p/q".
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("invalid rational '{s}'")))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| Error::Parse(format!("invalid rational '{s}'")))?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in '{s}'")));
    }
    Ok(Rat::new(n, d))
}

/// Renders as "p" or "p/q".
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // fall back on a scaled division for extreme magnitudes
        let digits = r.numer().abs().to_string().len() as i32 - r.denom().to_string().len() as i32;
        let scaled = r / Rat::from_integer(BigInt::from(10).pow(digits.unsigned_abs()));
        scaled.to_f64().unwrap_or(f64::NAN) * 10f64.powi(digits)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["3", "-4", "1/2", "-7/3"] {
            assert_eq!(format_rat(&parse_rat(s).unwrap()), s);
        }
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }
}
