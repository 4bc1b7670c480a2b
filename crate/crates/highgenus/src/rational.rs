//! Exact rational scalars used throughout the geometric pipeline.
//!
//! Everything geometric in this crate is computed over `BigRational`; there
//! are no floating-point code paths and no tolerance parameters.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Rat = BigRational;

/// `n/d` as an exact rational.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from(BigInt::from(n))
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("cannot parse `{0}` as a rational (expected `p`, `p/q`, or a decimal)")]
pub struct ParseRatError(pub String);

/// Parses `"3"`, `"3/4"`, `"-3/4"` or a plain decimal like `"0.25"` exactly.
pub fn parse_rational(s: &str) -> Result<Rat, ParseRatError> {
    let s = s.trim();
    let err = || ParseRatError(s.to_string());
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|_| err())?;
        let d: BigInt = den.trim().parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Rat::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        if frac_part.is_empty() || !frac_part.chars().all(|c| c.is_ascii_digit()) {
            return Err(err());
        }
        let neg = int_part.starts_with('-');
        let i: BigInt = if int_part == "-" || int_part.is_empty() {
            BigInt::zero()
        } else {
            int_part.parse().map_err(|_| err())?
        };
        let f: BigInt = frac_part.parse().map_err(|_| err())?;
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let frac = Rat::new(f, scale);
        let whole = Rat::from(i.abs());
        let total = whole + frac;
        return Ok(if neg || i.is_negative() { -total } else { total });
    }
    let n: BigInt = s.parse().map_err(|_| err())?;
    Ok(Rat::from(n))
}

/// Canonical string form: `"p"` for integers, `"p/q"` otherwise.
pub fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Rounds to `places` decimal digits (half away from zero) for lossy exports.
pub fn rat_to_decimal(r: &Rat, places: usize) -> String {
    let scale = BigInt::from(10u32).pow(places as u32);
    let scaled = r * Rat::from(scale.clone());
    let half = rat(1, 2);
    let rounded: BigInt = if scaled.is_negative() {
        -(-scaled + half).floor().to_integer()
    } else {
        (scaled + half).floor().to_integer()
    };
    let neg = rounded.is_negative();
    let digits = rounded.abs().to_string();
    let digits = if digits.len() <= places {
        format!("{}{}", "0".repeat(places + 1 - digits.len()), digits)
    } else {
        digits
    };
    let (int_part, frac_part) = digits.split_at(digits.len() - places);
    format!("{}{}.{}", if neg { "-" } else { "" }, int_part, frac_part)
}

/// Exact f64 check helper for CLI display only.
pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}
