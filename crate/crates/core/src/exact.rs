//! Exact rational numbers and their text forms.
//!
//! Probabilities are read from decimal literals (`.46`, `0.46`) or fractions
//! (`46/100`) without any floating-point intermediate, and written back as the
//! shortest exact decimal when the denominator allows it.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Arbitrary precision rational used for every probability and matrix entry.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRationalError {
    #[error("empty number")]
    Empty,
    #[error("invalid number `{0}`")]
    Invalid(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// Parses `3`, `-2`, `.46`, `0.46`, `1.`, or `p/q` into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let s = text.trim();
    if s.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    let invalid = || ParseRationalError::Invalid(s.to_string());

    if let Some((num, den)) = s.split_once('/') {
        let num = parse_integer(num.trim()).ok_or_else(invalid)?;
        let den = parse_integer(den.trim()).ok_or_else(invalid)?;
        if den.is_zero() {
            return Err(ParseRationalError::ZeroDenominator(s.to_string()));
        }
        return Ok(Rational::new(num, den));
    }

    let (negative, body) = match s.as_bytes()[0] {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(invalid());
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit()) || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
        return Err(invalid());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut numer: BigInt = digits.parse().map_err(|_| invalid())?;
    if negative {
        numer = -numer;
    }
    let denom = num_traits::pow(BigInt::from(10u32), frac_part.len());
    Ok(Rational::new(numer, denom))
}

fn parse_integer(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Number of decimal places needed to write `r` exactly, or `None` when the
/// reduced denominator has a prime factor other than 2 or 5.
pub fn decimal_places(r: &Rational) -> Option<usize> {
    let mut den = r.denom().clone();
    let two = BigInt::from(2u32);
    let five = BigInt::from(5u32);
    let (mut twos, mut fives) = (0usize, 0usize);
    while den.is_even() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    den.is_one().then_some(twos.max(fives))
}

/// Shortest exact decimal (`0.46`, `1`, `-0.0044`), falling back to `p/q`.
pub fn format_rational(r: &Rational) -> String {
    match decimal_places(r) {
        Some(places) => format_decimal(r, places),
        None => format!("{}/{}", r.numer(), r.denom()),
    }
}

fn format_decimal(r: &Rational, places: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10u32), places);
    let scaled = (r * Rational::from_integer(scale)).to_integer();
    let sign = if scaled.is_negative() { "-" } else { "" };
    let digits = scaled.abs().to_string();
    if places == 0 {
        return format!("{sign}{digits}");
    }
    let padded = format!("{digits:0>width$}", width = places + 1);
    let (int_part, frac_part) = padded.split_at(padded.len() - places);
    format!("{sign}{int_part}.{frac_part}")
}

/// Nearest `f64`; only used for display and the numeric steady state.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Writes a rational as `p/q (= decimal)`, the form used in reports.
pub struct WithDecimal<'a>(pub &'a Rational);

impl fmt::Display for WithDecimal<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.0;
        if r.is_integer() {
            write!(f, "{}", r.numer())
        } else {
            match decimal_places(r) {
                Some(places) => write!(f, "{}/{} (= {})", r.numer(), r.denom(), format_decimal(r, places)),
                None => write!(f, "{}/{} (~ {:.6})", r.numer(), r.denom(), to_f64(r)),
            }
        }
    }
}

/// Shorthand used throughout the tests and fixtures: `ratio("0.46")`.
///
/// # Panics
///
/// Panics when `text` is not a valid rational literal.
pub fn ratio(text: &str) -> Rational {
    parse_rational(text).unwrap_or_else(|e| panic!("bad rational literal {text:?}: {e}"))
}
