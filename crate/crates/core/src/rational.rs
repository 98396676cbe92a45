//! Exact rationals and their textual forms.

use core::fmt;

use num_traits::Zero;

/// Exact rational number. All line and intercept arithmetic goes through this type.
pub type Rational = num_rational::Ratio<i64>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseRationalError {
    Empty,
    Invalid,
    ZeroDenominator,
    Overflow,
}

impl fmt::Display for ParseRationalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseRationalError::Empty => f.write_str("empty rational literal"),
            ParseRationalError::Invalid => f.write_str("invalid rational literal"),
            ParseRationalError::ZeroDenominator => f.write_str("zero denominator"),
            ParseRationalError::Overflow => f.write_str("rational literal out of range"),
        }
    }
}

impl core::error::Error for ParseRationalError {}

/// Parses `p/q`, a signed integer, or a signed decimal such as `-1.5` or `0.2`.
///
/// Decimals convert exactly: `0.2` becomes `1/5`.
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let text = text.trim();
    if text.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    if let Some((num, den)) = text.split_once('/') {
        let num = parse_decimal(num.trim())?;
        let den = parse_decimal(den.trim())?;
        if den.is_zero() {
            return Err(ParseRationalError::ZeroDenominator);
        }
        return Ok(num / den);
    }
    parse_decimal(text)
}

fn parse_decimal(text: &str) -> Result<Rational, ParseRationalError> {
    let (negative, body) = match text.as_bytes().first() {
        Some(b'-') => (true, &text[1..]),
        Some(b'+') => (false, &text[1..]),
        Some(_) => (false, text),
        None => return Err(ParseRationalError::Empty),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(ParseRationalError::Invalid);
    }
    let digits = |s: &str| s.bytes().all(|b| b.is_ascii_digit());
    if !digits(int_part) || !digits(frac_part) {
        return Err(ParseRationalError::Invalid);
    }
    let mut numer: i64 = 0;
    let mut denom: i64 = 1;
    for b in int_part.bytes().chain(frac_part.bytes()) {
        numer = numer
            .checked_mul(10)
            .and_then(|n| n.checked_add(i64::from(b - b'0')))
            .ok_or(ParseRationalError::Overflow)?;
    }
    for _ in 0..frac_part.len() {
        denom = denom.checked_mul(10).ok_or(ParseRationalError::Overflow)?;
    }
    let value = Rational::new(numer, denom);
    Ok(if negative { -value } else { value })
}

/// Exact floor of a rational as an integer.
pub fn floor(value: Rational) -> i64 {
    value.floor().to_integer()
}

pub(crate) fn half() -> Rational {
    Rational::new(1, 2)
}

pub(crate) fn int(value: i64) -> Rational {
    Rational::from_integer(value)
}

pub(crate) fn max(a: Rational, b: Rational) -> Rational {
    if a >= b {
        a
    } else {
        b
    }
}

pub(crate) fn min(a: Rational, b: Rational) -> Rational {
    if a <= b {
        a
    } else {
        b
    }
}
