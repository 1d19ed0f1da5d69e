//! Hexadecimal floating-point text (`0x1.8p+0`), bit-exact in both directions.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::fp::{scale2, ExactValue, RoundMode};
use crate::{Error, Result};

/// Shortest hexadecimal form of `x`: `0x1.8p+0`, `-0x0p+0`,
/// `0x0.0000000000001p-1022`, `inf`, `-inf`. NaN prints as `nan` but is
/// rejected by [`parse_hex`].
pub fn format_hex(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    let sign = if x.is_sign_negative() { "-" } else { "" };
    if x.is_infinite() {
        return format!("{sign}inf");
    }
    let bits = x.to_bits();
    let exp_field = ((bits >> 52) & 0x7ff) as i32;
    let frac = bits & ((1u64 << 52) - 1);
    if exp_field == 0 && frac == 0 {
        return format!("{sign}0x0p+0");
    }
    let (lead, exp) = if exp_field == 0 { (0, -1022) } else { (1, exp_field - 1023) };
    let digits = format!("{frac:013x}");
    let digits = digits.trim_end_matches('0');
    let esign = if exp < 0 { '-' } else { '+' };
    if digits.is_empty() {
        format!("{sign}0x{lead}p{esign}{}", exp.abs())
    } else {
        format!("{sign}0x{lead}.{digits}p{esign}{}", exp.abs())
    }
}

/// Parses hexadecimal float text, rounding to nearest-even if the literal
/// carries more than 53 significant bits. Also accepts `inf`/`infinity`
/// with an optional sign.
pub fn parse_hex(text: &str) -> Result<f64> {
    let err = || Error::Parse(format!("invalid hexadecimal float {text:?}"));
    let s = text.trim();
    let (negative, s) = match s.as_bytes().first() {
        Some(b'-') => (true, &s[1..]),
        Some(b'+') => (false, &s[1..]),
        _ => (false, s),
    };
    let signed = |v: f64| if negative { -v } else { v };
    if s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("infinity") {
        return Ok(signed(f64::INFINITY));
    }
    let body = s
        .strip_prefix("0x")
        .or_else(|| s.strip_prefix("0X"))
        .ok_or_else(err)?;
    let (mantissa, exp) = match body.find(['p', 'P']) {
        Some(i) => (&body[..i], body[i + 1..].parse::<i64>().map_err(|_| err())?),
        None => (body, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    let mut m = BigInt::from(0);
    for c in int_part.chars().chain(frac_part.chars()) {
        let d = c.to_digit(16).ok_or_else(err)?;
        m = m * 16 + d;
    }
    let shift = exp
        .checked_sub(4 * frac_part.len() as i64)
        .filter(|e| e.abs() < 1 << 20)
        .ok_or_else(err)?;
    if m == BigInt::from(0) {
        return Ok(signed(0.0));
    }

    // Fast path: the significand fits and the result is a normal number.
    if m.bits() <= 53 {
        let v = scale2(u64::try_from(&m).map_err(|_| err())? as f64, shift as i32);
        if v.is_finite() && v >= f64::MIN_POSITIVE {
            return Ok(signed(v));
        }
    }
    let two = BigInt::from(2);
    let value = if shift >= 0 {
        BigRational::from_integer(m * two.pow(shift as u32))
    } else {
        BigRational::new(m, two.pow((-shift) as u32))
    };
    let v = ExactValue::from_rational(value).round(RoundMode::Nearest);
    if v.is_infinite() {
        return Err(Error::Parse(format!("{text:?} is out of binary64 range")));
    }
    Ok(signed(v))
}
