use crate::{Error, Result};

const MANT_BITS: u32 = 52;
const EXP_MASK: u64 = 0x7ff0_0000_0000_0000;
const MANT_MASK: u64 = 0x000f_ffff_ffff_ffff;

/// `floor(log2 |x|)` for finite nonzero `x`, subnormals included.
pub(crate) fn exponent_of(x: f64) -> i32 {
    debug_assert!(x.is_finite() && x != 0.0);
    let bits = x.to_bits();
    let biased = ((bits & EXP_MASK) >> MANT_BITS) as i32;
    if biased == 0 {
        let m = bits & MANT_MASK;
        // value = m * 2^-1074
        -1074 + (63 - m.leading_zeros() as i32)
    } else {
        biased - 1023
    }
}

/// Exponent of the lowest set bit of `x` (finite nonzero).
pub(crate) fn lowest_bit_exponent(x: f64) -> i32 {
    let bits = x.to_bits();
    let biased = ((bits & EXP_MASK) >> MANT_BITS) as i32;
    let mut m = bits & MANT_MASK;
    let base = if biased == 0 {
        -1074
    } else {
        m |= 1 << MANT_BITS;
        biased - 1075
    };
    base + m.trailing_zeros() as i32
}

/// `x * 2^k`, exact whenever the result is representable (every
/// intermediate then is too, since the chain is monotone in magnitude).
pub(crate) fn scale2(mut x: f64, mut k: i32) -> f64 {
    let pow2 = |j: i32| f64::from_bits(((j + 1023) as u64) << MANT_BITS);
    while k > 1023 {
        x *= pow2(1023);
        k -= 1023;
    }
    while k < -1022 {
        x *= pow2(-1022);
        k += 1022;
    }
    x * pow2(k)
}

/// Unit in the last place: `2^(e-p+1)` for `|x|` in `[2^e, 2^(e+1))`, with the
/// exponent clamped at the subnormal threshold.
pub fn ulp(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Domain("ulp of a non-finite value"));
    }
    if x == 0.0 {
        return Err(Error::Domain("ulp of zero"));
    }
    let e = exponent_of(x).max(-1022);
    let k = e - MANT_BITS as i32;
    Ok(if k >= -1022 {
        f64::from_bits(((k + 1023) as u64) << MANT_BITS)
    } else {
        f64::from_bits(1u64 << (k + 1074))
    })
}

/// Smallest binary64 value strictly greater than `x`.
#[inline]
pub fn succ(x: f64) -> f64 {
    x.next_up()
}

/// Largest binary64 value strictly less than `x`.
#[inline]
pub fn pred(x: f64) -> f64 {
    x.next_down()
}

fn ordered_bits(x: f64) -> i64 {
    let b = x.to_bits() as i64;
    if b < 0 {
        i64::MIN - b
    } else {
        b
    }
}

/// Number of binary64 values between `a` and `b` (0 when equal, `+0 == -0`).
pub fn ulp_distance(a: f64, b: f64) -> u64 {
    ordered_bits(a).abs_diff(ordered_bits(b))
}
