use super::ulp::{exponent_of, lowest_bit_exponent};
use crate::{Error, Result};

/// Knuth's branch-free TwoSum on finite inputs; the caller checks overflow.
#[inline]
pub(crate) fn two_sum_raw(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

/// Dekker's FastTwoSum, exact whenever `|a| >= |b|` and `a + b` does not overflow.
#[inline]
pub(crate) fn fast_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

/// Returns `(s, t)` with `s = RN(a + b)` and `s + t = a + b` exactly.
pub fn two_sum(a: f64, b: f64) -> Result<(f64, f64)> {
    if a.is_nan() || b.is_nan() {
        return Err(Error::Domain("two_sum of NaN"));
    }
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain("two_sum of a non-finite value"));
    }
    let (s, t) = if a.abs() >= b.abs() {
        fast_two_sum(a, b)
    } else {
        fast_two_sum(b, a)
    };
    if !s.is_finite() {
        return Err(Error::Overflow("two_sum"));
    }
    Ok((s, t))
}

/// Result of [`two_prod`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoProd {
    pub p: f64,
    pub e: f64,
    /// Set when `a * b - p` is not representable (gradual underflow), in
    /// which case `p + e` is only an approximation of the product.
    pub underflow: bool,
}

/// Returns `p = RN(a * b)` and `e` with `p + e = a * b` exactly, using a fused
/// multiply-add for the error term.
pub fn two_prod(a: f64, b: f64) -> Result<TwoProd> {
    if a.is_nan() || b.is_nan() {
        return Err(Error::Domain("two_prod of NaN"));
    }
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain("two_prod of a non-finite value"));
    }
    let p = a * b;
    if !p.is_finite() {
        return Err(Error::Overflow("two_prod"));
    }
    let e = a.mul_add(b, -p);
    Ok(TwoProd {
        p,
        e,
        underflow: product_error_inexact(a, b),
    })
}

/// The exact product's lowest set bit lies below `2^-1074`, so neither the
/// rounded product nor its error term can capture it.
pub(crate) fn product_error_inexact(a: f64, b: f64) -> bool {
    if a == 0.0 || b == 0.0 {
        return false;
    }
    lowest_bit_exponent(a) + lowest_bit_exponent(b) < -1074
}

/// Sign of `a * b - p` where `p = RN(a * b)`, valid for every finite input
/// including products in the subnormal range.
pub(crate) fn product_error_sign(a: f64, b: f64, p: f64) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    if a == 0.0 || b == 0.0 {
        return Ordering::Equal;
    }
    let e = a.mul_add(b, -p);
    if e != 0.0 || !product_error_inexact(a, b) {
        return e.partial_cmp(&0.0).unwrap_or(Ordering::Equal);
    }
    // Rescale both factors to [1, 2): the scaled product and its error are
    // far from the subnormal range, and so is p scaled by the same factor.
    let exact_sign = if (a < 0.0) != (b < 0.0) {
        Ordering::Less
    } else {
        Ordering::Greater
    };
    if p == 0.0 {
        return exact_sign;
    }
    let ka = -exponent_of(a);
    let kb = -exponent_of(b);
    let sa = super::scale2(a, ka);
    let sb = super::scale2(b, kb);
    let sp = super::scale2(p, ka + kb);
    let p2 = sa * sb;
    let e2 = sa.mul_add(sb, -p2);
    // p2 and sp agree to within a factor of two, so the difference is exact.
    let d = p2 - sp;
    let (s, _) = two_sum_raw(d, e2);
    s.partial_cmp(&0.0).unwrap_or(Ordering::Equal)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p2(k: i32) -> f64 {
        2f64.powi(k)
    }

    #[test]
    fn two_sum_examples() {
        assert_eq!(two_sum(p2(100), -p2(100)).unwrap(), (0.0, 0.0));
        assert_eq!(two_sum(1.0, p2(100)).unwrap(), (p2(100), 1.0));
        // 1 + 2^-53 is a tie and rounds to the even neighbour 1.
        assert_eq!(two_sum(1.0, p2(-53)).unwrap(), (1.0, p2(-53)));
    }

    #[test]
    fn two_sum_errors() {
        assert!(matches!(two_sum(f64::MAX, f64::MAX), Err(Error::Overflow(_))));
        assert!(matches!(two_sum(f64::NAN, 1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn two_prod_examples() {
        let r = two_prod(3.0, 5.0).unwrap();
        assert_eq!((r.p, r.e, r.underflow), (15.0, 0.0, false));
        let x = 1.0 + p2(-52);
        let r = two_prod(x, x).unwrap();
        assert_eq!((r.p, r.e), (1.0 + p2(-51), p2(-104)));
        let r = two_prod(p2(-53), p2(-53)).unwrap();
        assert_eq!((r.p, r.e), (p2(-106), 0.0));
    }

    #[test]
    fn two_prod_flags_underflow() {
        let a = 1.0 + p2(-52);
        let b = p2(-1000) * (1.0 + p2(-52));
        let r = two_prod(a, b * p2(-60)).unwrap();
        assert!(r.underflow);
        assert!(matches!(two_prod(f64::MAX, 2.0), Err(Error::Overflow(_))));
    }

    #[test]
    fn product_error_sign_in_subnormal_range() {
        use std::cmp::Ordering;
        let tiny = f64::from_bits(3); // 3 * 2^-1074
        // 3 * 2^-1074 * 0.5 = 1.5 * 2^-1074 rounds (tie to even) to 2 * 2^-1074.
        let p = tiny * 0.5;
        assert_eq!(p, f64::from_bits(2));
        assert_eq!(product_error_sign(tiny, 0.5, p), Ordering::Less);
        let p = tiny * 0.25; // 0.75 ulp rounds up to 1 ulp
        assert_eq!(p, f64::from_bits(1));
        assert_eq!(product_error_sign(tiny, 0.25, p), Ordering::Less);
        let p = tiny * (1.0 / 3.0); // just below 1 ulp
        assert_eq!(product_error_sign(tiny, 1.0 / 3.0, p), Ordering::Less);
        // 0.3 is stored slightly below 3/10, so 5 * 0.3 ulps is just below 1.5.
        let p = f64::from_bits(5) * 0.3;
        assert_eq!(p, f64::from_bits(1));
        assert_eq!(product_error_sign(f64::from_bits(5), 0.3, p), Ordering::Greater);
        let p = f64::from_bits(7) * 0.3; // 2.1 -> 2 ulps
        assert_eq!(product_error_sign(f64::from_bits(7), 0.3, p), Ordering::Greater);
    }
}
