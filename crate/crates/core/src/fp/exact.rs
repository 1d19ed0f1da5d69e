//! Exact arithmetic on binary64 values.
//!
//! Sums, differences and products of binary64 values are dyadic rationals and
//! are kept as `m * 2^e` with a big-integer `m`; a quotient switches the value
//! to a general rational. This is the oracle that every enclosure and
//! rounding claim in the crate is tested against.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::{Error, Result};

/// Rounding applied when projecting an exact value back to binary64.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RoundMode {
    /// Round to nearest, ties to even.
    Nearest,
    /// Toward negative infinity.
    Down,
    /// Toward positive infinity.
    Up,
}

#[derive(Clone)]
enum Repr {
    Dyadic { m: BigInt, e: i64 },
    Rational(BigRational),
}

/// An exact real value (a rational number).
#[derive(Clone)]
pub struct ExactValue(Repr);

impl ExactValue {
    pub fn zero() -> Self {
        ExactValue(Repr::Dyadic { m: BigInt::zero(), e: 0 })
    }

    pub fn from_f64(x: f64) -> Result<Self> {
        if !x.is_finite() {
            return Err(Error::Domain("exact value of a non-finite number"));
        }
        Ok(Self::from_finite(x))
    }

    fn from_finite(x: f64) -> Self {
        let bits = x.to_bits();
        let biased = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & 0x000f_ffff_ffff_ffff;
        let (mant, e) = if biased == 0 {
            (frac, -1074)
        } else {
            (frac | (1 << 52), biased - 1075)
        };
        let mut m = BigInt::from(mant);
        if x.is_sign_negative() {
            m = -m;
        }
        ExactValue(Repr::Dyadic { m, e })
    }

    pub fn from_rational(r: BigRational) -> Self {
        ExactValue(Repr::Rational(r))
    }

    pub fn to_rational(&self) -> BigRational {
        match &self.0 {
            Repr::Rational(r) => r.clone(),
            Repr::Dyadic { m, e } => {
                if *e >= 0 {
                    BigRational::from_integer(m << (*e as usize))
                } else {
                    BigRational::new(m.clone(), BigInt::one() << ((-*e) as usize))
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Dyadic { m, .. } => m.is_zero(),
            Repr::Rational(r) => r.is_zero(),
        }
    }

    pub fn signum(&self) -> Ordering {
        let s = match &self.0 {
            Repr::Dyadic { m, .. } => m.sign(),
            Repr::Rational(r) => r.numer().sign() * r.denom().sign(),
        };
        match s {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() == Ordering::Less {
            -self
        } else {
            self.clone()
        }
    }

    /// Exact quotient; fails on a zero divisor.
    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::Domain("exact division by zero"));
        }
        Ok(ExactValue(Repr::Rational(self.to_rational() / other.to_rational())))
    }

    pub fn cmp_f64(&self, x: f64) -> Ordering {
        if x == f64::INFINITY {
            return Ordering::Less;
        }
        if x == f64::NEG_INFINITY {
            return Ordering::Greater;
        }
        self.cmp(&Self::from_finite(x))
    }

    /// Correctly rounded binary64 projection. Overflow follows IEEE 754:
    /// round-to-nearest and the outward direction give an infinity, the
    /// inward direction gives the largest finite value.
    pub fn round(&self, mode: RoundMode) -> f64 {
        let negative = self.signum() == Ordering::Less;
        let (num, den) = match &self.0 {
            Repr::Dyadic { m, e } => {
                if m.is_zero() {
                    return 0.0;
                }
                let mag = m.magnitude().clone();
                if *e >= 0 {
                    (mag << (*e as usize), BigUint::one())
                } else {
                    (mag, BigUint::one() << ((-*e) as usize))
                }
            }
            Repr::Rational(r) => {
                if r.is_zero() {
                    return 0.0;
                }
                (r.numer().magnitude().clone(), r.denom().magnitude().clone())
            }
        };
        let away = match mode {
            RoundMode::Nearest => None,
            RoundMode::Down => Some(negative),
            RoundMode::Up => Some(!negative),
        };
        let mag = round_positive(&num, &den, away);
        if negative {
            -mag
        } else {
            mag
        }
    }
}

/// Rounds `num / den > 0` to binary64. `away` is `None` for nearest-even,
/// `Some(true)` to round the magnitude up, `Some(false)` to truncate.
fn round_positive(num: &BigUint, den: &BigUint, away: Option<bool>) -> f64 {
    // Find k with 2^52 <= num * 2^k / den < 2^53.
    let mut k: i64 = 52 - (num.bits() as i64 - den.bits() as i64);
    let quot = |k: i64| -> (BigUint, BigUint) {
        if k >= 0 {
            (num << (k as usize)).div_rem(den)
        } else {
            num.div_rem(&(den << ((-k) as usize)))
        }
    };
    let (mut q, mut r) = quot(k);
    let lo = BigUint::one() << 52usize;
    let hi = BigUint::one() << 53usize;
    while q >= hi {
        k -= 1;
        (q, r) = quot(k);
    }
    while q < lo {
        k += 1;
        (q, r) = quot(k);
    }
    // value exponent is 52 - k; the last kept bit has weight 2^-k
    if -k < -1074 {
        k = 1074;
        (q, r) = quot(k);
    }
    let exponent = 52 - k;
    if exponent > 1023 {
        return match away {
            Some(false) => f64::MAX,
            _ => f64::INFINITY,
        };
    }
    let round_up = if r.is_zero() {
        false
    } else {
        match away {
            Some(up) => up,
            None => {
                let twice = &r << 1usize;
                match twice.cmp(den) {
                    Ordering::Greater => true,
                    Ordering::Less => false,
                    Ordering::Equal => q.is_odd(),
                }
            }
        }
    };
    let mut q: u64 = q.try_into().expect("quotient fits 53 bits");
    if round_up {
        q += 1;
    }
    let v = super::scale2(q as f64, -(k as i32));
    if v.is_infinite() && away == Some(false) {
        f64::MAX
    } else {
        v
    }
}

fn align(m1: &BigInt, e1: i64, m2: &BigInt, e2: i64) -> (BigInt, BigInt, i64) {
    match e1.cmp(&e2) {
        Ordering::Equal => (m1.clone(), m2.clone(), e1),
        Ordering::Greater => (m1 << ((e1 - e2) as usize), m2.clone(), e2),
        Ordering::Less => (m1.clone(), m2 << ((e2 - e1) as usize), e1),
    }
}

impl Add for &ExactValue {
    type Output = ExactValue;
    fn add(self, rhs: &ExactValue) -> ExactValue {
        match (&self.0, &rhs.0) {
            (Repr::Dyadic { m: m1, e: e1 }, Repr::Dyadic { m: m2, e: e2 }) => {
                if m1.is_zero() {
                    return rhs.clone();
                }
                if m2.is_zero() {
                    return self.clone();
                }
                let (a, b, e) = align(m1, *e1, m2, *e2);
                ExactValue(Repr::Dyadic { m: a + b, e })
            }
            _ => ExactValue(Repr::Rational(self.to_rational() + rhs.to_rational())),
        }
    }
}

impl Sub for &ExactValue {
    type Output = ExactValue;
    fn sub(self, rhs: &ExactValue) -> ExactValue {
        self + &(-rhs)
    }
}

impl Mul for &ExactValue {
    type Output = ExactValue;
    fn mul(self, rhs: &ExactValue) -> ExactValue {
        match (&self.0, &rhs.0) {
            (Repr::Dyadic { m: m1, e: e1 }, Repr::Dyadic { m: m2, e: e2 }) => {
                ExactValue(Repr::Dyadic { m: m1 * m2, e: e1 + e2 })
            }
            _ => ExactValue(Repr::Rational(self.to_rational() * rhs.to_rational())),
        }
    }
}

impl Neg for &ExactValue {
    type Output = ExactValue;
    fn neg(self) -> ExactValue {
        match &self.0 {
            Repr::Dyadic { m, e } => ExactValue(Repr::Dyadic { m: -m, e: *e }),
            Repr::Rational(r) => ExactValue(Repr::Rational(-r)),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr for ExactValue {
            type Output = ExactValue;
            fn $f(self, rhs: ExactValue) -> ExactValue { (&self).$f(&rhs) }
        }
        impl $tr<&ExactValue> for ExactValue {
            type Output = ExactValue;
            fn $f(self, rhs: &ExactValue) -> ExactValue { (&self).$f(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for ExactValue {
    type Output = ExactValue;
    fn neg(self) -> ExactValue {
        -&self
    }
}

impl Ord for ExactValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Dyadic { m: m1, e: e1 }, Repr::Dyadic { m: m2, e: e2 }) => {
                let s1 = self.signum();
                let s2 = other.signum();
                if s1 != s2 || s1 == Ordering::Equal {
                    return s1.cmp(&s2);
                }
                // Same nonzero sign: compare magnitudes by leading-bit position first.
                let top1 = m1.bits() as i64 + e1;
                let top2 = m2.bits() as i64 + e2;
                let mag = if top1 != top2 {
                    top1.cmp(&top2)
                } else {
                    let (a, b, _) = align(m1, *e1, m2, *e2);
                    a.magnitude().cmp(b.magnitude())
                };
                if s1 == Ordering::Less {
                    mag.reverse()
                } else {
                    mag
                }
            }
            _ => self.to_rational().cmp(&other.to_rational()),
        }
    }
}

impl PartialOrd for ExactValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for ExactValue {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for ExactValue {}

impl fmt::Debug for ExactValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExactValue({} ~ {:e})", self.to_rational(), self.round(RoundMode::Nearest))
    }
}

impl From<f64> for ExactValue {
    /// Panics on non-finite input; use [`ExactValue::from_f64`] to handle it.
    fn from(x: f64) -> Self {
        Self::from_f64(x).expect("finite value")
    }
}

/// Exact sum of finite binary64 values.
pub fn exact_sum(values: &[f64]) -> Result<ExactValue> {
    values.iter().try_fold(ExactValue::zero(), |acc, &x| {
        Ok(acc + ExactValue::from_f64(x)?)
    })
}

/// Exact dot product of two equally long vectors of finite binary64 values.
pub fn exact_dot(a: &[f64], b: &[f64]) -> Result<ExactValue> {
    if a.len() != b.len() {
        return Err(Error::Dimension(format!(
            "dot product of lengths {} and {}",
            a.len(),
            b.len()
        )));
    }
    a.iter().zip(b).try_fold(ExactValue::zero(), |acc, (&x, &y)| {
        Ok(acc + ExactValue::from_f64(x)? * ExactValue::from_f64(y)?)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p2(k: i32) -> f64 {
        2f64.powi(k)
    }

    #[test]
    fn sums_and_dots() {
        let s = exact_sum(&[1.0, p2(100), -p2(100)]).unwrap();
        assert_eq!(s, ExactValue::from(1.0));
        assert!(exact_sum(&[]).unwrap().is_zero());
        let d = exact_dot(&[1.0, 1.0], &[p2(-53), p2(-53)]).unwrap();
        assert_eq!(d, ExactValue::from(p2(-52)));
        assert!(exact_sum(&[f64::INFINITY]).is_err());
        assert!(exact_dot(&[1.0], &[]).is_err());
    }

    #[test]
    fn projections() {
        let third = ExactValue::from(1.0).checked_div(&ExactValue::from(3.0)).unwrap();
        let n = third.round(RoundMode::Nearest);
        assert_eq!(n, 1.0 / 3.0);
        let d = third.round(RoundMode::Down);
        let u = third.round(RoundMode::Up);
        assert_eq!(u, d.next_up());
        assert!(d == n || u == n);
        let minus = -&third;
        assert_eq!(minus.round(RoundMode::Down), -u);
        // 1 + 2^-53 is a tie: nearest-even goes to 1, directed go apart.
        let t = exact_sum(&[1.0, p2(-53)]).unwrap();
        assert_eq!(t.round(RoundMode::Nearest), 1.0);
        assert_eq!(t.round(RoundMode::Down), 1.0);
        assert_eq!(t.round(RoundMode::Up), 1.0 + p2(-52));
    }

    #[test]
    fn projections_at_the_range_limits() {
        let big = exact_sum(&[f64::MAX, f64::MAX]).unwrap();
        assert_eq!(big.round(RoundMode::Nearest), f64::INFINITY);
        assert_eq!(big.round(RoundMode::Down), f64::MAX);
        assert_eq!((-&big).round(RoundMode::Up), f64::MIN);
        let tiny = ExactValue::from(f64::from_bits(1)) * ExactValue::from(0.5);
        assert_eq!(tiny.round(RoundMode::Nearest), 0.0);
        assert_eq!(tiny.round(RoundMode::Up), f64::from_bits(1));
        let three_halves = ExactValue::from(f64::from_bits(3)) * ExactValue::from(0.5);
        assert_eq!(three_halves.round(RoundMode::Nearest), f64::from_bits(2));
        assert_eq!(ExactValue::from(f64::MIN_POSITIVE).round(RoundMode::Down), f64::MIN_POSITIVE);
    }

    #[test]
    fn ordering() {
        let a = ExactValue::from(1.5);
        let b = ExactValue::from(-p2(-1070));
        assert!(b < a);
        assert!(ExactValue::from(p2(500)) > ExactValue::from(p2(499) * 1.5));
        assert_eq!(a.cmp_f64(f64::INFINITY), Ordering::Less);
        assert_eq!(a.cmp_f64(1.5), Ordering::Equal);
        let third = ExactValue::from(1.0).checked_div(&ExactValue::from(3.0)).unwrap();
        assert_eq!(third.cmp_f64(1.0 / 3.0), Ordering::Greater);
    }
}
