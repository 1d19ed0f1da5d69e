use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use crate::fp::{dir_op, succ, Direction, ExactValue, Op};
use crate::io::{format_hex, parse_hex};
use crate::{Error, Result};

/// Closed interval `[lo, hi]` with binary64 endpoints.
///
/// `lo` may be `-inf` and `hi` may be `+inf`; `lo = +inf` or `hi = -inf` would
/// denote no real number and is rejected. A zero endpoint is stored as `+0`
/// so that equal sets compare bitwise equal. The empty set is never a value of
/// this type; operations that can produce it return `Option`.
#[derive(Clone, Copy, PartialEq)]
pub struct EndpointInterval {
    lo: f64,
    hi: f64,
}

#[inline]
fn down(op: Op, a: f64, b: f64) -> f64 {
    dir_op(op, a, b, Direction::Down).expect("interval invariants exclude undefined endpoint operations")
}

#[inline]
fn up(op: Op, a: f64, b: f64) -> f64 {
    dir_op(op, a, b, Direction::Up).expect("interval invariants exclude undefined endpoint operations")
}

/// Directed endpoint product with `0 * inf = 0`: the infinite endpoint stands
/// for arbitrarily large finite values, never for infinity itself.
#[inline]
fn mul_dir(a: f64, b: f64, dir: Direction) -> f64 {
    if a == 0.0 || b == 0.0 {
        0.0
    } else {
        dir_op(Op::Mul, a, b, dir).expect("nonzero non-NaN product")
    }
}

impl EndpointInterval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() {
            return Err(Error::Domain("NaN interval endpoint"));
        }
        if lo > hi {
            return Err(Error::Domain("interval lower endpoint above upper endpoint"));
        }
        if lo == f64::INFINITY || hi == f64::NEG_INFINITY {
            return Err(Error::Domain("interval contains no real number"));
        }
        Ok(Self::raw(lo, hi))
    }

    #[inline]
    fn raw(lo: f64, hi: f64) -> Self {
        // adding +0 maps -0 to +0 and leaves every other value alone
        EndpointInterval { lo: lo + 0.0, hi: hi + 0.0 }
    }

    /// Degenerate interval `[x, x]`.
    pub fn point(x: f64) -> Result<Self> {
        if !x.is_finite() {
            return Err(Error::Domain("point interval needs a finite value"));
        }
        Ok(Self::raw(x, x))
    }

    pub fn entire() -> Self {
        Self::raw(f64::NEG_INFINITY, f64::INFINITY)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    /// `hi - lo` rounded up.
    pub fn width(&self) -> f64 {
        up(Op::Sub, self.hi, self.lo)
    }

    /// `lo/2 + hi/2` rounded to nearest; for unbounded intervals the finite
    /// endpoint, or `0` for the whole line.
    pub fn midpoint(&self) -> f64 {
        match (self.lo.is_finite(), self.hi.is_finite()) {
            (true, true) => {
                let m = self.lo / 2.0 + self.hi / 2.0;
                m.clamp(self.lo, self.hi)
            }
            (true, false) => self.lo,
            (false, true) => self.hi,
            (false, false) => 0.0,
        }
    }

    /// Largest absolute value in the interval.
    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }

    pub fn contains_exact(&self, x: &ExactValue) -> bool {
        x.cmp_f64(self.lo).is_ge() && x.cmp_f64(self.hi).is_le()
    }

    /// `other ⊆ self`.
    pub fn encloses(&self, other: &EndpointInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Set intersection; `None` is the empty set.
    pub fn intersect(&self, other: &EndpointInterval) -> Option<EndpointInterval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then(|| Self::raw(lo, hi))
    }

    /// Smallest interval containing both.
    pub fn hull(&self, other: &EndpointInterval) -> EndpointInterval {
        Self::raw(self.lo.min(other.lo), self.hi.max(other.hi))
    }

    /// Bit-exact literal `[lo,hi]` with hexadecimal-float fields.
    pub fn to_literal(&self) -> String {
        format!("[{},{}]", format_hex(self.lo), format_hex(self.hi))
    }
}

impl fmt::Debug for EndpointInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_literal())
    }
}

impl fmt::Display for EndpointInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

impl FromStr for EndpointInterval {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("expected [lo,hi], got {s:?}")))?;
        let (lo, hi) = inner
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("expected [lo,hi], got {s:?}")))?;
        EndpointInterval::new(parse_hex(lo)?, parse_hex(hi)?)
    }
}

/// `X + Y` with outward rounding.
pub fn ep_add(x: EndpointInterval, y: EndpointInterval) -> EndpointInterval {
    EndpointInterval::raw(down(Op::Add, x.lo, y.lo), up(Op::Add, x.hi, y.hi))
}

/// `X - Y` with outward rounding.
pub fn ep_sub(x: EndpointInterval, y: EndpointInterval) -> EndpointInterval {
    EndpointInterval::raw(down(Op::Sub, x.lo, y.hi), up(Op::Sub, x.hi, y.lo))
}

/// `X * Y`: directed min and max over the four endpoint products.
pub fn ep_mul(x: EndpointInterval, y: EndpointInterval) -> EndpointInterval {
    let pairs = [(x.lo, y.lo), (x.lo, y.hi), (x.hi, y.lo), (x.hi, y.hi)];
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (a, b) in pairs {
        lo = lo.min(mul_dir(a, b, Direction::Down));
        hi = hi.max(mul_dir(a, b, Direction::Up));
    }
    EndpointInterval::raw(lo, hi)
}

/// `X / Y` for `0 ∉ Y`.
pub fn ep_div(x: EndpointInterval, y: EndpointInterval) -> Result<EndpointInterval> {
    if y.contains_zero() {
        return Err(Error::ContainsZero);
    }
    if y.hi < 0.0 {
        return ep_div(-x, -y);
    }
    // y > 0: a finite nonzero lower endpoint, so no inf/inf or x/0 arises
    let lo = if x.lo >= 0.0 {
        down(Op::Div, x.lo, y.hi)
    } else {
        down(Op::Div, x.lo, y.lo)
    };
    let hi = if x.hi <= 0.0 {
        up(Op::Div, x.hi, y.hi)
    } else {
        up(Op::Div, x.hi, y.lo)
    };
    Ok(EndpointInterval::raw(lo, hi))
}

/// `{x² : x ∈ X}`; tighter than `ep_mul(X, X)` whenever `0 ∈ X`.
pub fn ep_square(x: EndpointInterval) -> EndpointInterval {
    if x.lo >= 0.0 {
        EndpointInterval::raw(mul_dir(x.lo, x.lo, Direction::Down), mul_dir(x.hi, x.hi, Direction::Up))
    } else if x.hi <= 0.0 {
        EndpointInterval::raw(mul_dir(x.hi, x.hi, Direction::Down), mul_dir(x.lo, x.lo, Direction::Up))
    } else {
        let m = x.lo.abs().max(x.hi);
        EndpointInterval::raw(0.0, mul_dir(m, m, Direction::Up))
    }
}

/// Hausdorff distance `max(|inf X - inf Y|, |sup X - sup Y|)`, rounded up.
/// For `Y ⊆ X` this is `max(inf Y - inf X, sup X - sup Y)`.
pub fn hausdorff_q(x: EndpointInterval, y: EndpointInterval) -> f64 {
    let gap = |a: f64, b: f64| {
        if a == b {
            0.0
        } else {
            up(Op::Sub, a.max(b), a.min(b))
        }
    };
    gap(x.lo, y.lo).max(gap(x.hi, y.hi))
}

/// Splits `X` at an interior floating-point number, preferring `lo/2 + hi/2`.
pub fn bisect(x: EndpointInterval) -> Result<(EndpointInterval, EndpointInterval)> {
    if !x.is_bounded() {
        return Err(Error::Bisect(x.to_literal()));
    }
    let mut m = x.lo / 2.0 + x.hi / 2.0;
    if !(x.lo < m && m < x.hi) {
        m = succ(x.lo);
        if m >= x.hi {
            return Err(Error::Bisect(x.to_literal()));
        }
    }
    Ok((EndpointInterval::raw(x.lo, m), EndpointInterval::raw(m, x.hi)))
}

impl Neg for EndpointInterval {
    type Output = EndpointInterval;

    fn neg(self) -> EndpointInterval {
        EndpointInterval::raw(-self.hi, -self.lo)
    }
}

impl Add for EndpointInterval {
    type Output = EndpointInterval;

    fn add(self, rhs: EndpointInterval) -> EndpointInterval {
        ep_add(self, rhs)
    }
}

impl Sub for EndpointInterval {
    type Output = EndpointInterval;

    fn sub(self, rhs: EndpointInterval) -> EndpointInterval {
        ep_sub(self, rhs)
    }
}

impl Mul for EndpointInterval {
    type Output = EndpointInterval;

    fn mul(self, rhs: EndpointInterval) -> EndpointInterval {
        ep_mul(self, rhs)
    }
}
