use std::cmp::Ordering;

use super::eft::{fast_two_sum, product_error_sign};
use super::ulp::{exponent_of, scale2};
use super::{pred, succ};
use crate::{Error, Result};

/// Arithmetic operation for [`dir_op`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
}

/// Rounding direction: toward negative or positive infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Down,
    Up,
}

impl Direction {
    pub fn flip(self) -> Self {
        match self {
            Direction::Down => Direction::Up,
            Direction::Up => Direction::Down,
        }
    }
}

/// Correctly rounded `a op b` toward `dir`, computed from the round-to-nearest
/// result and the sign of its exact error. Never reads or writes the
/// floating-point environment.
///
/// Infinite operands follow IEEE 754 (infinite arithmetic is exact); any
/// operation whose IEEE result is NaN, a NaN operand, or division by zero is a
/// [`Error::Domain`]. A finite result that overflows saturates per directed
/// rounding: `RD` of a positive overflow is `f64::MAX`.
pub fn dir_op(op: Op, a: f64, b: f64, dir: Direction) -> Result<f64> {
    if a.is_nan() || b.is_nan() {
        return Err(Error::Domain("NaN operand"));
    }
    if op == Op::Div && b == 0.0 {
        return Err(Error::Domain("division by zero"));
    }
    let rn = match op {
        Op::Add => a + b,
        Op::Sub => a - b,
        Op::Mul => a * b,
        Op::Div => a / b,
    };
    if rn.is_nan() {
        return Err(Error::Domain("undefined operation on infinities"));
    }
    if a.is_infinite() || b.is_infinite() {
        return Ok(rn);
    }
    if rn.is_infinite() {
        return Ok(saturate(rn, dir));
    }
    let err = match op {
        Op::Add => sum_error_sign(a, b),
        Op::Sub => sum_error_sign(a, -b),
        Op::Mul => product_error_sign(a, b, rn),
        Op::Div => quotient_error_sign(a, b, rn),
    };
    Ok(nudge(rn, err, dir, op, a, b))
}

#[inline]
fn saturate(inf: f64, dir: Direction) -> f64 {
    match (inf > 0.0, dir) {
        (true, Direction::Down) => f64::MAX,
        (false, Direction::Up) => f64::MIN,
        _ => inf,
    }
}

/// `rn` is the hardware result of the operation. It is the round-to-nearest
/// value in a default environment, but every step below only needs it to be
/// one of the two neighbours of the exact result, so a hostile ambient
/// rounding mode does not change the outcome.
#[inline]
fn nudge(rn: f64, err: Ordering, dir: Direction, op: Op, a: f64, b: f64) -> f64 {
    match (err, dir) {
        (Ordering::Less, Direction::Down) => pred(rn),
        (Ordering::Greater, Direction::Up) => succ(rn),
        (Ordering::Less, Direction::Up) | (Ordering::Greater, Direction::Down) => rn,
        (Ordering::Equal, _) if rn == 0.0 => match op {
            Op::Add => exact_zero_sum(a, b, dir),
            Op::Sub => exact_zero_sum(a, -b, dir),
            // the sign of a zero product or quotient is the XOR in every mode
            Op::Mul | Op::Div => rn,
        },
        (Ordering::Equal, _) => rn,
    }
}

/// IEEE 754 sign of an exact zero sum: `-0` only for `(-0) + (-0)` or under
/// rounding toward negative infinity.
fn exact_zero_sum(a: f64, b: f64, dir: Direction) -> f64 {
    let neg_a = a.is_sign_negative() && a == 0.0;
    let neg_b = b.is_sign_negative() && b == 0.0;
    let pos_a = a.is_sign_positive() && a == 0.0;
    let pos_b = b.is_sign_positive() && b == 0.0;
    if neg_a && neg_b {
        -0.0
    } else if pos_a && pos_b {
        0.0
    } else if dir == Direction::Down {
        -0.0
    } else {
        0.0
    }
}

/// Sign of `(a + b) - RN(a + b)` for finite `a`, `b` with a finite sum.
#[inline]
fn sum_error_sign(a: f64, b: f64) -> Ordering {
    let (_, t) = if a.abs() >= b.abs() {
        fast_two_sum(a, b)
    } else {
        fast_two_sum(b, a)
    };
    t.partial_cmp(&0.0).unwrap_or(Ordering::Equal)
}

/// Sign of `a / b - q` for finite `a`, nonzero finite `b` and `q = RN(a / b)`.
fn quotient_error_sign(a: f64, b: f64, q: f64) -> Ordering {
    if a == 0.0 {
        return Ordering::Equal;
    }
    let b_sign = if b < 0.0 { Ordering::Less } else { Ordering::Greater };
    let with_b_sign = |o: Ordering| if b_sign == Ordering::Less { o.reverse() } else { o };
    // a - q*b is exactly representable unless it falls below the subnormal
    // grid; a nonzero FMA result therefore always carries the right sign.
    let r = (-q).mul_add(b, a);
    if r != 0.0 {
        return with_b_sign(r.partial_cmp(&0.0).unwrap());
    }
    if q == 0.0 {
        // a != 0, so the exact quotient is a nonzero value that underflowed.
        let exact_neg = (a < 0.0) != (b < 0.0);
        return if exact_neg { Ordering::Less } else { Ordering::Greater };
    }
    // Scale a and b into [1, 2) and q by the matching factor; everything is
    // then far from the subnormal range and RN preserves the residual sign.
    let ka = -exponent_of(a);
    let kb = -exponent_of(b);
    let sa = scale2(a, ka);
    let sb = scale2(b, kb);
    let sq = scale2(q, ka - kb);
    let r = (-sq).mul_add(sb, sa);
    with_b_sign(r.partial_cmp(&0.0).unwrap_or(Ordering::Equal))
}
