use std::fmt;
use std::str::FromStr;

use super::EndpointInterval;
use crate::fp::{dir_op, Direction, Op};
use crate::io::{format_hex, parse_hex};
use crate::{Error, Result};

/// Midpoint-radius interval `<m; r> = {x : |x - m| <= r}`.
///
/// `m` is finite and `r >= 0`; `r = +inf` denotes the whole real line.
#[derive(Clone, Copy, PartialEq)]
pub struct MidRadInterval {
    m: f64,
    r: f64,
}

/// Result of [`EndpointInterval::to_midrad`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MidRadConversion {
    pub interval: MidRadInterval,
    /// The input was unbounded, so the only enclosing midpoint-radius
    /// interval is the whole real line.
    pub widened_to_reals: bool,
}

impl MidRadInterval {
    pub fn new(m: f64, r: f64) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::Domain("midpoint must be finite"));
        }
        if r.is_nan() || r < 0.0 {
            return Err(Error::Domain("radius must be nonnegative"));
        }
        Ok(MidRadInterval { m: m + 0.0, r: r + 0.0 })
    }

    pub fn mid(&self) -> f64 {
        self.m
    }

    pub fn rad(&self) -> f64 {
        self.r
    }

    /// `[RD(m - r), RU(m + r)]`. Rounding can at most double the width
    /// relative to `2r` plus one ulp on each side.
    pub fn to_endpoints(&self) -> EndpointInterval {
        if self.r.is_infinite() {
            return EndpointInterval::entire();
        }
        let lo = dir_op(Op::Sub, self.m, self.r, Direction::Down).expect("finite operands");
        let hi = dir_op(Op::Add, self.m, self.r, Direction::Up).expect("finite operands");
        EndpointInterval::new(lo, hi).expect("ordered endpoints")
    }

    pub fn to_literal(&self) -> String {
        format!("<{};{}>", format_hex(self.m), format_hex(self.r))
    }
}

impl EndpointInterval {
    /// Smallest-radius enclosure around `m = RN(lo/2 + hi/2)`.
    pub fn to_midrad(&self) -> MidRadConversion {
        let m = self.midpoint();
        if !self.is_bounded() {
            return MidRadConversion {
                interval: MidRadInterval { m, r: f64::INFINITY },
                widened_to_reals: true,
            };
        }
        let left = dir_op(Op::Sub, m, self.lo(), Direction::Up).expect("finite operands");
        let right = dir_op(Op::Sub, self.hi(), m, Direction::Up).expect("finite operands");
        MidRadConversion {
            interval: MidRadInterval::new(m, left.max(right)).expect("valid midpoint-radius pair"),
            widened_to_reals: false,
        }
    }
}

impl fmt::Debug for MidRadInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_literal())
    }
}

impl fmt::Display for MidRadInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{:e}; {:e}>", self.m, self.r)
    }
}

impl FromStr for MidRadInterval {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("expected <m;r>, got {s:?}"));
        let inner = s
            .trim()
            .strip_prefix('<')
            .and_then(|s| s.strip_suffix('>'))
            .ok_or_else(bad)?;
        let (m, r) = inner.split_once(';').ok_or_else(bad)?;
        MidRadInterval::new(parse_hex(m)?, parse_hex(r)?)
    }
}
