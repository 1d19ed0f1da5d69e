use crate::fp::{two_sum_raw, ExactValue};

/// Unevaluated sum `hi + lo` with `hi = RN(hi + lo)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

impl DoubleDouble {
    pub const ZERO: DoubleDouble = DoubleDouble { hi: 0.0, lo: 0.0 };

    /// Normalizes an arbitrary pair.
    pub fn from_sum(a: f64, b: f64) -> Self {
        let (hi, lo) = two_sum_raw(a, b);
        DoubleDouble { hi, lo }
    }

    /// Nearest binary64 value.
    pub fn to_f64(self) -> f64 {
        self.hi
    }

    pub fn to_exact(self) -> ExactValue {
        ExactValue::from(self.hi) + ExactValue::from(self.lo)
    }

    /// Adds a binary64 term, keeping about 106 bits.
    pub fn add_f64(self, x: f64) -> Self {
        let (s, e) = two_sum_raw(self.hi, x);
        Self::from_sum(s, e + self.lo)
    }
}

/// Exact sum of `terms` as a nonoverlapping expansion ordered by increasing
/// magnitude, by repeated error-free accumulation with zero elimination.
pub(crate) fn grow_expansion(terms: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let mut h: Vec<f64> = Vec::new();
    for t in terms {
        let mut q = t;
        let mut next = Vec::with_capacity(h.len() + 1);
        for &hi in &h {
            let (s, e) = two_sum_raw(q, hi);
            if e != 0.0 {
                next.push(e);
            }
            q = s;
        }
        if q != 0.0 {
            next.push(q);
        }
        h = next;
    }
    h
}

/// Rounds an expansion (increasing magnitude, nonoverlapping) to a
/// double-double by accumulating from the least significant component.
pub(crate) fn compress(expansion: &[f64]) -> DoubleDouble {
    expansion
        .iter()
        .fold(DoubleDouble::ZERO, |acc, &c| acc.add_f64(c))
}
