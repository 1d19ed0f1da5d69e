//! Summation kernels from order-dependent to bitwise reproducible.
//!
//! | kernel | reproducible under reordering |
//! |---|---|
//! | [`sum_naive`] | no |
//! | [`sum_kahan`] | no (more accurate, still order dependent) |
//! | [`sum_chunked`] | yes for fixed `(x, K)`, any schedule |
//! | [`sum_prerounded`] | yes for any permutation of `x` |
//! | [`sum_intervals`] | no, but every order encloses the exact sum |

mod chunked;
mod prerounded;

pub use chunked::{sum_chunked, sum_chunked_scheduled, sum_chunked_with_workers, ChunkedPlan};
pub use prerounded::{max_prerounded_len, sum_prerounded, sum_prerounded_with_workers, SliceSums};

use crate::fp::{two_sum_raw, Direction, Op, RoundingBackend};
use crate::interval::{ep_add, EndpointInterval};
use crate::{Error, Result};

pub(crate) fn check_permutation(order: &[usize], n: usize) -> Result<()> {
    if order.len() != n {
        return Err(Error::Permutation(n));
    }
    let mut seen = vec![false; n];
    for &i in order {
        if i >= n || std::mem::replace(&mut seen[i], true) {
            return Err(Error::Permutation(n));
        }
    }
    Ok(())
}

/// Left-to-right round-to-nearest sum of `x[order[0]], x[order[1]], ...`.
/// The empty sum is `+0`.
pub fn sum_naive(x: &[f64], order: &[usize]) -> Result<f64> {
    check_permutation(order, x.len())?;
    Ok(order
        .iter()
        .map(|&i| x[i])
        .reduce(|acc, v| acc + v)
        .unwrap_or(0.0))
}

/// Left-to-right sum in the given order.
pub fn sum_in_order(x: &[f64]) -> f64 {
    x.iter().copied().reduce(|acc, v| acc + v).unwrap_or(0.0)
}

/// Compensated summation: the exact error of every addition is collected by
/// `two_sum` and added back at the end.
pub fn sum_kahan(x: &[f64]) -> f64 {
    let Some((&first, rest)) = x.split_first() else {
        return 0.0;
    };
    let mut s = first;
    let mut c = 0.0;
    for &v in rest {
        let (t, e) = two_sum_raw(s, v);
        s = t;
        c += e;
    }
    s + c
}

/// Outward-rounded sum of intervals in the given order, using the default
/// software backend.
pub fn sum_intervals(xs: &[EndpointInterval], order: &[usize]) -> Result<EndpointInterval> {
    check_permutation(order, xs.len())?;
    Ok(order
        .iter()
        .map(|&i| xs[i])
        .reduce(ep_add)
        .unwrap_or(EndpointInterval::point(0.0)?))
}

/// As [`sum_intervals`], with endpoint additions delegated to `backend`.
pub fn sum_intervals_with(
    xs: &[EndpointInterval],
    order: &[usize],
    backend: &RoundingBackend,
) -> Result<EndpointInterval> {
    check_permutation(order, xs.len())?;
    let mut it = order.iter().map(|&i| xs[i]);
    let Some(mut acc) = it.next() else {
        return EndpointInterval::point(0.0);
    };
    for v in it {
        let lo = backend.dir_op(Op::Add, acc.lo(), v.lo(), Direction::Down)?;
        let hi = backend.dir_op(Op::Add, acc.hi(), v.hi(), Direction::Up)?;
        acc = EndpointInterval::new(lo, hi)?;
    }
    Ok(acc)
}
