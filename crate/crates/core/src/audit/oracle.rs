//! Exact-arithmetic checks behind the auditor's inclusion verdicts.

use num_rational::BigRational;
use num_traits::Zero;

use crate::fp::{exact_sum, ExactValue};
use crate::interval::EndpointInterval;
use crate::matmul::IntervalMatrixMR;
use crate::{Error, Result};

/// Whether `result` contains the exact sum of the interval set `xs`.
pub fn interval_sum_contained(xs: &[EndpointInterval], result: &EndpointInterval) -> Result<bool> {
    let lo_ok = if xs.iter().any(|x| x.lo().is_infinite()) {
        result.lo() == f64::NEG_INFINITY
    } else {
        let los: Vec<f64> = xs.iter().map(|x| x.lo()).collect();
        result.lo() == f64::NEG_INFINITY || exact_sum(&los)?.cmp_f64(result.lo()).is_ge()
    };
    let hi_ok = if xs.iter().any(|x| x.hi().is_infinite()) {
        result.hi() == f64::INFINITY
    } else {
        let his: Vec<f64> = xs.iter().map(|x| x.hi()).collect();
        result.hi() == f64::INFINITY || exact_sum(&his)?.cmp_f64(result.hi()).is_le()
    };
    Ok(lo_ok && hi_ok)
}

fn exact_bounds(m: f64, r: f64) -> (ExactValue, ExactValue) {
    let m = ExactValue::from(m);
    let r = ExactValue::from(r);
    (&m - &r, &m + &r)
}

/// Exact interval hull of entry `(i, j)` of the product of two interval
/// matrices with finite radii.
pub fn exact_product_entry(a: &IntervalMatrixMR, b: &IntervalMatrixMR, i: usize, j: usize) -> (ExactValue, ExactValue) {
    let mut lo = ExactValue::zero();
    let mut hi = ExactValue::zero();
    for k in 0..a.shape().1 {
        let (al, ah) = exact_bounds(a.mid().get(i, k), a.rad().get(i, k));
        let (bl, bh) = exact_bounds(b.mid().get(k, j), b.rad().get(k, j));
        let products = [&al * &bl, &al * &bh, &ah * &bl, &ah * &bh];
        lo = lo + products.iter().min().expect("four products");
        hi = hi + products.iter().max().expect("four products");
    }
    (lo, hi)
}

/// Whether every entry of `c` contains the exact product of `a` and `b`.
pub fn product_contained(a: &IntervalMatrixMR, b: &IntervalMatrixMR, c: &IntervalMatrixMR) -> bool {
    let (rows, cols) = c.shape();
    (0..rows).all(|i| {
        (0..cols).all(|j| {
            let r = c.rad().get(i, j);
            if r.is_infinite() {
                return true;
            }
            let (lo, hi) = exact_product_entry(a, b, i, j);
            let (cl, ch) = exact_bounds(c.mid().get(i, j), r);
            cl <= lo && hi <= ch
        })
    })
}

/// Exact solution of `A·x = b` by rational Gaussian elimination.
pub fn exact_solve(a: &crate::matmul::FpMatrix, b: &[f64]) -> Result<Vec<ExactValue>> {
    let n = a.rows();
    let to_q = |v: f64| ExactValue::from(v).to_rational();
    let mut m: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = a.row(i).iter().map(|&v| to_q(v)).collect();
            row.push(to_q(b[i]));
            row
        })
        .collect();
    for k in 0..n {
        let p = (k..n).find(|&i| !m[i][k].is_zero()).ok_or(Error::Singular(k))?;
        m.swap(k, p);
        let pivot_row = m[k].clone();
        for row in m.iter_mut().skip(k + 1) {
            if row[k].is_zero() {
                continue;
            }
            let f = &row[k] / &pivot_row[k];
            for (x, y) in row.iter_mut().zip(&pivot_row).skip(k) {
                *x -= &f * y;
            }
        }
    }
    let mut x = vec![BigRational::zero(); n];
    for i in (0..n).rev() {
        let mut s = m[i][n].clone();
        for j in i + 1..n {
            s -= &m[i][j] * &x[j];
        }
        x[i] = s / &m[i][i];
    }
    Ok(x.into_iter().map(ExactValue::from_rational).collect())
}
