//! Exact-rational reference computations, independent of the library's own
//! exact arithmetic.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use repro_interval::fp::{pred, succ};
use repro_interval::matmul::{FpMatrix, IntervalMatrixMR};

pub fn rat(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite")
}

/// `x <= v` on the extended reals.
fn at_most(x: f64, v: &BigRational) -> bool {
    x == f64::NEG_INFINITY || (x.is_finite() && rat(x) <= *v)
}

/// `x >= v` on the extended reals.
fn at_least(x: f64, v: &BigRational) -> bool {
    x == f64::INFINITY || (x.is_finite() && rat(x) >= *v)
}

/// `lo` is the largest extended float not above `v` and `hi` the smallest
/// not below it.
pub fn is_tight_bracket(lo: f64, hi: f64, v: &BigRational) -> bool {
    at_most(lo, v) && !at_most(succ(lo), v) && at_least(hi, v) && !at_least(pred(hi), v)
}

/// Nearest float to `v`, ties to even, for values inside the normal range.
pub fn nearest(v: &BigRational) -> f64 {
    let guess: f64 = {
        let n = v.numer().to_string().parse::<f64>().unwrap();
        let d = v.denom().to_string().parse::<f64>().unwrap();
        if n.is_finite() && d.is_finite() { n / d } else { 0.0 }
    };
    let mut x = guess;
    while rat(x) > *v {
        x = pred(x);
    }
    while rat(succ(x)) <= *v {
        x = succ(x);
    }
    let (lo, hi) = (x, succ(x));
    if rat(lo) == *v {
        return lo;
    }
    let dl = v - rat(lo);
    let dh = rat(hi) - v;
    match dl.cmp(&dh) {
        std::cmp::Ordering::Less => lo,
        std::cmp::Ordering::Greater => hi,
        std::cmp::Ordering::Equal => {
            if lo.to_bits() & 1 == 0 { lo } else { hi }
        }
    }
}

/// Exact product of two float matrices.
pub fn matmul(a: &FpMatrix, b: &FpMatrix) -> Vec<Vec<BigRational>> {
    (0..a.rows())
        .map(|i| {
            (0..b.cols())
                .map(|j| (0..a.cols()).fold(BigRational::zero(), |s, k| s + rat(a.get(i, k)) * rat(b.get(k, j))))
                .collect()
        })
        .collect()
}

/// Exact hull of the interval dot product for one entry of `A·B`.
pub fn interval_entry(a: &IntervalMatrixMR, b: &IntervalMatrixMR, i: usize, j: usize) -> (BigRational, BigRational) {
    let mut lo = BigRational::zero();
    let mut hi = BigRational::zero();
    for k in 0..a.shape().1 {
        let (am, ar) = (rat(a.mid().get(i, k)), rat(a.rad().get(i, k)));
        let (bm, br) = (rat(b.mid().get(k, j)), rat(b.rad().get(k, j)));
        let xs = [&am - &ar, &am + &ar];
        let ys = [&bm - &br, &bm + &br];
        let ps: Vec<BigRational> = xs.iter().flat_map(|x| ys.iter().map(move |y| x * y)).collect();
        lo += ps.iter().min().unwrap().clone();
        hi += ps.iter().max().unwrap().clone();
    }
    (lo, hi)
}

/// Whether every entry of the mid-rad matrix `c` contains the exact product hull.
pub fn encloses_product(a: &IntervalMatrixMR, b: &IntervalMatrixMR, c: &IntervalMatrixMR) -> bool {
    let (rows, cols) = c.shape();
    (0..rows).all(|i| {
        (0..cols).all(|j| {
            let (lo, hi) = interval_entry(a, b, i, j);
            let (m, r) = (rat(c.mid().get(i, j)), rat(c.rad().get(i, j)));
            &m - &r <= lo && hi <= &m + &r
        })
    })
}

/// Solves `a·x = b` exactly by fraction-free elimination with partial pivoting
/// on nonzero entries. `None` if singular.
pub fn solve(a: &FpMatrix, b: &[f64]) -> Option<Vec<BigRational>> {
    let n = a.rows();
    let mut m: Vec<Vec<BigRational>> = (0..n)
        .map(|i| (0..n).map(|j| rat(a.get(i, j))).chain([rat(b[i])]).collect())
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, p);
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = &m[r][col] / &m[col][col];
                for c in col..=n {
                    let t = &f * &m[col][c];
                    m[r][c] -= t;
                }
            }
        }
    }
    Some((0..n).map(|i| &m[i][n] / &m[i][i]).collect())
}

pub fn abs(x: &BigRational) -> BigRational {
    x.abs()
}

pub fn pow2(e: i32) -> BigRational {
    if e >= 0 {
        BigRational::from_integer(BigInt::from(1) << e as usize)
    } else {
        BigRational::new(BigInt::from(1), BigInt::from(1) << (-e) as usize)
    }
}
