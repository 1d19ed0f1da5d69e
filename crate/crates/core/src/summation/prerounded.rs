use rayon::prelude::*;

use super::sum_in_order;
use crate::fp::{dir_op, exponent_of, scale2, Direction, Op};
use crate::{Error, Result};

/// Output of [`sum_prerounded`].
#[derive(Debug, Clone, PartialEq)]
pub struct SliceSums {
    /// Exact sum of the parts extracted in each slice, most significant first.
    pub sums: Vec<f64>,
    /// Power-of-two anchor of each slice; `0` for a slice that found no
    /// remaining mass.
    pub anchors: Vec<f64>,
    /// Round-to-nearest fold of `sums` in slice order.
    pub result: f64,
    /// Upper bound on the magnitude of everything left over after the last
    /// slice. Zero iff the slice sums account for the input exactly.
    pub residual_bound: f64,
}

impl SliceSums {
    pub fn k(&self) -> usize {
        self.sums.len()
    }

    /// True when the slices did not absorb all of the input.
    pub fn has_residual(&self) -> bool {
        self.residual_bound > 0.0
    }
}

/// Headroom bits `L` so that `n` extracted parts add without rounding:
/// `2^(L-1) > n`.
fn headroom(n: usize) -> u32 {
    // ceil(log2(n + 1)) + 1
    (usize::BITS - n.leading_zeros()) + 1
}

/// Longest input for which a slice keeps at least one significant bit.
pub fn max_prerounded_len() -> usize {
    (1usize << 51) - 1
}

fn anchor(max_abs: f64, l: u32) -> Result<f64> {
    let mut e = exponent_of(max_abs);
    if scale2(1.0, e) < max_abs {
        e += 1;
    }
    let s = e + l as i32;
    if s > 1023 {
        return Err(Error::Overflow("pre-rounding anchor exceeds the binary64 range"));
    }
    Ok(scale2(1.0, s))
}

/// Removes from each remainder its part on the grid of `sigma`; returns the
/// exact sum of the removed parts and the largest new remainder magnitude.
fn extract(rem: &mut [f64], sigma: f64) -> (f64, f64) {
    let mut s = 0.0;
    let mut m = 0.0f64;
    for v in rem {
        let q = (sigma + *v) - sigma;
        *v -= q;
        s += q;
        m = m.max(v.abs());
    }
    (s, m)
}

fn validate(x: &[f64], k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::Plan("slice count must be positive".into()));
    }
    if x.len() > max_prerounded_len() {
        return Err(Error::Capacity { n: x.len(), max_n: max_prerounded_len() });
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("non-finite summand"));
    }
    Ok(())
}

fn finish(sums: Vec<f64>, anchors: Vec<f64>, n: usize, max_rem: f64) -> SliceSums {
    let residual_bound = if max_rem == 0.0 {
        0.0
    } else {
        dir_op(Op::Mul, n as f64, max_rem, Direction::Up).expect("finite operands")
    };
    SliceSums {
        result: sum_in_order(&sums),
        sums,
        anchors,
        residual_bound,
    }
}

/// Pre-rounded summation into `k` exact slice sums.
///
/// Slice `j` rounds every remaining summand to the grid of a power-of-two
/// anchor `σ_j = 2^(ceil(log2 max|r|) + L)` via `q = (σ_j + r) - σ_j` and adds
/// the `q` exactly, since `n` of them fit in the significand. The remainders
/// `r - q` feed slice `j+1`. The maximum and every slice sum are independent
/// of summand order, so the whole result is bitwise invariant under any
/// permutation of `x`.
pub fn sum_prerounded(x: &[f64], k: usize) -> Result<SliceSums> {
    validate(x, k)?;
    let l = headroom(x.len());
    let mut rem = x.to_vec();
    let mut max_rem = rem.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut sums = Vec::with_capacity(k);
    let mut anchors = Vec::with_capacity(k);
    for _ in 0..k {
        if max_rem == 0.0 {
            sums.push(0.0);
            anchors.push(0.0);
            continue;
        }
        let sigma = anchor(max_rem, l)?;
        let (s, m) = extract(&mut rem, sigma);
        sums.push(s);
        anchors.push(sigma);
        max_rem = m;
    }
    Ok(finish(sums, anchors, x.len(), max_rem))
}

/// As [`sum_prerounded`], extracting each slice in parallel on `workers`
/// threads. Partial sums of a slice are exact, so they combine in any order.
pub fn sum_prerounded_with_workers(x: &[f64], k: usize, workers: usize) -> Result<SliceSums> {
    validate(x, k)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Plan(format!("thread pool: {e}")))?;
    let l = headroom(x.len());
    let block = x.len().div_ceil(workers.max(1) * 4).max(1024);
    pool.install(|| {
        let mut rem = x.to_vec();
        let mut max_rem = rem.par_iter().map(|v| v.abs()).reduce(|| 0.0, f64::max);
        let mut sums = Vec::with_capacity(k);
        let mut anchors = Vec::with_capacity(k);
        for _ in 0..k {
            if max_rem == 0.0 {
                sums.push(0.0);
                anchors.push(0.0);
                continue;
            }
            let sigma = anchor(max_rem, l)?;
            let (s, m) = rem
                .par_chunks_mut(block)
                .map(|c| extract(c, sigma))
                .reduce(|| (0.0, 0.0), |a, b| (a.0 + b.0, a.1.max(b.1)));
            sums.push(s);
            anchors.push(sigma);
            max_rem = m;
        }
        Ok(finish(sums, anchors, x.len(), max_rem))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fp::exact_sum;

    #[test]
    fn headroom_sizes() {
        assert_eq!(headroom(1), 2);
        assert_eq!(headroom(3), 3);
        assert_eq!(headroom(4), 4);
        assert_eq!(headroom(1000), 11);
        assert_eq!(headroom(max_prerounded_len()), 52);
        assert_eq!(headroom(max_prerounded_len() + 1), 53);
    }

    #[test]
    fn constant_input_is_exact() {
        let s = sum_prerounded(&[1.0; 1000], 1).unwrap();
        assert_eq!(s.sums, vec![1000.0]);
        assert_eq!(s.result, 1000.0);
        assert!(!s.has_residual());
    }

    #[test]
    fn dominant_slice_cancels() {
        let p = 2f64.powi(100);
        let s = sum_prerounded(&[1.0, p, -p], 2).unwrap();
        assert_eq!(s.sums, vec![0.0, 1.0]);
        assert_eq!(s.result, 1.0);
        assert_eq!(s.anchors, vec![2f64.powi(103), 8.0]);
        let one = sum_prerounded(&[1.0, p, -p], 1).unwrap();
        assert_eq!(one.result, 0.0);
        assert_eq!(one.residual_bound, 3.0);
    }

    #[test]
    fn slices_are_exact_and_residual_is_bounded() {
        let x: Vec<f64> = (0..500)
            .map(|i| {
                let v = ((i * 2654435761u64 as usize) % 10007) as f64 / 997.0;
                if i % 2 == 0 { v * 1e12 } else { -v * 1e-7 }
            })
            .collect();
        let exact = exact_sum(&x).unwrap();
        let s = sum_prerounded(&x, 3).unwrap();
        let slices = exact_sum(&s.sums).unwrap();
        let leftover = (&exact - &slices).abs();
        assert!(leftover.cmp_f64(s.residual_bound).is_le());
    }

    #[test]
    fn errors() {
        assert!(matches!(sum_prerounded(&[1.0], 0), Err(Error::Plan(_))));
        assert!(matches!(sum_prerounded(&[f64::NAN], 1), Err(Error::Domain(_))));
        assert!(matches!(sum_prerounded(&[f64::MAX, 1.0], 1), Err(Error::Overflow(_))));
        let empty = sum_prerounded(&[], 2).unwrap();
        assert_eq!(empty.result.to_bits(), 0);
        assert_eq!(empty.sums, vec![0.0, 0.0]);
    }

    #[test]
    fn subnormal_input() {
        let tiny = f64::from_bits(3);
        let s = sum_prerounded(&[tiny, -f64::from_bits(1), tiny], 1).unwrap();
        assert_eq!(s.result, f64::from_bits(5));
        assert!(!s.has_residual());
    }

    #[test]
    fn workers_agree() {
        let x: Vec<f64> = (0..20_000).map(|i| ((i as f64) * 0.618).sin() * 10f64.powi(i % 17 - 8)).collect();
        let reference = sum_prerounded(&x, 2).unwrap();
        for w in [1, 2, 3, 8] {
            assert_eq!(sum_prerounded_with_workers(&x, 2, w).unwrap(), reference);
        }
    }
}
