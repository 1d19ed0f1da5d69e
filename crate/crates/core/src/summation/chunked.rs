use std::ops::Range;

use rayon::prelude::*;

use super::{check_permutation, sum_in_order};
use crate::{Error, Result};

/// Split of `n` summands into `k` contiguous chunks whose sizes differ by at
/// most one; the first `n % k` chunks are the longer ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ChunkedPlan {
    n: usize,
    k: usize,
}

impl ChunkedPlan {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Plan("chunk count must be positive".into()));
        }
        if k > n {
            return Err(Error::Plan(format!("{k} chunks for {n} summands")));
        }
        Ok(ChunkedPlan { n, k })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn chunk(&self, c: usize) -> Range<usize> {
        let base = self.n / self.k;
        let extra = self.n % self.k;
        let start = c * base + c.min(extra);
        let len = base + usize::from(c < extra);
        start..start + len
    }

    pub fn chunks(&self) -> impl Iterator<Item = Range<usize>> + '_ {
        (0..self.k).map(|c| self.chunk(c))
    }

    fn check(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.n {
            return Err(Error::Dimension(format!(
                "plan for {} summands applied to {}",
                self.n,
                x.len()
            )));
        }
        Ok(())
    }
}

fn reduce(partials: &[f64]) -> f64 {
    sum_in_order(partials)
}

/// Sums each chunk left to right, then the chunk sums in chunk order.
pub fn sum_chunked(x: &[f64], plan: &ChunkedPlan) -> Result<f64> {
    plan.check(x)?;
    let partials: Vec<f64> = plan.chunks().map(|r| sum_in_order(&x[r])).collect();
    Ok(reduce(&partials))
}

/// As [`sum_chunked`], evaluating chunks in `completion_order` (a permutation
/// of chunk indices) before the fixed reduction.
pub fn sum_chunked_scheduled(x: &[f64], plan: &ChunkedPlan, completion_order: &[usize]) -> Result<f64> {
    plan.check(x)?;
    check_permutation(completion_order, plan.k)?;
    let mut partials = vec![0.0; plan.k];
    for &c in completion_order {
        partials[c] = sum_in_order(&x[plan.chunk(c)]);
    }
    Ok(reduce(&partials))
}

/// As [`sum_chunked`], with chunks evaluated on a pool of `workers` threads.
pub fn sum_chunked_with_workers(x: &[f64], plan: &ChunkedPlan, workers: usize) -> Result<f64> {
    plan.check(x)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Plan(format!("thread pool: {e}")))?;
    let partials: Vec<f64> = pool.install(|| {
        (0..plan.k)
            .into_par_iter()
            .map(|c| sum_in_order(&x[plan.chunk(c)]))
            .collect()
    });
    Ok(reduce(&partials))
}
