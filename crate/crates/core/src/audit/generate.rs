//! Seeded input generators shared by the auditor, the examples and the tests.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fp::exact_sum;
use crate::interval::EndpointInterval;
use crate::matmul::{gemm_ordered, FpMatrix, IntervalMatrixMR, OrderSpec};
use crate::Result;

/// Deterministic generator for stream `stream` of `seed`.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform in `(-1, 1)` scaled by `2^e` with `e` uniform in `exp_range`.
pub fn random_value(rng: &mut impl Rng, exp_range: std::ops::RangeInclusive<i32>) -> f64 {
    let m: f64 = rng.random_range(-1.0..1.0);
    m * 2f64.powi(rng.random_range(exp_range))
}

pub fn random_values(n: usize, rng: &mut impl Rng) -> Vec<f64> {
    (0..n).map(|_| random_value(rng, -20..=20)).collect()
}

/// Sum data with its exact condition number `Σ|x| / |Σx|`.
#[derive(Debug, Clone, PartialEq)]
pub struct IllConditionedSum {
    pub values: Vec<f64>,
    pub condition: f64,
}

/// Pairs `(v, -v + p)` with small perturbations `p` sized so that the exact
/// condition number is roughly `cond`, shuffled. The reported condition is
/// computed exactly.
pub fn ill_conditioned_sum(n: usize, cond: f64, rng: &mut impl Rng) -> Result<IllConditionedSum> {
    let pairs = n / 2;
    let big: Vec<f64> = (0..pairs).map(|_| random_value(rng, 0..=30)).collect();
    let mass: f64 = 2.0 * big.iter().map(|v| v.abs()).sum::<f64>();
    let scale = if pairs == 0 { 0.0 } else { mass / cond.max(1.0) / (pairs as f64).sqrt() };
    let mut values = Vec::with_capacity(n);
    for &v in &big {
        let p: f64 = rng.random_range(-1.0..1.0) * scale;
        values.push(v);
        values.push(-v + p);
    }
    if n % 2 == 1 {
        values.push(rng.random_range(-1.0..1.0) * scale.max(f64::MIN_POSITIVE));
    }
    values.shuffle(rng);
    let condition = exact_condition(&values)?;
    Ok(IllConditionedSum { values, condition })
}

/// `Σ|x| / |Σx|` rounded to nearest, infinite for an exactly zero sum.
pub fn exact_condition(values: &[f64]) -> Result<f64> {
    let total = exact_sum(values)?;
    if total.is_zero() {
        return Ok(f64::INFINITY);
    }
    let abs: Vec<f64> = values.iter().map(|v| v.abs()).collect();
    let ratio = exact_sum(&abs)?.checked_div(&total.abs())?;
    Ok(ratio.round(crate::fp::RoundMode::Nearest))
}

/// Intervals with midpoints from [`random_values`] and radii up to the
/// midpoint magnitude.
pub fn random_intervals(n: usize, rng: &mut impl Rng) -> Vec<EndpointInterval> {
    random_values(n, rng)
        .into_iter()
        .map(|m| {
            let r = m.abs() * rng.random_range(0.0..1.0);
            EndpointInterval::new(m - r, m + r).expect("ordered finite endpoints")
        })
        .collect()
}

pub fn random_matrix(rows: usize, cols: usize, rng: &mut impl Rng) -> Result<FpMatrix> {
    FpMatrix::from_fn(rows, cols, |_, _| random_value(rng, -8..=8))
}

/// Interval matrix whose radii span from zero to `1000·|midpoint|`.
pub fn random_interval_matrix(rows: usize, cols: usize, rng: &mut impl Rng) -> Result<IntervalMatrixMR> {
    let mid = random_matrix(rows, cols, rng)?;
    let rad = FpMatrix::from_fn(rows, cols, |i, j| {
        let m = mid.get(i, j).abs();
        match rng.random_range(0..4) {
            0 => 0.0,
            1 => m * rng.random_range(0.0..1e-12),
            2 => m * rng.random_range(0.0..1.0),
            _ => m * rng.random_range(0.0..1e3),
        }
    })?;
    IntervalMatrixMR::new(mid, rad)
}

/// Approximately orthogonal matrix: a product of `n` random Householder
/// reflections.
fn random_orthogonal(n: usize, rng: &mut impl Rng) -> Result<FpMatrix> {
    let mut q = FpMatrix::identity(n)?;
    for _ in 0..n {
        let v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let vv: f64 = v.iter().map(|x| x * x).sum();
        if vv == 0.0 {
            continue;
        }
        let h = FpMatrix::from_fn(n, n, |i, j| f64::from(u8::from(i == j)) - 2.0 * v[i] * v[j] / vv)?;
        q = gemm_ordered(&h, &q, OrderSpec::default())?;
    }
    Ok(q)
}

/// Square system with singular values spread geometrically from 1 to
/// `1/cond`, so its 2-norm condition number is close to `cond`, and a
/// right-hand side `b = RN(A·x)` for a random `x`.
pub fn random_system(n: usize, cond: f64, rng: &mut impl Rng) -> Result<(FpMatrix, Vec<f64>)> {
    let u = random_orthogonal(n, rng)?;
    let v = random_orthogonal(n, rng)?;
    let sigma: Vec<f64> = (0..n)
        .map(|i| if n == 1 { 1.0 } else { cond.powf(-(i as f64) / (n - 1) as f64) })
        .collect();
    let us = FpMatrix::from_fn(n, n, |i, j| u.get(i, j) * sigma[j])?;
    let a = gemm_ordered(&us, &v.transpose(), OrderSpec::default())?;
    let x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    let b = (0..n)
        .map(|i| a.row(i).iter().zip(&x).map(|(p, q)| p * q).sum())
        .collect();
    Ok((a, b))
}

/// Hilbert matrix `1/(i+j+1)` rounded to nearest.
pub fn hilbert(n: usize) -> Result<FpMatrix> {
    FpMatrix::from_fn(n, n, |i, j| 1.0 / (i + j + 1) as f64)
}
