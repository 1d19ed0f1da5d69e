//! Reproducibility auditor: runs a kernel many times under permuted inputs,
//! varying worker counts and randomized chunk scheduling, then checks the
//! kernel's contract (bitwise equality where promised, inclusion of the
//! exact result where required).

pub mod generate;
pub mod oracle;
mod report;

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use sha2::{Digest, Sha256};

pub use report::{emit_report, parse_report, ReportFormat, ReproReport, TrialRecord, SCHEMA_VERSION};

use crate::fp::{dir_op, succ, ulp_distance, Direction, Op, RoundingBackend};
use crate::interval::EndpointInterval;
use crate::linsys::solve_verified;
use crate::matmul::{gemm_ordered, imm3, imm4, FpMatrix, IntervalMatrixMR, OrderSpec};
use crate::summation::{
    sum_chunked_scheduled, sum_chunked_with_workers, sum_intervals_with, sum_kahan, sum_naive,
    sum_prerounded, sum_prerounded_with_workers, ChunkedPlan,
};
use crate::{Error, Result};

/// Kernel under audit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kernel {
    SumNaive,
    SumKahan,
    SumChunked,
    SumPrerounded,
    SumIntervals,
    Gemm,
    Imm3,
    Imm4,
    LinSolve,
}

impl Kernel {
    pub const ALL: [Kernel; 9] = [
        Kernel::SumNaive,
        Kernel::SumKahan,
        Kernel::SumChunked,
        Kernel::SumPrerounded,
        Kernel::SumIntervals,
        Kernel::Gemm,
        Kernel::Imm3,
        Kernel::Imm4,
        Kernel::LinSolve,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Kernel::SumNaive => "sum_naive",
            Kernel::SumKahan => "sum_kahan",
            Kernel::SumChunked => "sum_chunked",
            Kernel::SumPrerounded => "sum_prerounded",
            Kernel::SumIntervals => "sum_intervals",
            Kernel::Gemm => "gemm",
            Kernel::Imm3 => "imm3",
            Kernel::Imm4 => "imm4",
            Kernel::LinSolve => "lin_solve",
        }
    }

    /// Whether the kernel's contract includes bitwise-identical output
    /// across the trials of an audit.
    pub fn promises_reproducibility(self) -> bool {
        !matches!(self, Kernel::SumNaive | Kernel::SumKahan | Kernel::SumIntervals)
    }

    /// Whether outputs are intervals that must contain the exact result.
    pub fn checks_inclusion(self) -> bool {
        matches!(self, Kernel::SumIntervals | Kernel::Imm3 | Kernel::Imm4 | Kernel::LinSolve)
    }
}

impl fmt::Display for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kernel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Kernel::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown kernel {s:?}")))
    }
}

/// Where the audited inputs come from.
#[derive(Debug, Clone, PartialEq)]
pub enum InputData {
    /// Drawn from the seed.
    Generated,
    /// Summands for the floating-point sum kernels.
    Values(Vec<f64>),
    /// Summands for the interval sum kernel.
    Intervals(Vec<EndpointInterval>),
}

/// Deliberate breakage used to check that the auditor notices violations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Fault {
    /// Moves every interval result just above its computed upper end, so it
    /// no longer contains the exact result.
    DisplaceIntervals,
    /// Nudges the first output of every odd trial by one ulp.
    Jitter,
}

/// Audit configuration. The seed determines every generated input and every
/// permutation, so equal configurations give equal reports.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialConfig {
    pub kernel: Kernel,
    pub trials: usize,
    pub seed: u64,
    /// Worker counts, used round-robin across trials.
    pub workers: Vec<usize>,
    /// Chunk count for the chunked sum, slice count for the pre-rounded sum.
    pub k: Option<usize>,
    /// Problem size: summands, or matrix order.
    pub n: usize,
    /// Target condition number for generated sums and linear systems.
    pub cond: f64,
    pub input: InputData,
    pub fault: Option<Fault>,
    /// Directed-rounding backend for the interval sum kernel.
    pub backend: RoundingBackend,
}

impl TrialConfig {
    pub fn new(kernel: Kernel, n: usize) -> Self {
        TrialConfig {
            kernel,
            trials: 10,
            seed: 0,
            workers: vec![1, 2, 8],
            k: None,
            n,
            cond: 1e8,
            input: InputData::Generated,
            fault: None,
            backend: RoundingBackend::eft(),
        }
    }
}

struct Outcome {
    values: Vec<f64>,
    inclusion: Option<bool>,
    width: Option<f64>,
}

fn digest(values: &[f64]) -> String {
    let mut h = Sha256::new();
    for v in values {
        h.update(v.to_bits().to_le_bytes());
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

fn factorial(n: usize) -> Option<usize> {
    (1..=n).try_fold(1usize, |acc, k| acc.checked_mul(k))
}

/// `t`-th permutation of `0..n` in lexicographic order.
fn nth_permutation(n: usize, mut t: usize) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..n).collect();
    let mut out = Vec::with_capacity(n);
    for i in (0..n).rev() {
        let f = factorial(i).expect("small n");
        out.push(pool.remove(t / f));
        t %= f;
    }
    out
}

/// Orders cycle through every permutation when there are at least as many
/// trials as permutations, and are random otherwise.
fn order_for_trial(n: usize, trial: usize, trials: usize, rng: &mut impl Rng) -> Vec<usize> {
    match factorial(n) {
        Some(f) if f <= trials => nth_permutation(n, trial % f),
        _ => {
            let mut p: Vec<usize> = (0..n).collect();
            p.shuffle(rng);
            p
        }
    }
}

fn in_pool<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Plan(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

fn displace(x: EndpointInterval) -> EndpointInterval {
    let lo = succ(x.hi());
    EndpointInterval::new(lo, succ(lo)).unwrap_or(x)
}

fn displace_midrad(m: f64, r: f64) -> f64 {
    let far = dir_op(Op::Add, m, 2.0 * r, Direction::Up).unwrap_or(f64::MAX);
    succ(far).min(f64::MAX)
}

fn max_width(xs: &[EndpointInterval]) -> f64 {
    xs.iter().fold(0.0f64, |m, x| m.max(x.width()))
}

enum Prepared {
    Values(Vec<f64>),
    Intervals(Vec<EndpointInterval>),
    Matrices(FpMatrix, FpMatrix),
    IntervalMatrices(IntervalMatrixMR, IntervalMatrixMR),
    System {
        a: FpMatrix,
        b: Vec<f64>,
        exact: Option<Vec<crate::fp::ExactValue>>,
    },
}

fn prepare(cfg: &TrialConfig) -> Result<(Prepared, Option<f64>)> {
    let mut rng = generate::rng_for(cfg.seed, 0);
    let n = cfg.n;
    let wrong_input = || Error::Plan(format!("input data does not fit kernel {}", cfg.kernel));
    Ok(match cfg.kernel {
        Kernel::SumNaive | Kernel::SumKahan | Kernel::SumChunked | Kernel::SumPrerounded => match &cfg.input {
            InputData::Values(v) => (Prepared::Values(v.clone()), generate::exact_condition(v).ok()),
            InputData::Generated => {
                let s = generate::ill_conditioned_sum(n, cfg.cond, &mut rng)?;
                (Prepared::Values(s.values), Some(s.condition))
            }
            InputData::Intervals(_) => return Err(wrong_input()),
        },
        Kernel::SumIntervals => match &cfg.input {
            InputData::Intervals(v) => (Prepared::Intervals(v.clone()), None),
            InputData::Generated => (Prepared::Intervals(generate::random_intervals(n, &mut rng)), None),
            InputData::Values(_) => return Err(wrong_input()),
        },
        _ if cfg.input != InputData::Generated => return Err(wrong_input()),
        Kernel::Gemm => (
            Prepared::Matrices(generate::random_matrix(n, n, &mut rng)?, generate::random_matrix(n, n, &mut rng)?),
            None,
        ),
        Kernel::Imm3 | Kernel::Imm4 => (
            Prepared::IntervalMatrices(
                generate::random_interval_matrix(n, n, &mut rng)?,
                generate::random_interval_matrix(n, n, &mut rng)?,
            ),
            None,
        ),
        Kernel::LinSolve => {
            let (a, b) = generate::random_system(n, cfg.cond, &mut rng)?;
            let exact = oracle::exact_solve(&a, &b).ok();
            (Prepared::System { a, b, exact }, None)
        }
    })
}

fn run_trial(cfg: &TrialConfig, data: &Prepared, trial: usize, workers: usize) -> Result<Outcome> {
    let mut rng = generate::rng_for(cfg.seed, trial as u64 + 1);
    let displace_on = cfg.fault == Some(Fault::DisplaceIntervals);
    let plain = |values: Vec<f64>| Outcome { values, inclusion: None, width: None };
    let out = match (cfg.kernel, data) {
        (Kernel::SumNaive, Prepared::Values(x)) => {
            let order = order_for_trial(x.len(), trial, cfg.trials, &mut rng);
            plain(vec![sum_naive(x, &order)?])
        }
        (Kernel::SumKahan, Prepared::Values(x)) => {
            let order = order_for_trial(x.len(), trial, cfg.trials, &mut rng);
            let permuted: Vec<f64> = order.iter().map(|&i| x[i]).collect();
            plain(vec![sum_kahan(&permuted)])
        }
        (Kernel::SumChunked, Prepared::Values(x)) => {
            let plan = ChunkedPlan::new(x.len(), cfg.k.unwrap_or(x.len().clamp(1, 8)))?;
            let s = if workers <= 1 {
                let mut order: Vec<usize> = (0..plan.k()).collect();
                order.shuffle(&mut rng);
                sum_chunked_scheduled(x, &plan, &order)?
            } else {
                sum_chunked_with_workers(x, &plan, workers)?
            };
            plain(vec![s])
        }
        (Kernel::SumPrerounded, Prepared::Values(x)) => {
            let mut permuted = x.clone();
            permuted.shuffle(&mut rng);
            let k = cfg.k.unwrap_or(2);
            let s = if workers <= 1 {
                sum_prerounded(&permuted, k)?
            } else {
                sum_prerounded_with_workers(&permuted, k, workers)?
            };
            let mut values = vec![s.result];
            values.extend(&s.sums);
            plain(values)
        }
        (Kernel::SumIntervals, Prepared::Intervals(xs)) => {
            let order = order_for_trial(xs.len(), trial, cfg.trials, &mut rng);
            let mut s = sum_intervals_with(xs, &order, &cfg.backend)?;
            if displace_on {
                s = displace(s);
            }
            Outcome {
                values: vec![s.lo(), s.hi()],
                inclusion: Some(oracle::interval_sum_contained(xs, &s)?),
                width: Some(s.width()),
            }
        }
        (Kernel::Gemm, Prepared::Matrices(a, b)) => {
            let c = in_pool(workers, || gemm_ordered(a, b, OrderSpec::default()))??;
            plain(c.into_vec())
        }
        (Kernel::Imm3 | Kernel::Imm4, Prepared::IntervalMatrices(a, b)) => {
            let c = in_pool(workers, || {
                if cfg.kernel == Kernel::Imm3 {
                    imm3(a, b, OrderSpec::default())
                } else {
                    imm4(a, b)
                }
            })??;
            let c = if displace_on {
                let mid = FpMatrix::from_fn(c.shape().0, c.shape().1, |i, j| {
                    displace_midrad(c.mid().get(i, j), c.rad().get(i, j))
                })?;
                IntervalMatrixMR::new(mid, c.rad().clone())?
            } else {
                c
            };
            let width = c.rad().as_slice().iter().fold(0.0f64, |m, &r| m.max(2.0 * r));
            let mut values = c.mid().as_slice().to_vec();
            values.extend_from_slice(c.rad().as_slice());
            Outcome {
                values,
                inclusion: Some(oracle::product_contained(a, b, &c)),
                width: Some(width),
            }
        }
        (Kernel::LinSolve, Prepared::System { a, b, exact }) => {
            let v = in_pool(workers, || solve_verified(a, b, 10))??;
            let xs: Vec<EndpointInterval> = if displace_on && v.converged {
                v.x.iter().map(|&x| displace(x)).collect()
            } else {
                v.x.clone()
            };
            let inclusion = match (v.converged, exact) {
                (true, Some(ex)) => Some(xs.iter().zip(ex).all(|(x, e)| x.contains_exact(e))),
                _ => None,
            };
            let mut values: Vec<f64> = xs.iter().flat_map(|x| [x.lo(), x.hi()]).collect();
            values.push(if v.converged { 1.0 } else { 0.0 });
            Outcome {
                values,
                inclusion,
                width: v.converged.then(|| max_width(&xs)),
            }
        }
        _ => unreachable!("prepare matches kernels to input kinds"),
    };
    Ok(out)
}

/// Runs the audit described by `cfg`.
pub fn run_audit(cfg: &TrialConfig) -> Result<ReproReport> {
    if cfg.workers.is_empty() || cfg.workers.contains(&0) {
        return Err(Error::Plan("worker counts must be positive".into()));
    }
    let (data, condition) = prepare(cfg)?;
    let n = match &data {
        Prepared::Values(v) => v.len(),
        Prepared::Intervals(v) => v.len(),
        _ => cfg.n,
    };
    let mut records = Vec::with_capacity(cfg.trials);
    let mut outputs: Vec<Vec<f64>> = Vec::with_capacity(cfg.trials);
    let mut inclusion: Option<bool> = None;
    for t in 0..cfg.trials {
        let workers = cfg.workers[t % cfg.workers.len()];
        let mut out = run_trial(cfg, &data, t, workers)?;
        if cfg.fault == Some(Fault::Jitter) && t % 2 == 1 {
            out.values[0] = succ(out.values[0]);
        }
        if let Some(ok) = out.inclusion {
            inclusion = Some(inclusion.unwrap_or(true) && ok);
        }
        records.push(TrialRecord {
            trial: t,
            workers,
            digest: digest(&out.values),
            head: out.values[0],
            width: out.width,
            inclusion: out.inclusion,
        });
        outputs.push(out.values);
    }
    let bitwise_reproducible = records.windows(2).all(|w| w[0].digest == w[1].digest);
    let widths: Vec<f64> = records.iter().filter_map(|r| r.width).collect();
    let width_stats = (!widths.is_empty()).then(|| {
        let min = widths.iter().copied().fold(f64::INFINITY, f64::min);
        let max = widths.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mean = widths.iter().sum::<f64>() / widths.len() as f64;
        (min, max, mean)
    });
    Ok(ReproReport {
        schema_version: SCHEMA_VERSION,
        kernel: cfg.kernel,
        n,
        trials: cfg.trials,
        seed: cfg.seed,
        input_condition: condition,
        bitwise_reproducible,
        inclusion_held: inclusion,
        spread_ulps: spread(&outputs),
        width_min: width_stats.map(|s| s.0),
        width_max: width_stats.map(|s| s.1),
        width_mean: width_stats.map(|s| s.2),
        records,
    })
}

/// Largest ulp distance between two trials' outputs at the same position.
fn spread(outputs: &[Vec<f64>]) -> u64 {
    let Some(first) = outputs.first() else { return 0 };
    (0..first.len())
        .map(|i| {
            let (lo, hi) = outputs.iter().map(|o| o[i]).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                (lo.min(v), hi.max(v))
            });
            ulp_distance(lo, hi)
        })
        .max()
        .unwrap_or(0)
}
