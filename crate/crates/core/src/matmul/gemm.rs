use rayon::prelude::*;

use super::FpMatrix;
use crate::fp::{dir_op, Direction, Op};
use crate::{Error, Result};

/// Nesting of the `i`, `j`, `k` loops inside a block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LoopOrder {
    Ijk,
    Ikj,
    Jik,
    Jki,
    Kij,
    Kji,
}

impl LoopOrder {
    pub const ALL: [LoopOrder; 6] = [
        LoopOrder::Ijk,
        LoopOrder::Ikj,
        LoopOrder::Jik,
        LoopOrder::Jki,
        LoopOrder::Kij,
        LoopOrder::Kji,
    ];
}

/// Accumulation order of [`gemm_ordered`].
///
/// Each output entry is the sum, in ascending block order, of per-block
/// partial sums taken left to right over `k`. Every loop nesting visits `k` in
/// ascending order for a fixed `(i, j)`, so the loop order changes traversal
/// only; the block size changes the numerical result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OrderSpec {
    pub loop_order: LoopOrder,
    pub block: usize,
}

impl Default for OrderSpec {
    fn default() -> Self {
        OrderSpec {
            loop_order: LoopOrder::Ikj,
            block: 32,
        }
    }
}

impl OrderSpec {
    pub fn new(loop_order: LoopOrder, block: usize) -> Result<Self> {
        if block == 0 {
            return Err(Error::Plan("block size must be positive".into()));
        }
        Ok(OrderSpec { loop_order, block })
    }
}

pub(crate) fn check_product(a: &FpMatrix, b: &FpMatrix) -> Result<()> {
    if a.cols() != b.rows() {
        return Err(Error::Dimension(format!(
            "cannot multiply {}x{} by {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    Ok(())
}

/// Computes rows `i0..i0+out.len()/n` of `A·B` into `out`.
fn gemm_rows(a: &FpMatrix, b: &FpMatrix, spec: OrderSpec, i0: usize, out: &mut [f64]) {
    let n = b.cols();
    let inner = a.cols();
    let rows = out.len() / n;
    let bs = spec.block;
    let mut partial = vec![0.0; out.len()];
    for k0 in (0..inner).step_by(bs) {
        let k1 = (k0 + bs).min(inner);
        partial.iter_mut().for_each(|v| *v = 0.0);
        for j0 in (0..n).step_by(bs) {
            let j1 = (j0 + bs).min(n);
            let mut body = |i: usize, j: usize, k: usize| {
                partial[i * n + j] += a.get(i0 + i, k) * b.get(k, j);
            };
            match spec.loop_order {
                LoopOrder::Ijk => {
                    for i in 0..rows {
                        for j in j0..j1 {
                            for k in k0..k1 {
                                body(i, j, k);
                            }
                        }
                    }
                }
                LoopOrder::Ikj => {
                    for i in 0..rows {
                        for k in k0..k1 {
                            for j in j0..j1 {
                                body(i, j, k);
                            }
                        }
                    }
                }
                LoopOrder::Jik => {
                    for j in j0..j1 {
                        for i in 0..rows {
                            for k in k0..k1 {
                                body(i, j, k);
                            }
                        }
                    }
                }
                LoopOrder::Jki => {
                    for j in j0..j1 {
                        for k in k0..k1 {
                            for i in 0..rows {
                                body(i, j, k);
                            }
                        }
                    }
                }
                LoopOrder::Kij => {
                    for k in k0..k1 {
                        for i in 0..rows {
                            for j in j0..j1 {
                                body(i, j, k);
                            }
                        }
                    }
                }
                LoopOrder::Kji => {
                    for k in k0..k1 {
                        for j in j0..j1 {
                            for i in 0..rows {
                                body(i, j, k);
                            }
                        }
                    }
                }
            }
        }
        if k0 == 0 {
            out.copy_from_slice(&partial);
        } else {
            out.iter_mut().zip(&partial).for_each(|(c, p)| *c += p);
        }
    }
}

fn gemm_parallel(a: &FpMatrix, b: &FpMatrix, spec: OrderSpec) -> FpMatrix {
    let n = b.cols();
    let mut out = vec![0.0; a.rows() * n];
    out.par_chunks_mut(spec.block * n)
        .enumerate()
        .for_each(|(blk, chunk)| gemm_rows(a, b, spec, blk * spec.block, chunk));
    FpMatrix::from_raw(a.rows(), n, out)
}

/// Round-to-nearest `A·B` in the order fixed by `spec`, parallel over row
/// blocks on the global thread pool. Overflow yields infinite entries.
pub fn gemm_ordered(a: &FpMatrix, b: &FpMatrix, spec: OrderSpec) -> Result<FpMatrix> {
    check_product(a, b)?;
    Ok(gemm_parallel(a, b, spec))
}

/// As [`gemm_ordered`] on a dedicated pool of `workers` threads.
pub fn gemm_ordered_with_workers(
    a: &FpMatrix,
    b: &FpMatrix,
    spec: OrderSpec,
    workers: usize,
) -> Result<FpMatrix> {
    check_product(a, b)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Plan(format!("thread pool: {e}")))?;
    Ok(pool.install(|| gemm_parallel(a, b, spec)))
}

/// `A·B` with every product and sum rounded toward `dir`, `k` ascending.
/// The result is a lower (`Down`) or upper (`Up`) bound on the exact product.
pub fn gemm_directed(a: &FpMatrix, b: &FpMatrix, dir: Direction) -> Result<FpMatrix> {
    check_product(a, b)?;
    let n = b.cols();
    let mut out = vec![0.0; a.rows() * n];
    out.par_chunks_mut(n).enumerate().try_for_each(|(i, row)| {
        for (j, c) in row.iter_mut().enumerate() {
            let mut acc = 0.0;
            for k in 0..a.cols() {
                let p = dir_op(Op::Mul, a.get(i, k), b.get(k, j), dir)?;
                acc = dir_op(Op::Add, acc, p, dir)?;
            }
            *c = acc;
        }
        Ok::<_, Error>(())
    })?;
    Ok(FpMatrix::from_raw(a.rows(), n, out))
}

/// Entrywise upper bound on the exact product of two nonnegative matrices,
/// accumulated with upward rounding in the classical order. Without
/// subtractions, upward rounding of every step can only increase the result.
pub fn upper_nonneg_product(a: &FpMatrix, b: &FpMatrix) -> Result<FpMatrix> {
    if !a.is_nonnegative() || !b.is_nonnegative() {
        return Err(Error::Domain("upper product needs nonnegative matrices"));
    }
    gemm_directed(a, b, Direction::Up)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: usize, cols: usize, data: &[f64]) -> FpMatrix {
        FpMatrix::new(rows, cols, data.to_vec()).unwrap()
    }

    fn sample(rows: usize, cols: usize, seed: u64) -> FpMatrix {
        let mut s = seed;
        FpMatrix::from_fn(rows, cols, |_, _| {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64 - 0.5) * 3.7
        })
        .unwrap()
    }

    #[test]
    fn small_products() {
        let c = gemm_ordered(&m(1, 1, &[2.0]), &m(1, 1, &[3.0]), OrderSpec::default()).unwrap();
        assert_eq!(c.as_slice(), &[6.0]);
        let b = sample(5, 7, 3);
        let id = FpMatrix::identity(5).unwrap();
        for lo in LoopOrder::ALL {
            for block in [1, 2, 32] {
                let spec = OrderSpec::new(lo, block).unwrap();
                assert_eq!(gemm_ordered(&id, &b, spec).unwrap(), b);
            }
        }
        assert!(gemm_ordered(&b, &b, OrderSpec::default()).is_err());
        assert!(OrderSpec::new(LoopOrder::Ijk, 0).is_err());
    }

    #[test]
    fn loop_order_is_traversal_only() {
        let a = sample(9, 13, 1);
        let b = sample(13, 6, 2);
        for block in [1, 3, 4, 32] {
            let reference = gemm_ordered(&a, &b, OrderSpec::new(LoopOrder::Ijk, block).unwrap()).unwrap();
            for lo in LoopOrder::ALL {
                let c = gemm_ordered(&a, &b, OrderSpec::new(lo, block).unwrap()).unwrap();
                assert_eq!(c, reference, "{lo:?} block {block}");
            }
        }
    }

    #[test]
    fn block_size_fixes_the_partial_sums() {
        // ((1 + 0) + e) + e absorbs both tiny terms; (1 + 0) + (e + e) keeps them
        let e = f64::EPSILON / 2.0;
        let a = m(1, 4, &[1.0, 0.0, e, e]);
        let b = m(4, 1, &[1.0; 4]);
        let whole = gemm_ordered(&a, &b, OrderSpec::new(LoopOrder::Ikj, 4).unwrap()).unwrap();
        let halves = gemm_ordered(&a, &b, OrderSpec::new(LoopOrder::Ikj, 2).unwrap()).unwrap();
        assert_eq!(whole.get(0, 0), 1.0);
        assert_eq!(halves.get(0, 0), 1.0 + f64::EPSILON);
    }

    #[test]
    fn workers_do_not_change_bits() {
        let a = sample(70, 40, 5);
        let b = sample(40, 33, 6);
        let spec = OrderSpec::new(LoopOrder::Kij, 8).unwrap();
        let reference = gemm_ordered_with_workers(&a, &b, spec, 1).unwrap();
        for w in [2, 4, 8] {
            assert_eq!(gemm_ordered_with_workers(&a, &b, spec, w).unwrap(), reference);
        }
    }

    #[test]
    fn directed_products_bracket_nearest() {
        let a = sample(6, 6, 11);
        let b = sample(6, 6, 12);
        let lo = gemm_directed(&a, &b, Direction::Down).unwrap();
        let hi = gemm_directed(&a, &b, Direction::Up).unwrap();
        for i in 0..6 {
            for j in 0..6 {
                let exact = crate::fp::exact_dot(a.row(i), &b.column(j)).unwrap();
                assert!(exact.cmp_f64(lo.get(i, j)).is_ge());
                assert!(exact.cmp_f64(hi.get(i, j)).is_le());
            }
        }
    }

    #[test]
    fn upper_product() {
        let ones = FpMatrix::from_fn(3, 3, |_, _| 1.0).unwrap();
        let p = upper_nonneg_product(&ones, &ones).unwrap();
        assert!(p.as_slice().iter().all(|&v| v == 3.0));
        let ints = m(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(upper_nonneg_product(&ints, &ints).unwrap().as_slice(), &[7.0, 10.0, 15.0, 22.0]);
        assert!(matches!(
            upper_nonneg_product(&ints, &ints.map(|v| -v)),
            Err(Error::Domain(_))
        ));
        let a = sample(5, 5, 21).abs();
        let b = sample(5, 5, 22).abs();
        let u = upper_nonneg_product(&a, &b).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                let exact = crate::fp::exact_dot(a.row(i), &b.column(j)).unwrap();
                assert!(exact.cmp_f64(u.get(i, j)).is_le());
            }
        }
    }
}
