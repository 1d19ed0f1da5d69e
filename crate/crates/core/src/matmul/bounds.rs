use super::gemm::check_product;
use super::{gemm_ordered, FpMatrix, OrderSpec};
use crate::fp::{dir_op, Direction, Op, BINARY64};
use crate::{Error, Result};

fn up(op: Op, a: f64, b: f64) -> f64 {
    dir_op(op, a, b, Direction::Up).expect("finite nonnegative operands")
}

/// `RU((1 + c)^n - 1)` by repeated upward multiplication.
fn growth_factor(c: f64, n: usize) -> Result<f64> {
    let base = 1.0 + c;
    let mut p = 1.0;
    for _ in 0..n {
        p = up(Op::Mul, p, base);
    }
    let g = up(Op::Sub, p, 1.0);
    if g.is_infinite() {
        return Err(Error::Overflow("(1 + cu)^n is not representable"));
    }
    Ok(g)
}

fn generic_bound(abs_a: &FpMatrix, abs_b: &FpMatrix, n: usize, u: f64) -> Result<FpMatrix> {
    check_product(abs_a, abs_b)?;
    if !abs_a.is_nonnegative() || !abs_b.is_nonnegative() {
        return Err(Error::Domain("bound needs entrywise absolute values"));
    }
    if n < abs_a.cols() {
        return Err(Error::Dimension(format!(
            "bound for inner dimension {n} applied to {} terms",
            abs_a.cols()
        )));
    }
    let g = growth_factor(3.0 * u, n)?;
    let widen = 1.0 + 2.0 * u;
    let ah = abs_a.map(|v| widen * v);
    let bh = abs_b.map(|v| widen * v);
    let p = gemm_ordered(&ah, &bh, OrderSpec::default())?;
    Ok(p.map(|v| g * v))
}

/// Entrywise bound on `|RN(A·B) - A·B|` valid for every accumulation order
/// of every dot product, barring underflow:
/// `((1+3u)^n - 1) · ((1+2u)|A| · (1+2u)|B|)`, with `u = 2^-52` and the
/// growth factor rounded up.
pub fn order_independent_bound(abs_a: &FpMatrix, abs_b: &FpMatrix, n: usize) -> Result<FpMatrix> {
    generic_bound(abs_a, abs_b, n, BINARY64.u)
}

/// [`order_independent_bound`] with `u` replaced by `2u`, which bounds the
/// error of a single operation under any rounding mode. Holds for products
/// computed with an unknown ambient rounding mode.
pub fn rounding_free_bound(abs_a: &FpMatrix, abs_b: &FpMatrix, n: usize) -> Result<FpMatrix> {
    generic_bound(abs_a, abs_b, n, 2.0 * BINARY64.u)
}

/// Entrywise `RN((n+2)u·Γ + η)`, the midpoint error bound for a product
/// computed in the same order as `Γ = RN(|A|·|B|)`.
pub fn same_order_bound(gamma: &FpMatrix, n: usize) -> Result<FpMatrix> {
    let t = (n as f64 + 2.0) * BINARY64.u;
    if t >= 1.0 {
        return Err(Error::BoundInvalid(n));
    }
    Ok(gamma.map(|g| t * g + BINARY64.eta))
}
