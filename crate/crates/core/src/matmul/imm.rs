use super::gemm::check_product;
use super::{
    gemm_directed, gemm_ordered, same_order_bound, upper_nonneg_product, FpMatrix,
    IntervalMatrixMR, OrderSpec,
};
use crate::fp::{dir_op, Direction, Op};
use crate::{Error, Result};

fn ru(op: Op, a: f64, b: f64) -> f64 {
    dir_op(op, a, b, Direction::Up).expect("operands are finite or saturate upward")
}

fn check(a: &IntervalMatrixMR, b: &IntervalMatrixMR) -> Result<()> {
    check_product(a.mid(), b.mid())
}

fn finite_mid(mid: FpMatrix) -> Result<FpMatrix> {
    if !mid.is_finite() {
        return Err(Error::Overflow("interval matrix product midpoint"));
    }
    Ok(mid)
}

/// `RU(|A_m| + A_r)`.
fn outer_magnitude(a: &IntervalMatrixMR) -> FpMatrix {
    a.mid().abs().zip_map(a.rad(), |m, r| ru(Op::Add, m, r))
}

/// Midpoint-radius product from four real matrix products.
///
/// The exact midpoint product lies in `[RD(A_m·B_m), RU(A_m·B_m)]`; the result
/// is centered at `RN(A_m·B_m)` with a radius covering that bracket plus
/// `RU((|A_m| + A_r)·B_r + A_r·|B_m|)`.
pub fn imm4(a: &IntervalMatrixMR, b: &IntervalMatrixMR) -> Result<IntervalMatrixMR> {
    check(a, b)?;
    let lower = gemm_directed(a.mid(), b.mid(), Direction::Down)?;
    let upper = gemm_directed(a.mid(), b.mid(), Direction::Up)?;
    let mid = finite_mid(gemm_ordered(a.mid(), b.mid(), OrderSpec::default())?)?;
    let spread = upper
        .zip_map(&mid, |h, c| ru(Op::Sub, h, c))
        .zip_map(&mid.zip_map(&lower, |c, l| ru(Op::Sub, c, l)), f64::max);
    let r1 = upper_nonneg_product(&outer_magnitude(a), b.rad())?;
    let r2 = upper_nonneg_product(a.rad(), &b.mid().abs())?;
    let rad = r1
        .zip_map(&r2, |x, y| ru(Op::Add, x, y))
        .zip_map(&spread, |r, s| ru(Op::Add, s, r));
    Ok(IntervalMatrixMR::from_parts_unchecked(mid, rad))
}

/// Midpoint-radius product from three real matrix products.
///
/// `C = RN(A_m·B_m)` and `Γ = RN(|A_m|·|B_m|)` share `spec`, which bounds the
/// midpoint error by `RN((n+2)u·Γ + η)`. The radius term is the single upper
/// product `[RU(|A_m| + A_r) | A_r] · [B_r ; |B_m|]`.
pub fn imm3(a: &IntervalMatrixMR, b: &IntervalMatrixMR, spec: OrderSpec) -> Result<IntervalMatrixMR> {
    check(a, b)?;
    let n = a.mid().cols();
    let mid = finite_mid(gemm_ordered(a.mid(), b.mid(), spec)?)?;
    let gamma = gemm_ordered(&a.mid().abs(), &b.mid().abs(), spec)?;
    let bound = same_order_bound(&gamma, n)?;
    let left = outer_magnitude(a).hstack(a.rad())?;
    let right = b.rad().vstack(&b.mid().abs())?;
    let r = upper_nonneg_product(&left, &right)?;
    let rad = bound.zip_map(&r, |e, r| ru(Op::Add, e, r));
    Ok(IntervalMatrixMR::from_parts_unchecked(mid, rad))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fp::BINARY64;
    use crate::interval::EndpointInterval;

    fn scalar(m: f64, r: f64) -> IntervalMatrixMR {
        IntervalMatrixMR::new(
            FpMatrix::new(1, 1, vec![m]).unwrap(),
            FpMatrix::new(1, 1, vec![r]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn scalar_products_enclose() {
        let a = scalar(2.0, 1.0);
        let b = scalar(3.0, 1.0);
        let exact = EndpointInterval::new(2.0, 12.0).unwrap();
        for c in [imm4(&a, &b).unwrap(), imm3(&a, &b, OrderSpec::default()).unwrap()] {
            assert!(c.endpoints(0, 0).encloses(&exact), "{:?}", c.endpoints(0, 0));
        }
        let c4 = imm4(&a, &b).unwrap();
        // <6; 2·1 + 1·1 + 1·3> = <6; 6> = [0, 12]
        assert_eq!(c4.mid().get(0, 0), 6.0);
        assert_eq!(c4.rad().get(0, 0), 6.0);
    }

    #[test]
    fn point_integer_matrices() {
        let a = IntervalMatrixMR::point(FpMatrix::new(2, 2, vec![1.0, 2.0, 3.0, 4.0]).unwrap());
        let c4 = imm4(&a, &a).unwrap();
        assert_eq!(c4.mid().as_slice(), &[7.0, 10.0, 15.0, 22.0]);
        assert!(c4.rad().as_slice().iter().all(|&r| r == 0.0));
        let c3 = imm3(&scalar(2.0, 0.0), &scalar(3.0, 0.0), OrderSpec::default()).unwrap();
        assert_eq!(c3.mid().get(0, 0), 6.0);
        assert_eq!(c3.rad().get(0, 0), 3.0 * BINARY64.u * 6.0 + BINARY64.eta);
    }

    #[test]
    fn shape_errors() {
        let a = IntervalMatrixMR::point(FpMatrix::zeros(2, 3).unwrap());
        assert!(imm4(&a, &a).is_err());
        assert!(imm3(&a, &a, OrderSpec::default()).is_err());
    }

    #[test]
    fn overflow_is_reported() {
        let a = scalar(f64::MAX, 0.0);
        assert!(matches!(imm4(&a, &a), Err(Error::Overflow(_))));
    }
}
