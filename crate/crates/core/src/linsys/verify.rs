use super::refine::{refine, residual_terms};
use super::{lu_solve_approx, LuFactors};
use crate::fp::{dir_op, exact_sum, Direction, Op, RoundMode};
use crate::interval::{ep_add, ep_mul, EndpointInterval};
use crate::matmul::{gemm_ordered, order_independent_bound, upper_nonneg_product, FpMatrix, OrderSpec};
use crate::{Error, Result};

/// Interval enclosure of the solution of a square system.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifiedSolution {
    /// Componentwise enclosure; the whole real line when not converged.
    pub x: Vec<EndpointInterval>,
    /// Refinement steps spent before verification.
    pub iterations: usize,
    /// True only if the contraction certificate held; then every component of
    /// the exact solution lies in the matching interval of `x`.
    pub converged: bool,
    /// Certified upper bound on `‖I - R·A‖∞`; infinite if not computable.
    pub contraction: f64,
}

fn ru(op: Op, a: f64, b: f64) -> f64 {
    dir_op(op, a, b, Direction::Up).expect("no undefined operation on finite or saturated values")
}

fn rd(op: Op, a: f64, b: f64) -> f64 {
    dir_op(op, a, b, Direction::Down).expect("no undefined operation on finite or saturated values")
}

fn unverified(n: usize, iterations: usize, contraction: f64) -> VerifiedSolution {
    VerifiedSolution {
        x: vec![EndpointInterval::entire(); n],
        iterations,
        converged: false,
        contraction,
    }
}

/// Encloses the solution of `A·x = b` around the approximation `x̃`.
///
/// With `R` the approximate inverse from the LU factors, the error
/// `δ = x* - x̃` satisfies `δ = R·r + (I - R·A)·δ` for the exact residual
/// `r = b - A·x̃`. If `C ≥ |I - R·A|` has `α = ‖C‖∞ < 1`, then
/// `‖δ‖∞ ≤ ‖R·r‖∞ / (1 - α)` and `δ ∈ R·r + C·[-1, 1]·‖δ‖∞`.
pub fn verify_enclosure(a: &FpMatrix, b: &[f64], x_approx: &[f64]) -> Result<VerifiedSolution> {
    let lu = LuFactors::factor(a)?;
    verify_with_factors(a, b, x_approx, &lu, 0)
}

fn verify_with_factors(
    a: &FpMatrix,
    b: &[f64],
    x_approx: &[f64],
    lu: &LuFactors,
    iterations: usize,
) -> Result<VerifiedSolution> {
    let n = a.rows();
    if a.cols() != n || b.len() != n || x_approx.len() != n {
        return Err(Error::Dimension(format!(
            "{}x{} system with b of length {} and x of length {}",
            n,
            a.cols(),
            b.len(),
            x_approx.len()
        )));
    }
    if x_approx.iter().any(|v| !v.is_finite()) {
        return Ok(unverified(n, iterations, f64::INFINITY));
    }
    let r_inv = match lu.inverse() {
        Ok(r) => r,
        Err(_) => return Ok(unverified(n, iterations, f64::INFINITY)),
    };

    // C = RU|I - RN(R·A)| + bound on |RN(R·A) - R·A|, plus the worst case of
    // underflowing products, which the bound leaves out.
    let g = gemm_ordered(&r_inv, a, OrderSpec::default())?;
    let err = order_independent_bound(&r_inv.abs(), &a.abs(), n)?;
    let underflow = n as f64 * f64::from_bits(1);
    let c = FpMatrix::from_fn(n, n, |i, j| {
        let gij = g.get(i, j);
        let d = if i == j { ru(Op::Sub, 1.0, gij).abs().max(ru(Op::Sub, gij, 1.0).abs()) } else { gij.abs() };
        ru(Op::Add, ru(Op::Add, d, err.get(i, j)), underflow)
    });
    let Ok(c) = c else {
        return Ok(unverified(n, iterations, f64::INFINITY));
    };
    let ones = FpMatrix::new(n, 1, vec![1.0; n])?;
    let row_sums = upper_nonneg_product(&c, &ones)?;
    let alpha = row_sums.as_slice().iter().fold(0.0f64, |m, &v| m.max(v));
    if !(alpha < 1.0) {
        return Ok(unverified(n, iterations, alpha));
    }

    // Z ⊇ R·r with r enclosed from its exact value.
    let residual: Vec<EndpointInterval> = (0..n)
        .map(|i| {
            let exact = exact_sum(&residual_terms(a, x_approx, b, i))?;
            EndpointInterval::new(exact.round(RoundMode::Down), exact.round(RoundMode::Up))
        })
        .collect::<Result<_>>()?;
    let z: Vec<EndpointInterval> = (0..n)
        .map(|i| {
            (0..n).fold(EndpointInterval::point(0.0).expect("zero"), |acc, j| {
                let rij = EndpointInterval::point(r_inv.get(i, j)).expect("finite inverse");
                ep_add(acc, ep_mul(rij, residual[j]))
            })
        })
        .collect();

    let z_norm = z.iter().fold(0.0f64, |m, zi| m.max(zi.mag()));
    let y = ru(Op::Div, z_norm, rd(Op::Sub, 1.0, alpha));
    let w = upper_nonneg_product(&c, &FpMatrix::new(n, 1, vec![y; n])?)?;
    let mut x = Vec::with_capacity(n);
    for i in 0..n {
        let lo = rd(Op::Sub, rd(Op::Add, x_approx[i], z[i].lo()), w.get(i, 0));
        let hi = ru(Op::Add, ru(Op::Add, x_approx[i], z[i].hi()), w.get(i, 0));
        if !(lo.is_finite() && hi.is_finite()) {
            return Ok(unverified(n, iterations, alpha));
        }
        x.push(EndpointInterval::new(lo, hi)?);
    }
    Ok(VerifiedSolution {
        x,
        iterations,
        converged: true,
        contraction: alpha,
    })
}

/// Solve, refine and verify: the full pipeline with `max_steps` refinement
/// steps. A diverging refinement continues from its best iterate.
pub fn solve_verified(a: &FpMatrix, b: &[f64], max_steps: usize) -> Result<VerifiedSolution> {
    let (x0, lu) = lu_solve_approx(a, b)?;
    let (x, steps) = match refine(a, b, &x0, max_steps) {
        Ok(r) => (r.x, r.steps),
        Err(Error::Divergence { best, steps }) => (best, steps),
        Err(e) => return Err(e),
    };
    verify_with_factors(a, b, &x, &lu, steps)
}
