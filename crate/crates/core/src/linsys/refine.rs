use super::dd::{compress, grow_expansion, DoubleDouble};
use super::LuFactors;
use crate::matmul::FpMatrix;
use crate::{Error, Result};

fn check_system(a: &FpMatrix, x: &[f64], b: &[f64]) -> Result<()> {
    if a.cols() != x.len() || a.rows() != b.len() {
        return Err(Error::Dimension(format!(
            "{}x{} matrix with x of length {} and b of length {}",
            a.rows(),
            a.cols(),
            x.len(),
            b.len()
        )));
    }
    Ok(())
}

/// Exact terms of `b_i - Σ_j a_ij x_j`: `b_i` and both halves of every
/// error-free product.
pub(crate) fn residual_terms(a: &FpMatrix, x: &[f64], b: &[f64], i: usize) -> Vec<f64> {
    let mut terms = Vec::with_capacity(2 * x.len() + 1);
    terms.push(b[i]);
    for (&aij, &xj) in a.row(i).iter().zip(x) {
        let p = -aij * xj;
        terms.push(p);
        terms.push((-aij).mul_add(xj, -p));
    }
    terms
}

/// `b - A·x` with each component accurate to about 2^-104 relative: the
/// residual is first formed exactly as a floating-point expansion, then
/// rounded to a double-double.
pub fn residual_dd(a: &FpMatrix, x: &[f64], b: &[f64]) -> Result<Vec<DoubleDouble>> {
    check_system(a, x, b)?;
    Ok((0..a.rows())
        .map(|i| compress(&grow_expansion(residual_terms(a, x, b, i))))
        .collect())
}

fn residual_plain(a: &FpMatrix, x: &[f64], b: &[f64]) -> Vec<f64> {
    (0..a.rows())
        .map(|i| {
            let mut s = b[i];
            for (&aij, &xj) in a.row(i).iter().zip(x) {
                s -= aij * xj;
            }
            s
        })
        .collect()
}

/// Precision of the residual in [`refine_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ResidualPrecision {
    /// Working precision; refinement then only improves the backward error.
    Double,
    /// Double-double, which drives the forward error toward one ulp.
    DoubleDouble,
}

/// Result of iterative refinement.
#[derive(Debug, Clone, PartialEq)]
pub struct Refined {
    pub x: Vec<f64>,
    /// Corrections computed. Refinement has no fixed step count, so two runs
    /// with different limits may stop at different iterates.
    pub steps: usize,
}

fn norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// [`refine_with`] using the double-double residual.
pub fn refine(a: &FpMatrix, b: &[f64], x0: &[f64], max_steps: usize) -> Result<Refined> {
    refine_with(a, b, x0, max_steps, ResidualPrecision::DoubleDouble)
}

/// Iterative refinement `x <- RN(x + e)` with `A·e ≈ r` solved by the LU
/// factors of `A`.
///
/// Stops when the correction is zero or at most `2^-53·‖x‖`, when it stops
/// decreasing while already below `2^-26·‖x‖` (that correction is
/// discarded), or after `max_steps`. A
/// correction that grows twice in a row while still large is reported as
/// [`Error::Divergence`] with the iterate that had the smallest correction.
pub fn refine_with(
    a: &FpMatrix,
    b: &[f64],
    x0: &[f64],
    max_steps: usize,
    precision: ResidualPrecision,
) -> Result<Refined> {
    check_system(a, x0, b)?;
    let mut x = x0.to_vec();
    if max_steps == 0 {
        return Ok(Refined { x, steps: 0 });
    }
    let lu = LuFactors::factor(a)?;
    let half_ulp = f64::EPSILON / 2.0;
    let mut prev = f64::INFINITY;
    let mut growths = 0;
    let mut best = (f64::INFINITY, x.clone());
    for step in 1..=max_steps {
        let r: Vec<f64> = match precision {
            ResidualPrecision::DoubleDouble => residual_dd(a, &x, b)?.iter().map(|d| d.to_f64()).collect(),
            ResidualPrecision::Double => residual_plain(a, &x, b),
        };
        let e = lu.solve(&r)?;
        let ne = norm_inf(&e);
        if !ne.is_finite() {
            return Err(Error::Divergence { best: best.1, steps: step });
        }
        let nx = norm_inf(&x);
        if ne >= prev {
            if ne <= 2f64.powi(-26) * nx {
                // corrections are rounding noise; keep the current iterate
                return Ok(Refined { x, steps: step });
            }
            growths += 1;
            if growths >= 2 {
                return Err(Error::Divergence { best: best.1, steps: step });
            }
        } else {
            growths = 0;
        }
        for (xi, ei) in x.iter_mut().zip(&e) {
            *xi += ei;
        }
        if ne < best.0 {
            best = (ne, x.clone());
        }
        if ne == 0.0 || ne <= half_ulp * nx {
            return Ok(Refined { x, steps: step });
        }
        prev = ne;
    }
    Ok(Refined { x, steps: max_steps })
}
