use crate::matmul::FpMatrix;
use crate::{Error, Result};

/// LU factorization `P·A = L·U` with partial pivoting, kept for repeated
/// solves.
#[derive(Debug, Clone, PartialEq)]
pub struct LuFactors {
    n: usize,
    /// `L` strictly below the diagonal (unit diagonal implied), `U` on and above.
    lu: Vec<f64>,
    /// Row `i` of `P·A` is row `perm[i]` of `A`.
    perm: Vec<usize>,
}

impl LuFactors {
    pub fn factor(a: &FpMatrix) -> Result<Self> {
        let n = a.rows();
        if a.cols() != n {
            return Err(Error::Dimension(format!("{}x{} matrix is not square", n, a.cols())));
        }
        let mut lu = a.as_slice().to_vec();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| lu[i * n + k].abs().total_cmp(&lu[j * n + k].abs()))
                .expect("nonempty pivot range");
            if lu[p * n + k] == 0.0 {
                return Err(Error::Singular(k));
            }
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let pivot = lu[k * n + k];
            for i in k + 1..n {
                let l = lu[i * n + k] / pivot;
                lu[i * n + k] = l;
                if l != 0.0 {
                    for j in k + 1..n {
                        lu[i * n + j] -= l * lu[k * n + j];
                    }
                }
            }
        }
        if lu.iter().any(|v| !v.is_finite()) {
            return Err(Error::Overflow("LU factorization"));
        }
        Ok(LuFactors { n, lu, perm })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let n = self.n;
        if b.len() != n {
            return Err(Error::Dimension(format!("right-hand side of length {} for order {n}", b.len())));
        }
        let mut y: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut s = y[i];
            for j in 0..i {
                s -= self.lu[i * n + j] * y[j];
            }
            y[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for j in i + 1..n {
                s -= self.lu[i * n + j] * y[j];
            }
            y[i] = s / self.lu[i * n + i];
        }
        Ok(y)
    }

    /// Approximate inverse, one solve per unit vector.
    pub fn inverse(&self) -> Result<FpMatrix> {
        let n = self.n;
        let mut data = vec![0.0; n * n];
        let mut e = vec![0.0; n];
        for j in 0..n {
            e[j] = 1.0;
            let col = self.solve(&e)?;
            e[j] = 0.0;
            for (i, v) in col.into_iter().enumerate() {
                data[i * n + j] = v;
            }
        }
        FpMatrix::new(n, n, data).map_err(|_| Error::Overflow("approximate inverse"))
    }
}

/// Solves `A·x = b` by LU with partial pivoting; the factors are returned for
/// reuse.
pub fn lu_solve_approx(a: &FpMatrix, b: &[f64]) -> Result<(Vec<f64>, LuFactors)> {
    let f = LuFactors::factor(a)?;
    let x = f.solve(b)?;
    Ok((x, f))
}
