use std::fmt;

use crate::interval::{EndpointInterval, MidRadInterval};
use crate::{Error, Result};

/// Dense row-major matrix of finite binary64 values, at least 1×1.
#[derive(Clone, PartialEq)]
pub struct FpMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl FpMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension(format!("empty {rows}x{cols} matrix")));
        }
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("non-finite matrix entry"));
        }
        Ok(FpMatrix { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut f = f;
        let data = (0..rows * cols).map(|t| f(t / cols, t % cols)).collect();
        Self::new(rows, cols, data)
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        Self::new(rows, cols, vec![0.0; rows * cols])
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::from_fn(n, n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    /// Builds without validation; callers guarantee shape and finiteness or
    /// accept that overflowed results carry infinities.
    pub(crate) fn from_raw(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        FpMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> FpMatrix {
        FpMatrix::from_raw(self.rows, self.cols, self.data.iter().map(|&v| f(v)).collect())
    }

    pub fn abs(&self) -> FpMatrix {
        self.map(f64::abs)
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            data.extend((0..self.rows).map(|i| self.get(i, j)));
        }
        FpMatrix::from_raw(self.cols, self.rows, data)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|&v| v >= 0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &FpMatrix) -> Result<FpMatrix> {
        if self.rows != other.rows {
            return Err(Error::Dimension(format!(
                "cannot place {} rows beside {}",
                other.rows, self.rows
            )));
        }
        let mut data = Vec::with_capacity(self.data.len() + other.data.len());
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(other.row(i));
        }
        Ok(FpMatrix::from_raw(self.rows, self.cols + other.cols, data))
    }

    /// `[self ; other]`.
    pub fn vstack(&self, other: &FpMatrix) -> Result<FpMatrix> {
        if self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "cannot stack {} columns under {}",
                other.cols, self.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(FpMatrix::from_raw(self.rows + other.rows, self.cols, data))
    }

    pub(crate) fn zip_map(&self, other: &FpMatrix, f: impl Fn(f64, f64) -> f64) -> FpMatrix {
        debug_assert_eq!(self.shape(), other.shape());
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect();
        FpMatrix::from_raw(self.rows, self.cols, data)
    }
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FpMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// Interval matrix in midpoint-radius form.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalMatrixMR {
    mid: FpMatrix,
    rad: FpMatrix,
}

impl IntervalMatrixMR {
    pub fn new(mid: FpMatrix, rad: FpMatrix) -> Result<Self> {
        if mid.shape() != rad.shape() {
            return Err(Error::Dimension(format!(
                "midpoints {:?} vs radii {:?}",
                mid.shape(),
                rad.shape()
            )));
        }
        if !rad.is_nonnegative() {
            return Err(Error::Domain("negative radius"));
        }
        Ok(IntervalMatrixMR { mid, rad })
    }

    /// Radius-zero interval matrix.
    pub fn point(mid: FpMatrix) -> Self {
        let rad = FpMatrix::from_raw(mid.rows, mid.cols, vec![0.0; mid.data.len()]);
        IntervalMatrixMR { mid, rad }
    }

    pub(crate) fn from_parts_unchecked(mid: FpMatrix, rad: FpMatrix) -> Self {
        IntervalMatrixMR { mid, rad }
    }

    pub fn mid(&self) -> &FpMatrix {
        &self.mid
    }

    pub fn rad(&self) -> &FpMatrix {
        &self.rad
    }

    pub fn shape(&self) -> (usize, usize) {
        self.mid.shape()
    }

    pub fn entry(&self, i: usize, j: usize) -> MidRadInterval {
        MidRadInterval::new(self.mid.get(i, j), self.rad.get(i, j))
            .expect("radii are validated nonnegative")
    }

    /// Entry `(i, j)` as an outward-rounded endpoint interval.
    pub fn endpoints(&self, i: usize, j: usize) -> EndpointInterval {
        self.entry(i, j).to_endpoints()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_and_shape() {
        assert!(FpMatrix::new(0, 2, vec![]).is_err());
        assert!(FpMatrix::new(2, 2, vec![1.0; 3]).is_err());
        assert!(FpMatrix::new(1, 1, vec![f64::INFINITY]).is_err());
        let m = FpMatrix::from_fn(2, 3, |i, j| (i * 3 + j) as f64).unwrap();
        assert_eq!(m.row(1), &[3.0, 4.0, 5.0]);
        assert_eq!(m.transpose().get(2, 1), 5.0);
        assert_eq!(m.column(2), vec![2.0, 5.0]);
        let h = m.hstack(&m).unwrap();
        assert_eq!(h.shape(), (2, 6));
        assert_eq!(h.row(0), &[0.0, 1.0, 2.0, 0.0, 1.0, 2.0]);
        let v = m.vstack(&m).unwrap();
        assert_eq!(v.shape(), (4, 3));
        assert!(m.hstack(&v).is_err());
    }

    #[test]
    fn interval_matrix_validation() {
        let one = FpMatrix::identity(2).unwrap();
        let neg = one.map(|v| -v);
        assert!(IntervalMatrixMR::new(one.clone(), neg).is_err());
        assert!(IntervalMatrixMR::new(one.clone(), FpMatrix::zeros(1, 2).unwrap()).is_err());
        let x = IntervalMatrixMR::new(one.clone(), one).unwrap();
        assert_eq!(x.endpoints(0, 0), EndpointInterval::new(0.0, 2.0).unwrap());
    }
}
