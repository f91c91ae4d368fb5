use nalgebra::{DMatrix, DVector};

use crate::error::{check_dim, Error, Result};
use crate::problem::Objective;

/// `C(x) = sum_ij L_ij (1 - (x_i - x_j)^2)`, concave for a non-negative
/// symmetric `L`.
#[derive(Debug, Clone)]
pub struct SimilarityConcave {
    kernel: DMatrix<f64>,
    row_sums: DVector<f64>,
    total: f64,
}

impl SimilarityConcave {
    pub fn new(kernel: DMatrix<f64>) -> Result<Self> {
        if kernel.nrows() != kernel.ncols() {
            return Err(Error::DimensionMismatch {
                expected: kernel.nrows(),
                got: kernel.ncols(),
            });
        }
        let row_sums = DVector::from_iterator(kernel.nrows(), kernel.row_iter().map(|r| r.sum()));
        let total = kernel.sum();
        Ok(Self {
            kernel,
            row_sums,
            total,
        })
    }

    pub fn kernel(&self) -> &DMatrix<f64> {
        &self.kernel
    }
}

impl Objective for SimilarityConcave {
    fn dim(&self) -> usize {
        self.kernel.nrows()
    }

    fn value(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.dim(), x.len())?;
        let xv = DVector::from_column_slice(x);
        // sum_ij L_ij (x_i - x_j)^2 = 2 sum_i r_i x_i^2 - 2 x^T L x
        let quad = xv.dot(&(&self.kernel * &xv));
        let weighted: f64 = self.row_sums.iter().zip(x).map(|(r, xi)| r * xi * xi).sum();
        Ok(self.total - 2.0 * weighted + 2.0 * quad)
    }

    /// `grad_i = -4 sum_j L_ij (x_i - x_j)`.
    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim(), x.len())?;
        let xv = DVector::from_column_slice(x);
        let lx = &self.kernel * &xv;
        Ok((0..self.dim())
            .map(|i| -4.0 * (self.row_sums[i] * x[i] - lx[i]))
            .collect())
    }
}
