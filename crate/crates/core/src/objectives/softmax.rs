use nalgebra::DMatrix;

use crate::error::{check_dim, Error, Result};
use crate::linalg;
use crate::problem::Objective;
use crate::tolerances;

/// Softmax extension of a DPP with kernel `L`:
/// `G(x) = log det(diag(x) (L - I) + I)`.
#[derive(Debug, Clone)]
pub struct SoftmaxExtension {
    kernel: DMatrix<f64>,
    // L - I, cached
    shifted: DMatrix<f64>,
}

impl SoftmaxExtension {
    /// Validates symmetry and PSD-ness (clamping eigenvalues in
    /// `[-1e-9, 0)` to zero).
    pub fn new(kernel: DMatrix<f64>) -> Result<Self> {
        if kernel.nrows() != kernel.ncols() {
            return Err(Error::DimensionMismatch {
                expected: kernel.nrows(),
                got: kernel.ncols(),
            });
        }
        let asym = linalg::asymmetry(&kernel);
        if asym > tolerances::SYMMETRY {
            return Err(Error::Config(format!(
                "kernel is not symmetric (max asymmetry {asym:e})"
            )));
        }
        let kernel = linalg::repair_psd(kernel)?;
        let n = kernel.nrows();
        let shifted = &kernel - DMatrix::<f64>::identity(n, n);
        Ok(Self { kernel, shifted })
    }

    pub fn kernel(&self) -> &DMatrix<f64> {
        &self.kernel
    }

    fn system(&self, x: &[f64]) -> DMatrix<f64> {
        let n = x.len();
        let mut m = self.shifted.clone();
        for (i, xi) in x.iter().enumerate() {
            m.row_mut(i).scale_mut(*xi);
        }
        for i in 0..n {
            m[(i, i)] += 1.0;
        }
        m
    }
}

impl Objective for SoftmaxExtension {
    fn dim(&self) -> usize {
        self.kernel.nrows()
    }

    fn value(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.dim(), x.len())?;
        let (ld, _) = linalg::log_det(self.system(x))?;
        Ok(ld)
    }

    /// `grad_i = [(L - I) M(x)^{-1}]_ii`.
    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim(), x.len())?;
        let (_, lu) = linalg::log_det(self.system(x))?;
        let inv = linalg::inverse(&lu)?;
        let n = self.dim();
        Ok((0..n)
            .map(|i| (0..n).map(|k| self.shifted[(i, k)] * inv[(k, i)]).sum())
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kernel3() -> DMatrix<f64> {
        DMatrix::from_row_slice(3, 3, &[1.0, 0.5, 0.2, 0.5, 1.0, 0.3, 0.2, 0.3, 1.0])
    }

    #[test]
    fn value_at_zero_is_zero() {
        let s = SoftmaxExtension::new(kernel3()).unwrap();
        assert_eq!(s.value(&[0.0; 3]).unwrap(), 0.0);
    }

    #[test]
    fn value_at_ones_is_log_det_kernel() {
        let l = kernel3();
        let s = SoftmaxExtension::new(l.clone()).unwrap();
        let expect = l.determinant().ln();
        assert!((s.value(&[1.0; 3]).unwrap() - expect).abs() < 1e-13);
    }

    #[test]
    fn rejects_non_psd_kernel() {
        let l = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        assert!(SoftmaxExtension::new(l).is_err());
    }
}
