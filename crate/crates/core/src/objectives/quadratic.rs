use nalgebra::{DMatrix, DVector};

use crate::error::{check_dim, Error, Result};
use crate::linalg;
use crate::problem::Objective;
use crate::tolerances;

/// `q(x) = 1/2 x^T H x + h^T x + c` with symmetric `H`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticObjective {
    h_mat: DMatrix<f64>,
    h_vec: DVector<f64>,
    constant: f64,
}

impl QuadraticObjective {
    pub fn new(h_mat: DMatrix<f64>, h_vec: Vec<f64>, constant: f64) -> Result<Self> {
        let n = h_vec.len();
        if h_mat.nrows() != n || h_mat.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: h_mat.nrows().max(h_mat.ncols()),
            });
        }
        let asym = linalg::asymmetry(&h_mat);
        if asym > tolerances::SYMMETRY {
            return Err(Error::Config(format!(
                "quadratic matrix is not symmetric (max asymmetry {asym:e})"
            )));
        }
        Ok(Self {
            h_mat,
            h_vec: DVector::from_vec(h_vec),
            constant,
        })
    }

    /// Construct and additionally require `H <= 0` entry-wise, which is
    /// exactly DR-submodularity for a quadratic.
    pub fn dr_submodular(h_mat: DMatrix<f64>, h_vec: Vec<f64>, constant: f64) -> Result<Self> {
        let q = Self::new(h_mat, h_vec, constant)?;
        if let Some(v) = q.h_mat.iter().find(|v| **v > 0.0) {
            return Err(Error::Config(format!(
                "DR-submodular quadratic needs H <= 0 entry-wise, found {v}"
            )));
        }
        Ok(q)
    }

    /// `x -> w^T x + c`.
    pub fn linear(w: Vec<f64>, constant: f64) -> Self {
        let n = w.len();
        Self {
            h_mat: DMatrix::zeros(n, n),
            h_vec: DVector::from_vec(w),
            constant,
        }
    }

    pub fn hessian(&self) -> &DMatrix<f64> {
        &self.h_mat
    }

    pub fn linear_term(&self) -> &[f64] {
        self.h_vec.as_slice()
    }

    pub fn constant(&self) -> f64 {
        self.constant
    }

    pub fn is_dr_submodular(&self) -> bool {
        self.h_mat.iter().all(|v| *v <= 0.0)
    }
}

impl Objective for QuadraticObjective {
    fn dim(&self) -> usize {
        self.h_vec.len()
    }

    fn value(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.dim(), x.len())?;
        let xv = DVector::from_column_slice(x);
        let hx = &self.h_mat * &xv;
        Ok(0.5 * xv.dot(&hx) + self.h_vec.dot(&xv) + self.constant)
    }

    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim(), x.len())?;
        let xv = DVector::from_column_slice(x);
        Ok((&self.h_mat * xv + &self.h_vec).data.into())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_case() {
        let q = QuadraticObjective::new(DMatrix::zeros(2, 2), vec![1.0, 2.0], 0.0).unwrap();
        assert_eq!(q.value(&[1.0, 1.0]).unwrap(), 3.0);
        assert_eq!(q.gradient(&[1.0, 1.0]).unwrap(), vec![1.0, 2.0]);
    }

    #[test]
    fn diagonal_case() {
        let h = DMatrix::from_row_slice(2, 2, &[-2.0, 0.0, 0.0, -2.0]);
        let q = QuadraticObjective::new(h, vec![0.0, 0.0], 0.0).unwrap();
        assert_eq!(q.value(&[1.0, 1.0]).unwrap(), -2.0);
        assert_eq!(q.gradient(&[1.0, 1.0]).unwrap(), vec![-2.0, -2.0]);
    }

    #[test]
    fn rejects_asymmetric_and_positive_entries() {
        let h = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(QuadraticObjective::new(h, vec![0.0, 0.0], 0.0).is_err());
        let h = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        assert!(QuadraticObjective::dr_submodular(h, vec![0.0, 0.0], 0.0).is_err());
    }

    #[test]
    fn dimension_mismatch() {
        let q = QuadraticObjective::linear(vec![1.0, 2.0], 0.0);
        assert!(matches!(
            q.value(&[1.0]),
            Err(Error::DimensionMismatch {
                expected: 2,
                got: 1
            })
        ));
    }
}
