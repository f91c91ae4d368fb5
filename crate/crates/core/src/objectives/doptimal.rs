use nalgebra::DMatrix;

use crate::error::{check_dim, Error, Result};
use crate::linalg;
use crate::problem::Objective;

/// D-optimal design objective `G(x) = log det(sum_i x_i Y_i^T Y_i)`, with the
/// design vectors `Y_i` stored as the rows of `design`.
#[derive(Debug, Clone)]
pub struct DOptimalObjective {
    design: DMatrix<f64>,
}

impl DOptimalObjective {
    pub fn new(design: DMatrix<f64>) -> Result<Self> {
        if design.nrows() == 0 || design.ncols() == 0 {
            return Err(Error::Config("empty design matrix".into()));
        }
        Ok(Self { design })
    }

    /// Rows `Y_i = e_i`, giving `G(x) = sum_i log x_i`.
    pub fn identity(n: usize) -> Self {
        Self {
            design: DMatrix::identity(n, n),
        }
    }

    pub fn design(&self) -> &DMatrix<f64> {
        &self.design
    }

    fn information(&self, x: &[f64]) -> DMatrix<f64> {
        // Y^T diag(x) Y
        let mut weighted = self.design.clone();
        for (i, xi) in x.iter().enumerate() {
            weighted.row_mut(i).scale_mut(*xi);
        }
        self.design.transpose() * weighted
    }
}

impl Objective for DOptimalObjective {
    fn dim(&self) -> usize {
        self.design.nrows()
    }

    fn value(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.dim(), x.len())?;
        Ok(linalg::log_det(self.information(x))?.0)
    }

    /// `grad_i = Y_i S(x)^{-1} Y_i^T`.
    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim(), x.len())?;
        let (_, lu) = linalg::log_det(self.information(x))?;
        let inv = linalg::inverse(&lu)?;
        let yi_inv = &self.design * inv;
        Ok((0..self.dim())
            .map(|i| yi_inv.row(i).dot(&self.design.row(i)))
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_design_is_sum_of_logs() {
        let d = DOptimalObjective::identity(3);
        let x = [1.5, 2.0, 1.25];
        let expect: f64 = x.iter().map(|v: &f64| v.ln()).sum();
        assert!((d.value(&x).unwrap() - expect).abs() < 1e-14);
        let g = d.gradient(&x).unwrap();
        for (gi, xi) in g.iter().zip(x) {
            assert!((gi - 1.0 / xi).abs() < 1e-14);
        }
        assert!(d.value(&[1.0; 3]).unwrap().abs() < 1e-15);
    }

    #[test]
    fn singular_information_is_domain_error() {
        let d = DOptimalObjective::identity(2);
        assert!(matches!(d.value(&[0.0, 1.0]), Err(Error::Domain(_))));
    }
}
