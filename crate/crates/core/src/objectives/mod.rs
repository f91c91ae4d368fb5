//! Concrete DR-submodular and concave objectives with closed-form gradients,
//! plus the seeded instance generators used by the experiments.

mod barrier;
mod doptimal;
mod generators;
mod nonoblivious;
mod quadratic;
mod similarity;
mod softmax;

pub use barrier::LogBarrierConcave;
pub use doptimal::DOptimalObjective;
pub use generators::{
    grid_points, make_doptimal_instance, make_gaussian_kernel, make_qp_instance, DOptimalInstance,
    QpInstance, QP_CONSTANT,
};
pub use nonoblivious::{beta, NonObliviousWrapper};
pub use quadratic::QuadraticObjective;
pub use similarity::SimilarityConcave;
pub use softmax::SoftmaxExtension;

use crate::error::{check_dim, Result};
use crate::problem::{Objective, SharedObjective};

/// The zero function on R^n.
#[derive(Debug, Clone)]
pub struct ZeroObjective {
    n: usize,
}

impl ZeroObjective {
    pub fn new(n: usize) -> Self {
        Self { n }
    }
}

impl Objective for ZeroObjective {
    fn dim(&self) -> usize {
        self.n
    }

    fn value(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.n, x.len())?;
        Ok(0.0)
    }

    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.n, x.len())?;
        Ok(vec![0.0; self.n])
    }
}

/// `x -> inner(x + offset)`. Used to move a shifted box onto one anchored at
/// the origin.
#[derive(Debug, Clone)]
pub struct Shifted {
    inner: SharedObjective,
    offset: Vec<f64>,
}

impl Shifted {
    pub fn new(inner: SharedObjective, offset: Vec<f64>) -> Result<Self> {
        check_dim(inner.dim(), offset.len())?;
        Ok(Self { inner, offset })
    }

    fn shift(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.offset.len(), x.len())?;
        Ok(x.iter().zip(&self.offset).map(|(a, b)| a + b).collect())
    }
}

impl Objective for Shifted {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn value(&self, x: &[f64]) -> Result<f64> {
        self.inner.value(&self.shift(x)?)
    }

    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.inner.gradient(&self.shift(x)?)
    }

    fn gradient_cost(&self) -> u64 {
        self.inner.gradient_cost()
    }
}
