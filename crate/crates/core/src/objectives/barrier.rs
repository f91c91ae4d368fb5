use crate::error::{check_dim, Error, Result};
use crate::problem::Objective;

/// `C(x) = scale * sum_i log x_i` on the positive orthant.
#[derive(Debug, Clone)]
pub struct LogBarrierConcave {
    n: usize,
    scale: f64,
}

impl LogBarrierConcave {
    pub fn new(n: usize, scale: f64) -> Result<Self> {
        if !(scale >= 0.0 && scale.is_finite()) {
            return Err(Error::Config(format!(
                "log-barrier scale {scale} must be >= 0"
            )));
        }
        Ok(Self { n, scale })
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    fn check(&self, x: &[f64]) -> Result<()> {
        check_dim(self.n, x.len())?;
        if let Some(i) = x.iter().position(|v| *v <= 0.0) {
            return Err(Error::Domain(format!(
                "log barrier needs x > 0, x[{i}] = {}",
                x[i]
            )));
        }
        Ok(())
    }
}

impl Objective for LogBarrierConcave {
    fn dim(&self) -> usize {
        self.n
    }

    fn value(&self, x: &[f64]) -> Result<f64> {
        self.check(x)?;
        Ok(self.scale * x.iter().map(|v| v.ln()).sum::<f64>())
    }

    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check(x)?;
        Ok(x.iter().map(|v| self.scale / v).collect())
    }
}
