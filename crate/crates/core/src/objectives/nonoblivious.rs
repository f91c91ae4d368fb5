use crate::error::{Error, Result};
use crate::problem::{Objective, SharedObjective};

/// `beta(eps) = e (1 - ln eps)`, the bound on `Gbar / G` for monotone G.
pub fn beta(epsilon: f64) -> f64 {
    std::f64::consts::E * (1.0 - epsilon.ln())
}

/// Number of terms `1/eps` after rounding `eps` down to the nearest
/// reciprocal of an integer.
pub(crate) fn reciprocal_steps(epsilon: f64) -> Result<usize> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Config(format!("epsilon {epsilon} outside (0, 1)")));
    }
    // guard against 1/0.2 = 5.000000000000001
    Ok((1.0 / epsilon - 1e-9).ceil().max(1.0) as usize)
}

/// Non-oblivious surrogate of a monotone G:
///
/// `Gbar(x) = eps * sum_{j=1}^{1/eps} e^{eps j} G(eps j x) / (eps j)`.
///
/// Its gradient `eps * sum_j e^{eps j} grad G(eps j x)` costs `1/eps` calls
/// to the inner gradient oracle.
#[derive(Debug, Clone)]
pub struct NonObliviousWrapper {
    inner: SharedObjective,
    epsilon: f64,
    terms: usize,
}

impl NonObliviousWrapper {
    /// `epsilon` is rounded down into `[epsilon/2, epsilon]` so that
    /// `1/epsilon` is an integer.
    pub fn new(inner: SharedObjective, epsilon: f64) -> Result<Self> {
        let terms = reciprocal_steps(epsilon)?;
        Ok(Self {
            inner,
            epsilon: 1.0 / terms as f64,
            terms,
        })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn terms(&self) -> usize {
        self.terms
    }

    fn scaled(x: &[f64], t: f64) -> Vec<f64> {
        x.iter().map(|v| t * v).collect()
    }
}

impl Objective for NonObliviousWrapper {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn value(&self, x: &[f64]) -> Result<f64> {
        let mut total = 0.0;
        for j in 1..=self.terms {
            let t = self.epsilon * j as f64;
            total += t.exp() * self.inner.value(&Self::scaled(x, t))? / t;
        }
        Ok(self.epsilon * total)
    }

    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut grad = vec![0.0; x.len()];
        for j in 1..=self.terms {
            let t = self.epsilon * j as f64;
            let w = self.epsilon * t.exp();
            for (g, d) in grad
                .iter_mut()
                .zip(self.inner.gradient(&Self::scaled(x, t))?)
            {
                *g += w * d;
            }
        }
        Ok(grad)
    }

    fn gradient_cost(&self) -> u64 {
        self.terms as u64 * self.inner.gradient_cost()
    }
}
