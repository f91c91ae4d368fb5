//! Points, oracle interfaces and the problem definition shared by the
//! objectives, regions and solvers.

use std::fmt;
use std::ops::Deref;
use std::sync::Arc;
use std::time::Duration;

use crate::error::{check_dim, Error, Result};
use crate::regions::FeasibleRegion;

/// A dense, finite decision vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if let Some(index) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self(coords))
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0.0; n])
    }

    pub fn filled(n: usize, value: f64) -> Self {
        Self(vec![value; n])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    /// Dimension check against `n`.
    pub fn expect_dim(&self, n: usize) -> Result<()> {
        check_dim(n, self.dim())
    }
}

impl Deref for Point {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for Point {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Point::new(v)
    }
}

/// First-order oracle for a real function on R^n.
///
/// Implementations must be re-entrant: solvers and the bench harness share
/// objectives across threads.
pub trait Objective: Send + Sync + fmt::Debug {
    fn dim(&self) -> usize;

    fn value(&self, x: &[f64]) -> Result<f64>;

    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>>;

    /// Underlying gradient-oracle calls consumed by one `gradient` call.
    fn gradient_cost(&self) -> u64 {
        1
    }
}

pub type SharedObjective = Arc<dyn Objective>;

/// Structural facts about G and C that select which guarantees apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ObjectiveFlags {
    pub g_monotone: bool,
    pub g_nonneg: bool,
    pub c_monotone: bool,
    pub c_nonneg: bool,
}

/// Oracle-call counters, owned by a single solver run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct OracleCounts {
    pub grad_g: u64,
    pub grad_c: u64,
    pub lmo: u64,
}

/// `F(x) = lambda * G(x) + (1 - lambda) * C(x)` with separate oracles for
/// the DR-submodular part G and the concave part C.
#[derive(Debug, Clone)]
pub struct ObjectivePair {
    pub g: SharedObjective,
    pub c: SharedObjective,
    pub lambda: f64,
    pub flags: ObjectiveFlags,
    pub smoothness: Option<f64>,
}

impl ObjectivePair {
    pub fn new(g: SharedObjective, c: SharedObjective, lambda: f64) -> Result<Self> {
        if g.dim() != c.dim() {
            return Err(Error::DimensionMismatch {
                expected: g.dim(),
                got: c.dim(),
            });
        }
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::Config(format!("lambda {lambda} outside [0, 1]")));
        }
        Ok(Self {
            g,
            c,
            lambda,
            flags: ObjectiveFlags::default(),
            smoothness: None,
        })
    }

    pub fn with_flags(mut self, flags: ObjectiveFlags) -> Self {
        self.flags = flags;
        self
    }

    pub fn with_smoothness(mut self, l: f64) -> Self {
        self.smoothness = Some(l);
        self
    }

    pub fn dim(&self) -> usize {
        self.g.dim()
    }

    /// Weight on G inside F.
    pub fn g_weight(&self) -> f64 {
        self.lambda
    }

    /// Weight on C inside F.
    pub fn c_weight(&self) -> f64 {
        1.0 - self.lambda
    }

    fn check_point(&self, x: &[f64]) -> Result<()> {
        check_dim(self.dim(), x.len())?;
        if let Some(index) = x.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(())
    }

    /// Weighted G part, `lambda * G(x)`.
    pub fn value_g(&self, x: &[f64]) -> Result<f64> {
        self.check_point(x)?;
        if self.lambda == 0.0 {
            return Ok(0.0);
        }
        finite_value("G", self.lambda * self.g.value(x)?)
    }

    /// Weighted C part, `(1 - lambda) * C(x)`.
    pub fn value_c(&self, x: &[f64]) -> Result<f64> {
        self.check_point(x)?;
        if self.lambda == 1.0 {
            return Ok(0.0);
        }
        finite_value("C", self.c_weight() * self.c.value(x)?)
    }

    pub fn value(&self, x: &[f64]) -> Result<f64> {
        Ok(self.value_g(x)? + self.value_c(x)?)
    }

    /// `lambda * grad G(x)`; counts one G-oracle call.
    pub fn gradient_g(&self, x: &[f64], counts: &mut OracleCounts) -> Result<Vec<f64>> {
        self.check_point(x)?;
        counts.grad_g += self.g.gradient_cost();
        let w = self.g_weight();
        let g = self.g.gradient(x)?;
        finite_vec("grad G", g.into_iter().map(|v| w * v).collect())
    }

    /// `(1 - lambda) * grad C(x)`; counts one C-oracle call.
    pub fn gradient_c(&self, x: &[f64], counts: &mut OracleCounts) -> Result<Vec<f64>> {
        self.check_point(x)?;
        counts.grad_c += self.c.gradient_cost();
        let w = self.c_weight();
        let g = self.c.gradient(x)?;
        finite_vec("grad C", g.into_iter().map(|v| w * v).collect())
    }

    /// Gradient of F; increments both gradient counters.
    pub fn gradient(&self, x: &[f64], counts: &mut OracleCounts) -> Result<Vec<f64>> {
        let mut g = self.gradient_g(x, counts)?;
        let c = self.gradient_c(x, counts)?;
        for (gi, ci) in g.iter_mut().zip(c) {
            *gi += ci;
        }
        Ok(g)
    }
}

fn finite_value(what: &str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::OracleFailure(format!("{what} returned {v}")))
    }
}

fn finite_vec(what: &str, v: Vec<f64>) -> Result<Vec<f64>> {
    if let Some(i) = v.iter().position(|c| !c.is_finite()) {
        return Err(Error::OracleFailure(format!(
            "{what} returned {} at index {i}",
            v[i]
        )));
    }
    Ok(v)
}

/// Convenience wrapper: `F(x)` for a checked point.
pub fn evaluate_f(obj: &ObjectivePair, x: &Point) -> Result<f64> {
    obj.value(x)
}

/// Convenience wrapper: `grad F(x)`, counting oracle calls into `counts`.
pub fn gradient_f(obj: &ObjectivePair, x: &Point, counts: &mut OracleCounts) -> Result<Vec<f64>> {
    obj.gradient(x, counts)
}

#[derive(Debug, Clone)]
pub struct ProblemInstance {
    pub objective: ObjectivePair,
    pub region: FeasibleRegion,
}

impl ProblemInstance {
    pub fn new(objective: ObjectivePair, region: FeasibleRegion) -> Result<Self> {
        check_dim(objective.dim(), region.dim())?;
        Ok(Self { objective, region })
    }

    pub fn dimension(&self) -> usize {
        self.objective.dim()
    }
}

/// Trajectory and accounting of one solver run.
#[derive(Debug, Clone)]
pub struct SolverReport {
    pub algorithm: &'static str,
    /// Every recorded iterate, starting point first.
    pub iterates: Vec<Point>,
    /// F at each recorded iterate.
    pub values: Vec<f64>,
    /// The point the algorithm returns.
    pub output: Point,
    pub output_value: f64,
    /// Highest-valued recorded iterate (first one on ties).
    pub best: Point,
    pub best_value: f64,
    pub counts: OracleCounts,
    /// Step parameter after normalization (epsilon, epsilon^2 or a fixed step).
    pub step: f64,
    pub iterations: usize,
    /// Certified error of the concave initializer, for algorithms that use one.
    pub certified_eta: Option<f64>,
    pub elapsed: Duration,
}

impl SolverReport {
    pub(crate) fn from_trajectory(
        algorithm: &'static str,
        iterates: Vec<Point>,
        values: Vec<f64>,
        output_index: Option<usize>,
        counts: OracleCounts,
        step: f64,
        elapsed: Duration,
    ) -> Self {
        assert_eq!(iterates.len(), values.len());
        assert!(!iterates.is_empty());
        let best_index = argmax_first(&values);
        let output_index = output_index.unwrap_or(best_index);
        Self {
            algorithm,
            output: iterates[output_index].clone(),
            output_value: values[output_index],
            best: iterates[best_index].clone(),
            best_value: values[best_index],
            iterations: iterates.len() - 1,
            iterates,
            values,
            counts,
            step,
            certified_eta: None,
            elapsed,
        }
    }

    pub fn grad_calls_g(&self) -> u64 {
        self.counts.grad_g
    }

    pub fn grad_calls_c(&self) -> u64 {
        self.counts.grad_c
    }

    pub fn lmo_calls(&self) -> u64 {
        self.counts.lmo
    }
}

pub(crate) fn argmax_first(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v > values[best] {
            best = i;
        }
    }
    best
}
