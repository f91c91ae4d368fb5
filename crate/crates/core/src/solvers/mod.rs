//! Frank-Wolfe variants for `max F = G + C` over a solvable body, plus the
//! classic Frank-Wolfe and projected-gradient baselines.
//!
//! | algorithm                | G                  | C                  | region      | alpha       | beta     |
//! |--------------------------|--------------------|--------------------|-------------|-------------|----------|
//! | greedy_fw                | monotone, non-neg  | monotone, non-neg  | general     | 1 - 1/e     | 1 - 1/e  |
//! | measured_greedy_fw       | non-neg            | non-neg            | down-closed | 1-1/e or 1/e| 1-1/e or 1/e |
//! | gradient_combining_fw    | monotone, non-neg  | any                | general     | (1 - eps)/2 | 1        |
//! | non_oblivious_fw         | monotone, non-neg  | non-neg            | general     | 1-1/e-O(eps ln 1/eps) | 1 - O(eps ln 1/eps) |
//!
//! For the measured variant the coefficient on each part is `1 - 1/e` when
//! that part is monotone and `1/e` otherwise.

mod baselines;
mod combining;
mod greedy;
mod non_oblivious;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

pub use baselines::{pga, standard_fw};
pub use combining::{concave_fw_initializer, gradient_combining_fw, Initialization};
pub use greedy::{greedy_fw, measured_greedy_fw};
pub use non_oblivious::{non_oblivious_fw, nonoblivious_epsilon_for, nonoblivious_iterations};

use crate::error::{Error, Result};
use crate::problem::{ObjectivePair, OracleCounts, Point, ProblemInstance, SolverReport};
use crate::tolerances;

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Quality parameter in (0, 1); rounded down so that `1/epsilon` is an
    /// integer.
    pub epsilon: f64,
    /// Fixed iteration count (experiment mode). Overrides the count implied
    /// by `epsilon`.
    pub max_iters: Option<usize>,
    /// Fixed step size (experiment mode). Defaults to `1 / max_iters` when
    /// `max_iters` is set.
    pub step: Option<f64>,
    /// Stop the concave initializer of `gradient_combining_fw` once its
    /// certified gap falls below this value.
    pub eta_target: Option<f64>,
    /// Iterations of the concave initializer; default `10 / epsilon`.
    pub initializer_iters: Option<usize>,
    /// Epsilon of the non-oblivious surrogate, when it should differ from the
    /// step parameter.
    pub aux_epsilon: Option<f64>,
    pub seed: u64,
    /// Starting point for the algorithms that accept an arbitrary one.
    pub start: Option<Point>,
    /// Reject runs whose objective flags or region do not meet the
    /// algorithm's assumptions. Experiments switch this off.
    pub enforce_preconditions: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            epsilon: 0.1,
            max_iters: None,
            step: None,
            eta_target: None,
            initializer_iters: None,
            aux_epsilon: None,
            seed: 0,
            start: None,
            enforce_preconditions: true,
        }
    }
}

impl SolverConfig {
    pub fn with_epsilon(epsilon: f64) -> Self {
        Self {
            epsilon,
            ..Self::default()
        }
    }

    /// Fixed iteration budget with step `1 / iterations`, no precondition
    /// checks.
    pub fn experiment(iterations: usize) -> Self {
        Self {
            max_iters: Some(iterations),
            enforce_preconditions: false,
            ..Self::default()
        }
    }

    /// `epsilon` rounded down into `[epsilon/2, epsilon]` so that its
    /// reciprocal is an integer (hence also its reciprocal cube).
    pub fn normalized_epsilon(&self) -> Result<f64> {
        Ok(1.0 / reciprocal(self.epsilon)? as f64)
    }
}

pub(crate) fn reciprocal(epsilon: f64) -> Result<usize> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Config(format!("epsilon {epsilon} outside (0, 1)")));
    }
    Ok((1.0 / epsilon - 1e-9).ceil().max(1.0) as usize)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    GreedyFw,
    MeasuredGreedyFw,
    GradientCombiningFw,
    NonObliviousFw,
    StandardFw,
    Pga,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::GreedyFw,
        Algorithm::MeasuredGreedyFw,
        Algorithm::GradientCombiningFw,
        Algorithm::NonObliviousFw,
        Algorithm::StandardFw,
        Algorithm::Pga,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::GreedyFw => "greedy_fw",
            Algorithm::MeasuredGreedyFw => "measured_greedy_fw",
            Algorithm::GradientCombiningFw => "gradient_combining_fw",
            Algorithm::NonObliviousFw => "non_oblivious_fw",
            Algorithm::StandardFw => "standard_fw",
            Algorithm::Pga => "pga",
        }
    }

    /// Whether the algorithm returns the best iterate of its trajectory
    /// rather than the last one.
    pub fn is_best_of(self) -> bool {
        matches!(
            self,
            Algorithm::GradientCombiningFw | Algorithm::NonObliviousFw
        )
    }

    pub fn run(self, problem: &ProblemInstance, cfg: &SolverConfig) -> Result<SolverReport> {
        match self {
            Algorithm::GreedyFw => greedy_fw(problem, cfg),
            Algorithm::MeasuredGreedyFw => measured_greedy_fw(problem, cfg),
            Algorithm::GradientCombiningFw => gradient_combining_fw(problem, cfg),
            Algorithm::NonObliviousFw => non_oblivious_fw(problem, cfg),
            Algorithm::StandardFw => standard_fw(problem, cfg),
            Algorithm::Pga => pga(problem, cfg),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == key)
            .or(match key.as_str() {
                "greedy" | "alg1" => Some(Algorithm::GreedyFw),
                "measured" | "alg2" => Some(Algorithm::MeasuredGreedyFw),
                "combining" | "alg3" => Some(Algorithm::GradientCombiningFw),
                "non_oblivious" | "nonoblivious" | "alg4" => Some(Algorithm::NonObliviousFw),
                "fw" | "frank_wolfe" => Some(Algorithm::StandardFw),
                _ => None,
            })
            .ok_or_else(|| Error::Config(format!("unknown algorithm '{s}'")))
    }
}

/// Records iterates and their F values during a run.
pub(crate) struct Recorder<'a> {
    pair: &'a ObjectivePair,
    iterates: Vec<Point>,
    values: Vec<f64>,
    pub counts: OracleCounts,
    started: Instant,
    offset: Option<Vec<f64>>,
}

impl<'a> Recorder<'a> {
    pub fn new(pair: &'a ObjectivePair) -> Self {
        Self {
            pair,
            iterates: Vec::new(),
            values: Vec::new(),
            counts: OracleCounts::default(),
            started: Instant::now(),
            offset: None,
        }
    }

    /// Report iterates translated back by `offset`.
    pub fn with_offset(mut self, offset: Vec<f64>) -> Self {
        self.offset = Some(offset);
        self
    }

    pub fn push(&mut self, y: &[f64]) -> Result<f64> {
        let v = self.pair.value(y)?;
        let coords = match &self.offset {
            Some(off) => y.iter().zip(off).map(|(a, b)| a + b).collect(),
            None => y.to_vec(),
        };
        self.iterates.push(Point::new(coords)?);
        self.values.push(v);
        Ok(v)
    }

    pub fn finish(
        self,
        algorithm: Algorithm,
        output_index: Option<usize>,
        step: f64,
    ) -> SolverReport {
        let elapsed = self.started.elapsed();
        SolverReport::from_trajectory(
            algorithm.name(),
            self.iterates,
            self.values,
            output_index,
            self.counts,
            step,
            elapsed,
        )
    }
}

pub(crate) fn resolve_start(problem: &ProblemInstance, cfg: &SolverConfig) -> Result<Point> {
    let start = cfg.start.clone().unwrap_or_else(|| problem.region.anchor());
    start.expect_dim(problem.dimension())?;
    if !problem.region.contains(&start, tolerances::MEMBERSHIP) {
        return Err(Error::Config("starting point is not feasible".into()));
    }
    Ok(start)
}

/// Fixed iteration count and step for the baselines: `max_iters` (default
/// `1/epsilon`) and `step` (default `1/max_iters`).
pub(crate) fn fixed_schedule(cfg: &SolverConfig) -> Result<(usize, f64)> {
    let iters = match cfg.max_iters {
        Some(k) => k,
        None => reciprocal(cfg.epsilon)?,
    };
    let step = match cfg.step {
        Some(s) => s,
        None if iters > 0 => 1.0 / iters as f64,
        None => 0.0,
    };
    if !(step >= 0.0 && step.is_finite()) {
        return Err(Error::Config(format!(
            "step {step} must be finite and >= 0"
        )));
    }
    Ok((iters, step))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_algorithm_names() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert_eq!(
            "alg4".parse::<Algorithm>().unwrap(),
            Algorithm::NonObliviousFw
        );
        assert!("nope".parse::<Algorithm>().is_err());
    }

    #[test]
    fn epsilon_normalization() {
        let n = |e| SolverConfig::with_epsilon(e).normalized_epsilon().unwrap();
        assert_eq!(n(0.05), 0.05);
        assert_eq!(n(0.2), 0.2);
        assert_eq!(n(0.3), 0.25);
        assert!(SolverConfig::with_epsilon(1.0)
            .normalized_epsilon()
            .is_err());
        assert!(SolverConfig::with_epsilon(0.0)
            .normalized_epsilon()
            .is_err());
    }
}
