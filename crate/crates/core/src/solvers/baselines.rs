//! Classic Frank-Wolfe and projected gradient ascent with a fixed step.

use crate::error::{Error, Result};
use crate::problem::{ProblemInstance, SolverReport};

use super::{fixed_schedule, resolve_start, Algorithm, Recorder, SolverConfig};

/// `y = y + step * (s - y)` with `s = argmax <grad F(y), x>`.
pub fn standard_fw(problem: &ProblemInstance, cfg: &SolverConfig) -> Result<SolverReport> {
    let (iters, step) = fixed_schedule(cfg)?;
    if step > 1.0 {
        return Err(Error::Config(format!("step {step} exceeds 1")));
    }
    let pair = &problem.objective;
    let mut rec = Recorder::new(pair);
    let mut y = resolve_start(problem, cfg)?.into_vec();
    rec.push(&y)?;
    for _ in 0..iters {
        let grad = pair.gradient(&y, &mut rec.counts)?;
        let s = problem.region.lmo(&grad)?;
        rec.counts.lmo += 1;
        for (yi, si) in y.iter_mut().zip(s.vertex.iter()) {
            *yi += step * (si - *yi);
        }
        rec.push(&y)?;
    }
    Ok(rec.finish(Algorithm::StandardFw, Some(iters), step))
}

/// `y = project(y + step * grad F(y))`.
pub fn pga(problem: &ProblemInstance, cfg: &SolverConfig) -> Result<SolverReport> {
    if !problem.region.supports_projection() {
        return Err(Error::UnsupportedRegion(
            "projected gradient ascent needs a box or cardinality region".into(),
        ));
    }
    let (iters, step) = fixed_schedule(cfg)?;
    let pair = &problem.objective;
    let mut rec = Recorder::new(pair);
    let mut y = resolve_start(problem, cfg)?.into_vec();
    rec.push(&y)?;
    for _ in 0..iters {
        let grad = pair.gradient(&y, &mut rec.counts)?;
        let moved: Vec<f64> = y.iter().zip(&grad).map(|(yi, g)| yi + step * g).collect();
        y = problem.region.project(&moved)?.into_vec();
        rec.push(&y)?;
    }
    Ok(rec.finish(Algorithm::Pga, Some(iters), step))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use nalgebra::DMatrix;

    use super::*;
    use crate::objectives::{QuadraticObjective, ZeroObjective};
    use crate::problem::{ObjectivePair, Point};
    use crate::regions::FeasibleRegion;

    /// `C(x) = -sum (x_i - t_i)^2` as a concave-only problem.
    fn concave_bowl(target: &[f64], region: FeasibleRegion) -> ProblemInstance {
        let n = target.len();
        let h = DMatrix::identity(n, n) * -2.0;
        let lin: Vec<f64> = target.iter().map(|t| 2.0 * t).collect();
        let c0 = -target.iter().map(|t| t * t).sum::<f64>();
        let c = QuadraticObjective::new(h, lin, c0).unwrap();
        let pair = ObjectivePair::new(Arc::new(ZeroObjective::new(n)), Arc::new(c), 0.0).unwrap();
        ProblemInstance::new(pair, region).unwrap()
    }

    #[test]
    fn fw_converges_on_interval() {
        let p = concave_bowl(&[0.5], FeasibleRegion::unit_cube(1));
        let r = standard_fw(&p, &SolverConfig::experiment(50)).unwrap();
        assert!(r.output_value.abs() < 1e-3, "{}", r.output_value);
    }

    #[test]
    fn fw_linear_recurrence() {
        let pair = ObjectivePair::new(
            Arc::new(QuadraticObjective::linear(vec![1.0, 2.0], 0.0)),
            Arc::new(ZeroObjective::new(2)),
            1.0,
        )
        .unwrap();
        let p = ProblemInstance::new(pair, FeasibleRegion::unit_cube(2)).unwrap();
        let cfg = SolverConfig::experiment(10);
        let r = standard_fw(&p, &cfg).unwrap();
        for (k, y) in r.iterates.iter().enumerate() {
            let expect = 1.0 - (1.0 - 0.1f64).powi(k as i32);
            assert!((y[0] - expect).abs() < 1e-14 && (y[1] - expect).abs() < 1e-14);
        }
    }

    #[test]
    fn pga_converges_to_interior_optimum() {
        let target = [0.3, 0.7, 0.45];
        let p = concave_bowl(&target, FeasibleRegion::unit_cube(3));
        let cfg = SolverConfig {
            step: Some(0.25),
            ..SolverConfig::experiment(50)
        };
        let r = pga(&p, &cfg).unwrap();
        for (y, t) in r.output.iter().zip(target) {
            assert!((y - t).abs() < 1e-3);
        }
    }

    #[test]
    fn pga_stationary_cases() {
        let p = concave_bowl(&[0.3, 0.6], FeasibleRegion::unit_cube(2));
        let cfg = SolverConfig {
            step: Some(0.0),
            start: Some(Point::new(vec![0.1, 0.9]).unwrap()),
            ..SolverConfig::experiment(5)
        };
        let r = pga(&p, &cfg).unwrap();
        assert!(r.iterates.iter().all(|y| y.as_slice() == [0.1, 0.9]));

        let cfg = SolverConfig {
            start: Some(Point::new(vec![0.3, 0.6]).unwrap()),
            ..SolverConfig::experiment(5)
        };
        let r = pga(&p, &cfg).unwrap();
        assert!(r.iterates.iter().all(|y| y.as_slice() == [0.3, 0.6]));
    }

    #[test]
    fn pga_rejects_polytope() {
        let region = FeasibleRegion::polytope(vec![vec![1.0]], vec![1.0], vec![1.0]).unwrap();
        let p = concave_bowl(&[0.5], region);
        assert!(matches!(
            pga(&p, &SolverConfig::default()),
            Err(Error::UnsupportedRegion(_))
        ));
    }
}
