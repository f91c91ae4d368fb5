//! Gradient-combining Frank-Wolfe and the concave Frank-Wolfe initializer it
//! starts from.

use crate::error::{Error, Result};
use crate::problem::{Objective, OracleCounts, Point, ProblemInstance, SolverReport};
use crate::regions::FeasibleRegion;
use crate::vecops;

use super::{reciprocal, resolve_start, Algorithm, Recorder, SolverConfig};

/// Output of the concave initializer.
#[derive(Debug, Clone, PartialEq)]
pub struct Initialization {
    pub point: Point,
    /// Frank-Wolfe gap at `point`; bounds `max_P C - C(point)` from above.
    pub eta: f64,
    pub iterations: usize,
}

/// Frank-Wolfe with step `2/(t+2)` on `weight * C`, started at `start`.
///
/// Every visited point gets its duality gap `<grad, s - y>` computed, and the
/// point with the smallest gap is returned together with that gap. Zero
/// iterations return the start with an infinite gap.
pub(crate) fn initialize(
    c: &dyn Objective,
    weight: f64,
    region: &FeasibleRegion,
    iters: usize,
    start: Point,
    eta_target: Option<f64>,
    counts: &mut OracleCounts,
) -> Result<Initialization> {
    if iters == 0 {
        return Ok(Initialization {
            point: start,
            eta: f64::INFINITY,
            iterations: 0,
        });
    }
    let mut y = start.into_vec();
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut done = 0;
    for t in 0..=iters {
        let grad: Vec<f64> = c.gradient(&y)?.into_iter().map(|g| weight * g).collect();
        counts.grad_c += c.gradient_cost();
        let s = region.lmo(&grad)?;
        counts.lmo += 1;
        let gap = (s.objective_value - vecops::dot(&grad, &y)).max(0.0);
        if best.as_ref().is_none_or(|(b, _)| gap < *b) {
            best = Some((gap, y.clone()));
        }
        if t == iters || eta_target.is_some_and(|target| gap <= target) {
            break;
        }
        let gamma = 2.0 / (t as f64 + 2.0);
        for (yi, si) in y.iter_mut().zip(s.vertex.iter()) {
            *yi += gamma * (si - *yi);
        }
        done += 1;
    }
    let (eta, point) = best.expect("at least one gap evaluated");
    Ok(Initialization {
        point: Point::new(point)?,
        eta,
        iterations: done,
    })
}

/// Approximately maximize a concave `C` over `region`, starting from the
/// region's anchor point. Returns the certified point and its gap.
pub fn concave_fw_initializer(
    c: &dyn Objective,
    region: &FeasibleRegion,
    iters: usize,
) -> Result<(Point, f64)> {
    let mut counts = OracleCounts::default();
    let init = initialize(c, 1.0, region, iters, region.anchor(), None, &mut counts)?;
    Ok((init.point, init.eta))
}

/// Gradient-combining Frank-Wolfe.
///
/// Starts from an `eta`-approximate maximizer of C, then takes `eps^-3` steps
/// `y = (1 - eps^2) y + eps^2 s` with `s = argmax <grad G + 2 grad C, x>`, and
/// returns the best iterate. With `cfg.start` set, that point is used as
/// `y(0)` and `eta` is its Frank-Wolfe gap.
pub fn gradient_combining_fw(
    problem: &ProblemInstance,
    cfg: &SolverConfig,
) -> Result<SolverReport> {
    let pair = &problem.objective;
    if cfg.enforce_preconditions && !(pair.flags.g_monotone && pair.flags.g_nonneg) {
        return Err(Error::Config(
            "gradient_combining_fw needs monotone non-negative G".into(),
        ));
    }
    let (iters, step) = match cfg.max_iters {
        Some(k) => (
            k,
            cfg.step.unwrap_or(if k > 0 { 1.0 / k as f64 } else { 0.0 }),
        ),
        None => {
            let k = reciprocal(cfg.epsilon)?;
            (k * k * k, 1.0 / (k * k) as f64)
        }
    };
    if !(0.0..=1.0).contains(&step) {
        return Err(Error::Config(format!("step {step} outside [0, 1]")));
    }

    let mut rec = Recorder::new(pair);
    let init = match &cfg.start {
        Some(_) => {
            let start = resolve_start(problem, cfg)?;
            initialize(
                pair.c.as_ref(),
                pair.c_weight(),
                &problem.region,
                1,
                start,
                Some(f64::INFINITY),
                &mut rec.counts,
            )?
        }
        None => {
            let init_iters = cfg
                .initializer_iters
                .unwrap_or(10 * reciprocal(cfg.epsilon)?);
            initialize(
                pair.c.as_ref(),
                pair.c_weight(),
                &problem.region,
                init_iters,
                problem.region.anchor(),
                cfg.eta_target,
                &mut rec.counts,
            )?
        }
    };
    if !init.eta.is_finite() {
        return Err(Error::Config(
            "concave initializer produced no certified gap".into(),
        ));
    }

    let mut y = init.point.into_vec();
    rec.push(&y)?;
    for _ in 0..iters {
        let mut dir = pair.gradient_g(&y, &mut rec.counts)?;
        let gc = pair.gradient_c(&y, &mut rec.counts)?;
        vecops::axpy(2.0, &gc, &mut dir);
        let s = problem.region.lmo(&dir)?;
        rec.counts.lmo += 1;
        for (yi, si) in y.iter_mut().zip(s.vertex.iter()) {
            *yi = (1.0 - step) * *yi + step * si;
        }
        rec.push(&y)?;
    }
    let mut report = rec.finish(Algorithm::GradientCombiningFw, None, step);
    report.certified_eta = Some(init.eta);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use nalgebra::DMatrix;

    use super::*;
    use crate::objectives::{QuadraticObjective, ZeroObjective};
    use crate::problem::{ObjectiveFlags, ObjectivePair};

    #[test]
    fn linear_c_gap_closes_after_one_step() {
        let c = QuadraticObjective::linear(vec![1.0, -1.0, 2.0], 0.0);
        let (p, eta) = concave_fw_initializer(&c, &FeasibleRegion::unit_cube(3), 1).unwrap();
        assert_eq!(eta, 0.0);
        assert_eq!(p.as_slice(), &[1.0, 0.0, 1.0]);
    }

    #[test]
    fn quadratic_gap_after_hundred_steps() {
        // -||x - 0.5||^2 = -x^T x + x^T 1 - 0.5
        let c =
            QuadraticObjective::new(DMatrix::identity(2, 2) * -2.0, vec![1.0, 1.0], -0.5).unwrap();
        let (p, eta) = concave_fw_initializer(&c, &FeasibleRegion::unit_cube(2), 100).unwrap();
        assert!(eta <= 1e-2, "eta = {eta}");
        // the certificate is honest: optimum value 0
        assert!(0.0 - c.value(&p).unwrap() <= eta + 1e-15);
    }

    #[test]
    fn zero_iterations_refused() {
        let c = ZeroObjective::new(2);
        let (_, eta) = concave_fw_initializer(&c, &FeasibleRegion::unit_cube(2), 0).unwrap();
        assert!(eta.is_infinite());

        let pair = ObjectivePair::new(Arc::new(ZeroObjective::new(2)), Arc::new(c), 0.5)
            .unwrap()
            .with_flags(ObjectiveFlags {
                g_monotone: true,
                g_nonneg: true,
                ..Default::default()
            });
        let p = ProblemInstance::new(pair, FeasibleRegion::unit_cube(2)).unwrap();
        let cfg = SolverConfig {
            initializer_iters: Some(0),
            ..SolverConfig::with_epsilon(0.5)
        };
        assert!(matches!(
            gradient_combining_fw(&p, &cfg),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn zero_g_keeps_initializer_guarantee() {
        let c =
            QuadraticObjective::new(DMatrix::identity(2, 2) * -2.0, vec![1.0, 0.4], 0.0).unwrap();
        let pair = ObjectivePair::new(Arc::new(ZeroObjective::new(2)), Arc::new(c), 0.5)
            .unwrap()
            .with_flags(ObjectiveFlags {
                g_monotone: true,
                g_nonneg: true,
                ..Default::default()
            });
        let p = ProblemInstance::new(pair, FeasibleRegion::unit_cube(2)).unwrap();
        let r = gradient_combining_fw(&p, &SolverConfig::with_epsilon(0.5)).unwrap();
        let eta = r.certified_eta.unwrap();
        // optimum of 0.5 * C at (0.5, 0.2)
        let opt = 0.5 * (0.25 + 0.04);
        assert!(r.best_value >= opt - eta - 1e-12);
        assert_eq!(
            r.best_value,
            r.values.iter().cloned().fold(f64::MIN, f64::max)
        );
    }
}
