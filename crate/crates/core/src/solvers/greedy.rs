//! Greedy and measured-greedy Frank-Wolfe. Both start at the origin and take
//! `1/epsilon` steps of size `epsilon`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::objectives::Shifted;
use crate::problem::{ObjectivePair, ProblemInstance, SolverReport};
use crate::regions::FeasibleRegion;
use crate::tolerances;

use super::{reciprocal, Algorithm, Recorder, SolverConfig};

/// The problem as seen from the origin: if `0` is infeasible and the region
/// is a box, translate the box's lower corner onto the origin.
struct Anchored {
    pair: ObjectivePair,
    region: FeasibleRegion,
    offset: Option<Vec<f64>>,
}

fn anchor_at_origin(problem: &ProblemInstance) -> Result<Anchored> {
    let n = problem.dimension();
    if problem
        .region
        .contains(&vec![0.0; n], tolerances::MEMBERSHIP)
    {
        return Ok(Anchored {
            pair: problem.objective.clone(),
            region: problem.region.clone(),
            offset: None,
        });
    }
    let Some((region, offset)) = problem.region.shift_to_origin() else {
        return Err(Error::Config(
            "the origin is not feasible and the region is not a box".into(),
        ));
    };
    let src = &problem.objective;
    let g = Arc::new(Shifted::new(src.g.clone(), offset.clone())?);
    let c = Arc::new(Shifted::new(src.c.clone(), offset.clone())?);
    let mut pair = ObjectivePair::new(g, c, src.lambda)?.with_flags(src.flags);
    pair.smoothness = src.smoothness;
    Ok(Anchored {
        pair,
        region,
        offset: Some(offset),
    })
}

/// `(iterations, step)`: `1/epsilon` steps of `epsilon`, or the experiment
/// override, which must satisfy `iterations * step <= 1`.
fn schedule(cfg: &SolverConfig) -> Result<(usize, f64)> {
    match cfg.max_iters {
        Some(k) => {
            let step = cfg.step.unwrap_or(if k > 0 { 1.0 / k as f64 } else { 0.0 });
            if step.is_nan() || step < 0.0 || k as f64 * step > 1.0 + 1e-12 {
                return Err(Error::Config(format!(
                    "{k} steps of size {step} leave the unit time horizon"
                )));
            }
            Ok((k, step))
        }
        None => {
            let k = reciprocal(cfg.epsilon)?;
            Ok((k, 1.0 / k as f64))
        }
    }
}

/// Greedy Frank-Wolfe: `s = argmax <grad F(y), x>`, `y += eps * s`.
///
/// Requires monotone, non-negative G and C (checked from the objective flags
/// unless disabled). Returns `y(1)`.
pub fn greedy_fw(problem: &ProblemInstance, cfg: &SolverConfig) -> Result<SolverReport> {
    let flags = problem.objective.flags;
    if cfg.enforce_preconditions
        && !(flags.g_monotone && flags.g_nonneg && flags.c_monotone && flags.c_nonneg)
    {
        return Err(Error::Config(
            "greedy_fw needs monotone non-negative G and C".into(),
        ));
    }
    let anchored = anchor_at_origin(problem)?;
    let (iters, step) = schedule(cfg)?;
    let pair = &anchored.pair;
    let mut rec = Recorder::new(pair);
    if let Some(off) = anchored.offset.clone() {
        rec = rec.with_offset(off);
    }

    let mut y = vec![0.0; problem.dimension()];
    rec.push(&y)?;
    for _ in 0..iters {
        let grad = pair.gradient(&y, &mut rec.counts)?;
        let s = anchored.region.lmo(&grad)?;
        rec.counts.lmo += 1;
        for (yi, si) in y.iter_mut().zip(s.vertex.iter()) {
            *yi += step * si;
        }
        rec.push(&y)?;
    }
    Ok(rec.finish(Algorithm::GreedyFw, Some(iters), step))
}

/// Measured greedy Frank-Wolfe: `s = argmax <(1 - y) * grad F(y), x>`,
/// `y += eps * (1 - y) * s`.
///
/// Requires a down-closed region. When the region lies inside the unit cube
/// every iterate is checked against `y_j <= 1 - (1 - eps)^i`.
pub fn measured_greedy_fw(problem: &ProblemInstance, cfg: &SolverConfig) -> Result<SolverReport> {
    let flags = problem.objective.flags;
    if cfg.enforce_preconditions && !(flags.g_nonneg && flags.c_nonneg) {
        return Err(Error::Config(
            "measured_greedy_fw needs non-negative G and C".into(),
        ));
    }
    let anchored = anchor_at_origin(problem)?;
    if !anchored.region.is_down_closed() {
        return Err(Error::Config(
            "measured_greedy_fw needs a down-closed region".into(),
        ));
    }
    let in_cube = anchored.region.within_unit_cube();
    if cfg.enforce_preconditions && !in_cube {
        return Err(Error::Config(
            "measured_greedy_fw needs the region inside [0, 1]^n".into(),
        ));
    }
    let (iters, step) = schedule(cfg)?;
    let pair = &anchored.pair;
    let mut rec = Recorder::new(pair);
    if let Some(off) = anchored.offset.clone() {
        rec = rec.with_offset(off);
    }

    let mut y = vec![0.0; problem.dimension()];
    rec.push(&y)?;
    for i in 1..=iters {
        let grad = pair.gradient(&y, &mut rec.counts)?;
        // (1 - y)_+ keeps y below a convex combination of vertices when y_i > 1
        let weighted: Vec<f64> = grad
            .iter()
            .zip(&y)
            .map(|(g, yi)| (1.0 - yi).max(0.0) * g)
            .collect();
        let s = anchored.region.lmo(&weighted)?;
        rec.counts.lmo += 1;
        for (yi, si) in y.iter_mut().zip(s.vertex.iter()) {
            *yi += step * (1.0 - *yi).max(0.0) * si;
        }
        if in_cube {
            let cap = 1.0 - (1.0 - step).powi(i as i32) + tolerances::MEASURED_CAP;
            if let Some((j, v)) = y
                .iter()
                .enumerate()
                .find(|(_, v)| **v > cap || **v < -tolerances::MEASURED_CAP)
            {
                return Err(Error::Invariant(format!(
                    "measured iterate {i}: y[{j}] = {v} outside [0, {cap}]"
                )));
            }
        }
        rec.push(&y)?;
    }
    Ok(rec.finish(Algorithm::MeasuredGreedyFw, Some(iters), step))
}
