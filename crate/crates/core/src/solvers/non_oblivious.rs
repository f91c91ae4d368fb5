//! Non-oblivious Frank-Wolfe: Frank-Wolfe on `e^-1 * Gbar + C`, where `Gbar`
//! is the non-oblivious surrogate of G.

use crate::error::{Error, Result};
use crate::objectives::NonObliviousWrapper;
use crate::problem::{Objective, ProblemInstance, SolverReport};

use super::{reciprocal, resolve_start, Algorithm, Recorder, SolverConfig};

/// `ceil(e^-1 * beta(eps) / eps^2) = ceil((1 - ln eps) / eps^2)`.
pub fn nonoblivious_iterations(epsilon: f64) -> usize {
    let x = (1.0 - epsilon.ln()) / (epsilon * epsilon);
    // absorb rounding noise just above an integer
    (x - 1e-9).ceil() as usize
}

/// The epsilon in `(0, 1/4)` for which `e^-1 * beta(eps) / eps^2` equals
/// `iterations`, by bisection. When `iterations` is too small for a root
/// below 1/4, the largest admissible epsilon just below 1/4 is returned.
pub fn nonoblivious_epsilon_for(iterations: usize) -> f64 {
    let target = iterations as f64;
    let f = |e: f64| (1.0 - e.ln()) / (e * e) - target;
    let mut lo = 1e-9;
    let mut hi = 0.25;
    if f(hi) >= 0.0 {
        return hi * (1.0 - 1e-9);
    }
    // f is decreasing on (0, 1/4)
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Non-oblivious Frank-Wolfe.
///
/// Starting from an arbitrary feasible point, takes
/// `ceil(e^-1 beta(eps) / eps^2)` steps `y = (1 - eps) y + eps s` with
/// `s = argmax <e^-1 grad Gbar(y) + grad C(y), x>` and returns the best
/// iterate. Each step costs `1/eps` G-gradient calls and one C-gradient call.
pub fn non_oblivious_fw(problem: &ProblemInstance, cfg: &SolverConfig) -> Result<SolverReport> {
    let pair = &problem.objective;
    if cfg.enforce_preconditions
        && !(pair.flags.g_monotone && pair.flags.g_nonneg && pair.flags.c_nonneg)
    {
        return Err(Error::Config(
            "non_oblivious_fw needs monotone non-negative G and non-negative C".into(),
        ));
    }
    let (iters, step) = match cfg.max_iters {
        Some(k) => (k, cfg.step.unwrap_or_else(|| nonoblivious_epsilon_for(k))),
        None => {
            if cfg.epsilon >= 0.25 {
                return Err(Error::Config(format!(
                    "non_oblivious_fw needs epsilon < 1/4, got {}",
                    cfg.epsilon
                )));
            }
            let eps = 1.0 / reciprocal(cfg.epsilon)? as f64;
            (nonoblivious_iterations(eps), eps)
        }
    };
    if !(step > 0.0 && step < 1.0) {
        return Err(Error::Config(format!("step {step} outside (0, 1)")));
    }
    let gbar = NonObliviousWrapper::new(pair.g.clone(), cfg.aux_epsilon.unwrap_or(step))?;
    let g_scale = pair.g_weight() / std::f64::consts::E;

    let mut rec = Recorder::new(pair);
    let mut y = resolve_start(problem, cfg)?.into_vec();
    rec.push(&y)?;
    for _ in 0..iters {
        let mut dir: Vec<f64> = gbar
            .gradient(&y)?
            .into_iter()
            .map(|g| g_scale * g)
            .collect();
        rec.counts.grad_g += gbar.gradient_cost();
        if let Some(i) = dir.iter().position(|v| !v.is_finite()) {
            return Err(Error::OracleFailure(format!("grad Gbar non-finite at {i}")));
        }
        let gc = pair.gradient_c(&y, &mut rec.counts)?;
        for (d, c) in dir.iter_mut().zip(gc) {
            *d += c;
        }
        let s = problem.region.lmo(&dir)?;
        rec.counts.lmo += 1;
        for (yi, si) in y.iter_mut().zip(s.vertex.iter()) {
            *yi = (1.0 - step) * *yi + step * si;
        }
        rec.push(&y)?;
    }
    Ok(rec.finish(Algorithm::NonObliviousFw, None, step))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iteration_count_at_one_fifth() {
        // (1 + ln 5) / 0.04 = 65.24
        assert_eq!(nonoblivious_iterations(0.2), 66);
        assert_eq!(nonoblivious_iterations(0.1), 331);
    }

    #[test]
    fn bisection_root() {
        let e = nonoblivious_epsilon_for(50);
        assert!(e > 0.0 && e < 0.25);
        let lhs = (1.0 - e.ln()) / (e * e);
        assert!((lhs - 50.0).abs() < 1e-9, "{lhs}");
        // no root below 1/4 for tiny budgets
        let e = nonoblivious_epsilon_for(1);
        assert!(e < 0.25 && e > 0.2499);
    }
}
