//! Independent checks: finite differences, structural probes on random
//! samples, a brute-force grid maximizer and guarantee-bound evaluation.

use std::f64::consts::E;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::problem::{
    Objective, ObjectivePair, OracleCounts, Point, ProblemInstance, SolverReport,
};
use crate::regions::FeasibleRegion;
use crate::rng::Stream;
use crate::solvers::{Algorithm, Recorder};
use crate::tolerances;
use crate::vecops::{dist2, norm2, sub};

/// Largest dimension `grid_maximize` accepts.
pub const GRID_MAX_DIM: usize = 6;
/// Largest number of grid points `grid_maximize` will visit.
pub const GRID_MAX_POINTS: u64 = 50_000_000;

/// Central differences of `f` at `x`. If a stencil point is outside the
/// domain of `f` the step is shrunk once by a factor of ten.
pub fn finite_diff_grad<F>(f: F, x: &[f64], h: f64) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> Result<f64>,
{
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::Config(format!(
            "finite-difference step {h} must be positive"
        )));
    }
    match stencil(&f, x, h) {
        Err(Error::Domain(_)) => stencil(&f, x, h / 10.0),
        other => other,
    }
}

fn stencil<F>(f: &F, x: &[f64], h: f64) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> Result<f64>,
{
    let mut probe = x.to_vec();
    let mut grad = Vec::with_capacity(x.len());
    for i in 0..x.len() {
        probe[i] = x[i] + h;
        let up = f(&probe)?;
        probe[i] = x[i] - h;
        let down = f(&probe)?;
        probe[i] = x[i];
        grad.push((up - down) / (2.0 * h));
    }
    Ok(grad)
}

/// Outcome of a randomized structural probe.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub trials: usize,
    pub max_violation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckReport {
    fn new(trials: usize, max_violation: f64, tolerance: f64) -> Self {
        Self {
            trials,
            max_violation,
            tolerance,
            passed: max_violation <= tolerance,
        }
    }
}

/// Uniform point of the box `[lo + margin (hi - lo), hi - margin (hi - lo)]`.
fn interior_point(rng: &mut Stream, lo: &[f64], hi: &[f64], margin: f64) -> Vec<f64> {
    lo.iter()
        .zip(hi)
        .map(|(l, h)| {
            let w = h - l;
            rng.uniform_in(l + margin * w, h - margin * w)
        })
        .collect()
}

/// Compares the closed-form gradient with central differences at `points`
/// random interior points of the domain's bounding box. The error at a point
/// is `||fd - grad||_2 / max(||grad||_2, 1)`.
pub fn check_gradient(
    f: &dyn Objective,
    domain: &FeasibleRegion,
    points: usize,
    tol: f64,
    seed: u64,
) -> Result<CheckReport> {
    let (lo, hi) = domain.bounding_box();
    let mut rng = Stream::new(seed, 0);
    let mut worst: f64 = 0.0;
    for _ in 0..points {
        let x = interior_point(&mut rng, &lo, &hi, 0.05);
        let exact = f.gradient(&x)?;
        let fd = finite_diff_grad(|z| f.value(z), &x, tolerances::FD_STEP)?;
        let err = dist2(&fd, &exact) / norm2(&exact).max(1.0);
        worst = worst.max(err);
    }
    Ok(CheckReport::new(points, worst, tol))
}

/// Samples pairs `a <= b` in the domain's bounding box and measures how far
/// `grad g(a) >= grad g(b)` fails coordinate-wise.
pub fn check_dr_submodular(
    g: &dyn Objective,
    domain: &FeasibleRegion,
    trials: usize,
    tol: f64,
    seed: u64,
) -> Result<CheckReport> {
    if trials == 0 {
        return Err(Error::Config("at least one trial is required".into()));
    }
    let (lo, hi) = domain.bounding_box();
    let mut rng = Stream::new(seed, 0);
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let a = interior_point(&mut rng, &lo, &hi, 0.0);
        let b = interior_point(&mut rng, &a, &hi, 0.0);
        let ga = g.gradient(&a)?;
        let gb = g.gradient(&b)?;
        for (x, y) in ga.iter().zip(&gb) {
            worst = worst.max(y - x);
        }
    }
    Ok(CheckReport::new(trials, worst, tol))
}

/// Midpoint concavity on random segments between feasible samples:
/// violation `(c(a) + c(b)) / 2 - c((a + b) / 2)`.
pub fn check_concave(
    c: &dyn Objective,
    domain: &FeasibleRegion,
    trials: usize,
    tol: f64,
    seed: u64,
) -> Result<CheckReport> {
    if trials == 0 {
        return Err(Error::Config("at least one trial is required".into()));
    }
    let mut rng = Stream::new(seed, 0);
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let a = domain.sample(&mut rng);
        let b = domain.sample(&mut rng);
        let mid: Vec<f64> = a.iter().zip(&b).map(|(x, y)| 0.5 * (x + y)).collect();
        let gap = 0.5 * (c.value(&a)? + c.value(&b)?) - c.value(&mid)?;
        worst = worst.max(gap);
    }
    Ok(CheckReport::new(trials, worst, tol))
}

fn smoothness_of<G>(grad: G, domain: &FeasibleRegion, samples: usize, seed: u64) -> Result<f64>
where
    G: Fn(&[f64]) -> Result<Vec<f64>>,
{
    if samples < 2 {
        return Err(Error::Config("need at least two samples".into()));
    }
    let mut rng = Stream::new(seed, 0);
    let mut ratio: f64 = 0.0;
    let mut best: Option<(Vec<f64>, Vec<f64>)> = None;
    for _ in 0..samples {
        let a = domain.sample(&mut rng);
        let b = domain.sample(&mut rng);
        let d = dist2(&a, &b);
        if d < 1e-12 {
            continue;
        }
        let r = norm2(&sub(&grad(&a)?, &grad(&b)?)) / d;
        if r >= ratio {
            ratio = r;
            best = Some((a, b));
        }
    }
    if let Some((a, b)) = best {
        ratio = ratio.max(refine_direction(&grad, domain, &a, &b)?);
    }
    Ok(ratio * tolerances::SMOOTHNESS_INFLATION)
}

/// Power-iteration style refinement around a point inside the best
/// sampled pair: the pair direction is replaced by the gradient difference
/// it produces, keeping both endpoints feasible.
fn refine_direction<G>(grad: &G, domain: &FeasibleRegion, a: &[f64], b: &[f64]) -> Result<f64>
where
    G: Fn(&[f64]) -> Result<Vec<f64>>,
{
    const ROUNDS: usize = 30;
    // halfway between the anchor and the pair midpoint, off any shared face
    let anchor = domain.anchor();
    let center: Vec<f64> = a
        .iter()
        .zip(b)
        .zip(anchor.as_slice())
        .map(|((p, q), o)| 0.5 * (0.5 * (p + q) + o))
        .collect();
    let radius = 0.5 * dist2(a, b);
    let mut dir = sub(b, a);
    let mut ratio: f64 = 0.0;
    for _ in 0..ROUNDS {
        let len = norm2(&dir);
        if !(len > 0.0 && len.is_finite()) {
            break;
        }
        let unit: Vec<f64> = dir.iter().map(|v| v / len).collect();
        let mut s = radius;
        let mut pair = None;
        for _ in 0..40 {
            let hi: Vec<f64> = center.iter().zip(&unit).map(|(c, u)| c + s * u).collect();
            let lo: Vec<f64> = center.iter().zip(&unit).map(|(c, u)| c - s * u).collect();
            if domain.contains(&hi, 0.0) && domain.contains(&lo, 0.0) {
                pair = Some((lo, hi));
                break;
            }
            s *= 0.5;
        }
        let Some((lo, hi)) = pair else { break };
        let diff = sub(&grad(&hi)?, &grad(&lo)?);
        ratio = ratio.max(norm2(&diff) / (2.0 * s));
        dir = diff;
    }
    Ok(ratio)
}

/// Empirical gradient-Lipschitz constant over `samples` random feasible
/// pairs, inflated by 1.5.
pub fn estimate_smoothness(
    f: &dyn Objective,
    domain: &FeasibleRegion,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    smoothness_of(|x| f.gradient(x), domain, samples, seed)
}

/// Smoothness estimate for a weighted pair: the largest of the estimates for
/// `F`, `lambda G` and `(1 - lambda) C`.
pub fn estimate_pair_smoothness(
    pair: &ObjectivePair,
    domain: &FeasibleRegion,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    let scratch = OracleCounts::default;
    let f = smoothness_of(|x| pair.gradient(x, &mut scratch()), domain, samples, seed)?;
    let g = smoothness_of(
        |x| pair.gradient_g(x, &mut scratch()),
        domain,
        samples,
        seed,
    )?;
    let c = smoothness_of(
        |x| pair.gradient_c(x, &mut scratch()),
        domain,
        samples,
        seed,
    )?;
    Ok(f.max(g).max(c))
}

/// Best grid point found by [`grid_maximize`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridOracleResult {
    pub argmax: Point,
    pub value: f64,
    /// Weighted parts at the argmax: `lambda G` and `(1 - lambda) C`.
    pub g_value: f64,
    pub c_value: f64,
    pub grid_step: f64,
    /// Number of feasible grid points evaluated.
    pub points_scanned: u64,
}

/// Exhaustive scan of `{lo + k * step}^n` (clamped to the bounding box)
/// intersected with the region. Ties go to the lexicographically smallest
/// point. Points where an oracle reports a domain error are skipped.
pub fn grid_maximize(p: &ProblemInstance, step: f64) -> Result<GridOracleResult> {
    let n = p.dimension();
    if n > GRID_MAX_DIM {
        return Err(Error::Config(format!(
            "grid oracle limited to dimension {GRID_MAX_DIM}, got {n}"
        )));
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::Config(format!("grid step {step} must be positive")));
    }
    let (lo, hi) = p.region.bounding_box();
    let axes: Vec<Vec<f64>> = lo
        .iter()
        .zip(&hi)
        .map(|(l, h)| {
            let count = ((h - l) / step + 1e-9).floor() as usize + 1;
            (0..count).map(|k| (l + k as f64 * step).min(*h)).collect()
        })
        .collect();
    let total = axes
        .iter()
        .try_fold(1u64, |acc, a| acc.checked_mul(a.len() as u64))
        .filter(|t| *t <= GRID_MAX_POINTS)
        .ok_or_else(|| Error::Config("grid too fine for the point budget".into()))?;
    log::debug!("grid oracle: {total} candidate points");

    let first_len = axes.first().map_or(1, Vec::len);
    let shards: Vec<Result<Option<Shard>>> = (0..first_len)
        .into_par_iter()
        .map(|i| scan_shard(p, &axes, i))
        .collect();

    let mut best: Option<Shard> = None;
    let mut scanned = 0;
    for shard in shards {
        let Some(s) = shard? else { continue };
        scanned += s.scanned;
        if best.as_ref().is_none_or(|b| s.value > b.value) {
            best = Some(s);
        }
    }
    let best = best.ok_or_else(|| Error::Config("no feasible grid point".into()))?;
    Ok(GridOracleResult {
        g_value: p.objective.value_g(&best.x)?,
        c_value: p.objective.value_c(&best.x)?,
        argmax: Point::new(best.x)?,
        value: best.value,
        grid_step: step,
        points_scanned: scanned,
    })
}

struct Shard {
    x: Vec<f64>,
    value: f64,
    scanned: u64,
}

fn scan_shard(p: &ProblemInstance, axes: &[Vec<f64>], first: usize) -> Result<Option<Shard>> {
    let n = axes.len();
    let mut idx = vec![0usize; n];
    if n > 0 {
        idx[0] = first;
    }
    let mut x: Vec<f64> = idx.iter().zip(axes).map(|(k, a)| a[*k]).collect();
    let mut best: Option<Shard> = None;
    let mut scanned = 0;
    loop {
        if p.region.contains(&x, tolerances::MEMBERSHIP) {
            match p.objective.value(&x) {
                Ok(v) => {
                    scanned += 1;
                    if best.as_ref().is_none_or(|b| v > b.value) {
                        best = Some(Shard {
                            x: x.clone(),
                            value: v,
                            scanned: 0,
                        });
                    }
                }
                Err(Error::Domain(_)) => {}
                Err(e) => return Err(e),
            }
        }
        // odometer over coordinates 1..n, last coordinate fastest
        let mut d = n;
        loop {
            if d <= 1 {
                return Ok(best.map(|mut b| {
                    b.scanned = scanned;
                    b
                }));
            }
            d -= 1;
            idx[d] += 1;
            if idx[d] < axes[d].len() {
                x[d] = axes[d][idx[d]];
                break;
            }
            idx[d] = 0;
            x[d] = axes[d][0];
        }
    }
}

/// Which row of the guarantee table a bound instantiates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundRow {
    Greedy,
    Measured { g_monotone: bool, c_monotone: bool },
    GradientCombining,
    NonOblivious,
    Custom,
}

/// `F(y) >= alpha G(o) + beta C(o) - additive_error`.
#[derive(Debug, Clone, PartialEq)]
pub struct GuaranteeBound {
    pub alpha: f64,
    pub beta: f64,
    pub additive_error: f64,
    pub source_row: BoundRow,
}

impl GuaranteeBound {
    /// Arbitrary bound. `alpha` and `beta` may be negative (the non-oblivious
    /// coefficients are for coarse epsilon) but not above one.
    pub fn new(alpha: f64, beta: f64, additive_error: f64) -> Result<Self> {
        if !(alpha <= 1.0 && beta <= 1.0 && additive_error >= 0.0) {
            return Err(Error::Config(format!(
                "invalid bound ({alpha}, {beta}, {additive_error})"
            )));
        }
        Ok(Self {
            alpha,
            beta,
            additive_error,
            source_row: BoundRow::Custom,
        })
    }

    pub fn greedy(epsilon: f64, l: f64, d: f64) -> Self {
        let a = 1.0 - 1.0 / E;
        Self {
            alpha: a,
            beta: a,
            additive_error: epsilon * l * d * d,
            source_row: BoundRow::Greedy,
        }
    }

    pub fn measured(g_monotone: bool, c_monotone: bool, epsilon: f64, l: f64, d: f64) -> Self {
        let coef = |monotone: bool| if monotone { 1.0 - 1.0 / E } else { 1.0 / E };
        Self {
            alpha: coef(g_monotone),
            beta: coef(c_monotone),
            additive_error: epsilon * l * d * d,
            source_row: BoundRow::Measured {
                g_monotone,
                c_monotone,
            },
        }
    }

    pub fn gradient_combining(epsilon: f64, eta: f64, l: f64, d: f64) -> Self {
        Self {
            alpha: 0.5 * (1.0 - epsilon),
            beta: 1.0,
            additive_error: epsilon * (eta + 3.0 * l * d * d),
            source_row: BoundRow::GradientCombining,
        }
    }

    pub fn non_oblivious(epsilon: f64, l: f64, d: f64) -> Self {
        let loss = 4.0 * epsilon * (1.0 / epsilon).ln();
        Self {
            alpha: 1.0 - 1.0 / E - loss,
            beta: 1.0 - loss,
            additive_error: 4.0 * epsilon * l * d * d,
            source_row: BoundRow::NonOblivious,
        }
    }

    /// Right-hand side of the bound against a grid optimum.
    pub fn threshold(&self, oracle: &GridOracleResult) -> f64 {
        self.alpha * oracle.g_value + self.beta * oracle.c_value - self.additive_error
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GuaranteeCheck {
    pub achieved: f64,
    pub threshold: f64,
    pub slack: f64,
    pub passed: bool,
}

/// Compares the value of the solver's output against the bound.
pub fn check_guarantee(
    report: &SolverReport,
    bound: &GuaranteeBound,
    oracle: &GridOracleResult,
    slack: f64,
) -> GuaranteeCheck {
    let threshold = bound.threshold(oracle);
    GuaranteeCheck {
        achieved: report.output_value,
        threshold,
        slack,
        passed: report.output_value >= threshold - slack,
    }
}

/// Negative control: a "solver" that returns its starting point untouched.
pub fn crippled_report(p: &ProblemInstance) -> Result<SolverReport> {
    let mut rec = Recorder::new(&p.objective);
    rec.push(&p.region.anchor())?;
    Ok(rec.finish(Algorithm::StandardFw, Some(0), 0.0))
}

/// Negative control: an objective whose reported gradient is off by
/// `shift` in the first coordinate.
#[derive(Debug, Clone)]
pub struct PerturbedGradient<O> {
    pub inner: O,
    pub shift: f64,
}

impl<O: Objective> Objective for PerturbedGradient<O> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn value(&self, x: &[f64]) -> Result<f64> {
        self.inner.value(x)
    }

    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut g = self.inner.gradient(x)?;
        if let Some(g0) = g.first_mut() {
            *g0 += self.shift;
        }
        Ok(g)
    }
}
