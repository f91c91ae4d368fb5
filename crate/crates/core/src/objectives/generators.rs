use std::sync::Arc;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::problem::{Objective, ObjectiveFlags, ObjectivePair, ProblemInstance};
use crate::regions::FeasibleRegion;
use crate::rng::Stream;

use super::{DOptimalObjective, LogBarrierConcave, QuadraticObjective};

/// Additive constant that keeps the generated quadratic G non-negative.
pub const QP_CONSTANT: f64 = 10.0;

/// Random points used by the non-negativity scan of `make_qp_instance`.
const QP_SCAN_POINTS: usize = 1000;

/// Quadratic-programming benchmark instance.
#[derive(Debug, Clone)]
pub struct QpInstance {
    pub g: QuadraticObjective,
    pub c: QuadraticObjective,
    pub region: FeasibleRegion,
    /// Most negative G value seen by the sampling scan, if any.
    pub nonneg_violation: Option<f64>,
}

impl QpInstance {
    pub fn flags() -> ObjectiveFlags {
        ObjectiveFlags {
            g_monotone: false,
            g_nonneg: true,
            c_monotone: false,
            c_nonneg: false,
        }
    }

    pub fn problem(&self, lambda: f64) -> Result<ProblemInstance> {
        let pair = ObjectivePair::new(Arc::new(self.g.clone()), Arc::new(self.c.clone()), lambda)?
            .with_flags(Self::flags());
        ProblemInstance::new(pair, self.region.clone())
    }
}

/// Seeded quadratic-programming instance:
///
/// * `H` symmetric with entries U[-1, 0);
/// * `A` (m x n) with entries U[0.01, 1.01), `b = 1`;
/// * `u_i = min_j b_j / A_ji`;
/// * `h = -0.2 H^T u`, `c = 10`;
/// * concave part `C(x) = x^T D x / 20` with `D = -R R^T`, `R` entries U[0, 1).
///
/// Draw order on stream `(seed, 0)`: upper triangle of `H` row-major, then
/// `A` row-major, then `R` row-major. The non-negativity scan uses stream
/// `(seed, 1)` and only logs a warning on violation.
pub fn make_qp_instance(n: usize, m: usize, seed: u64) -> Result<QpInstance> {
    if n == 0 || m == 0 {
        return Err(Error::Config(format!(
            "qp instance needs n, m >= 1 (got {n}, {m})"
        )));
    }
    let mut rng = Stream::new(seed, 0);
    let mut h = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = rng.uniform_in(-1.0, 0.0);
            h[(i, j)] = v;
            h[(j, i)] = v;
        }
    }
    let a: Vec<Vec<f64>> = (0..m).map(|_| rng.uniform_vec(n, 0.01, 1.01)).collect();
    let r = DMatrix::from_fn(n, n, |_, _| rng.uniform());
    let b = vec![1.0; m];
    let u: Vec<f64> = (0..n)
        .map(|i| (0..m).map(|j| b[j] / a[j][i]).fold(f64::INFINITY, f64::min))
        .collect();
    let hu = h.transpose() * nalgebra::DVector::from_column_slice(&u);
    let lin: Vec<f64> = hu.iter().map(|v| -0.2 * v).collect();
    let g = QuadraticObjective::dr_submodular(h, lin, QP_CONSTANT)?;

    // C(x) = x^T D x / 20 = 1/2 x^T (D / 10) x
    let d = -(&r * r.transpose()) / 10.0;
    let d = symmetrize(d);
    let c = QuadraticObjective::new(d, vec![0.0; n], 0.0)?;

    let region = FeasibleRegion::polytope(a, b, u)?;

    let mut scan = Stream::new(seed, 1);
    let mut worst: Option<f64> = None;
    for _ in 0..QP_SCAN_POINTS {
        let x = region.sample(&mut scan);
        let v = g.value(&x)?;
        if v < 0.0 && worst.is_none_or(|w| v < w) {
            worst = Some(v);
        }
    }
    if let Some(v) = worst {
        log::warn!("qp instance (seed {seed}): G takes negative value {v} on sampled points");
    }
    Ok(QpInstance {
        g,
        c,
        region,
        nonneg_violation: worst,
    })
}

fn symmetrize(mut m: DMatrix<f64>) -> DMatrix<f64> {
    let n = m.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = avg;
            m[(j, i)] = avg;
        }
    }
    m
}

/// Row-major grid of `side x side` points spanning `[0,1]^2` inclusive:
/// point `k = row * side + col` sits at `(col, row) / (side - 1)`, so point 0
/// is the origin and point `side - 1` is `(1, 0)`.
pub fn grid_points(side: usize) -> Vec<(f64, f64)> {
    let h = if side > 1 {
        1.0 / (side - 1) as f64
    } else {
        0.0
    };
    (0..side * side)
        .map(|k| ((k % side) as f64 * h, (k / side) as f64 * h))
        .collect()
}

/// Gaussian kernel `L_ij = exp(-d(i,j)^2 / (2 sigma^2))`.
pub fn make_gaussian_kernel(points: &[(f64, f64)], sigma: f64) -> Result<DMatrix<f64>> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::Config(format!(
            "kernel width sigma = {sigma} must be > 0"
        )));
    }
    let n = points.len();
    let denom = 2.0 * sigma * sigma;
    let mut l = DMatrix::zeros(n, n);
    for i in 0..n {
        l[(i, i)] = 1.0;
        for j in (i + 1)..n {
            let dx = points[i].0 - points[j].0;
            let dy = points[i].1 - points[j].1;
            let v = (-(dx * dx + dy * dy) / denom).exp();
            l[(i, j)] = v;
            l[(j, i)] = v;
        }
    }
    Ok(l)
}

/// D-optimal design instance over the box `[1, 2]^n`.
#[derive(Debug, Clone)]
pub struct DOptimalInstance {
    pub g: DOptimalObjective,
    pub c: LogBarrierConcave,
    pub region: FeasibleRegion,
}

impl DOptimalInstance {
    pub fn flags() -> ObjectiveFlags {
        ObjectiveFlags {
            g_monotone: true,
            g_nonneg: false,
            c_monotone: true,
            c_nonneg: true,
        }
    }

    pub fn problem(&self, lambda: f64) -> Result<ProblemInstance> {
        let pair = ObjectivePair::new(Arc::new(self.g.clone()), Arc::new(self.c.clone()), lambda)?
            .with_flags(Self::flags());
        ProblemInstance::new(pair, self.region.clone())
    }
}

/// Design rows drawn from the standard Gaussian on stream `(seed, 0)`,
/// row-major; concave part `0.1 * sum log x_i`.
pub fn make_doptimal_instance(n: usize, seed: u64) -> Result<DOptimalInstance> {
    if n == 0 {
        return Err(Error::Config("d-optimal instance needs n >= 1".into()));
    }
    let mut rng = Stream::new(seed, 0);
    let mut y = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            y[(i, j)] = rng.normal();
        }
    }
    Ok(DOptimalInstance {
        g: DOptimalObjective::new(y)?,
        c: LogBarrierConcave::new(n, 0.1)?,
        region: FeasibleRegion::boxed(vec![1.0; n], vec![2.0; n])?,
    })
}
