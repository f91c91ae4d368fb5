//! Solvable convex bodies: membership, linear maximization oracle,
//! Euclidean projection (where cheap) and the radius bound `D`.

pub mod simplex;

use crate::error::{check_dim, Error, Result};
use crate::problem::Point;
use crate::rng::Stream;
use crate::tolerances;

/// Borrowed `(A, b, u)` of a packing polytope.
pub type PolytopeData<'a> = (&'a [Vec<f64>], &'a [f64], &'a [f64]);

#[derive(Debug, Clone, PartialEq)]
pub enum RegionKind {
    /// `lower <= x <= upper`.
    Box { lower: Vec<f64>, upper: Vec<f64> },
    /// `{x in [0,1]^n : sum x <= budget}`.
    Cardinality { n: usize, budget: f64 },
    /// `{x >= 0 : A x <= b, x <= u}` with `A, b >= 0`.
    Polytope {
        a: Vec<Vec<f64>>,
        b: Vec<f64>,
        u: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeasibleRegion {
    kind: RegionKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LmoResult {
    pub vertex: Point,
    pub objective_value: f64,
}

impl FeasibleRegion {
    pub fn boxed(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        check_dim(lower.len(), upper.len())?;
        for (i, (l, u)) in lower.iter().zip(&upper).enumerate() {
            if !(l.is_finite() && u.is_finite() && l <= u) {
                return Err(Error::InvalidRegion(format!(
                    "box bounds at {i}: need finite lower <= upper, got [{l}, {u}]"
                )));
            }
        }
        Ok(Self {
            kind: RegionKind::Box { lower, upper },
        })
    }

    pub fn unit_cube(n: usize) -> Self {
        Self {
            kind: RegionKind::Box {
                lower: vec![0.0; n],
                upper: vec![1.0; n],
            },
        }
    }

    pub fn cardinality(n: usize, budget: f64) -> Result<Self> {
        if !(budget > 0.0 && budget <= n as f64) {
            return Err(Error::InvalidRegion(format!(
                "cardinality budget {budget} must lie in (0, {n}]"
            )));
        }
        Ok(Self {
            kind: RegionKind::Cardinality { n, budget },
        })
    }

    pub fn polytope(a: Vec<Vec<f64>>, b: Vec<f64>, u: Vec<f64>) -> Result<Self> {
        let n = u.len();
        check_dim(a.len(), b.len())?;
        for row in &a {
            check_dim(n, row.len())?;
        }
        let all_nonneg = |v: &[f64]| v.iter().all(|x| x.is_finite() && *x >= 0.0);
        if !a.iter().all(|r| all_nonneg(r)) || !all_nonneg(&b) || !all_nonneg(&u) {
            return Err(Error::InvalidRegion(
                "polytope data A, b, u must be finite and non-negative".into(),
            ));
        }
        Ok(Self {
            kind: RegionKind::Polytope { a, b, u },
        })
    }

    pub fn kind(&self) -> &RegionKind {
        &self.kind
    }

    pub fn polytope_data(&self) -> Option<PolytopeData<'_>> {
        match &self.kind {
            RegionKind::Polytope { a, b, u } => Some((a, b, u)),
            _ => None,
        }
    }

    pub fn dim(&self) -> usize {
        match &self.kind {
            RegionKind::Box { lower, .. } => lower.len(),
            RegionKind::Cardinality { n, .. } => *n,
            RegionKind::Polytope { u, .. } => u.len(),
        }
    }

    /// Whether `0 <= y <= x` and `x` feasible implies `y` feasible.
    pub fn is_down_closed(&self) -> bool {
        match &self.kind {
            RegionKind::Box { lower, .. } => lower.iter().all(|l| *l == 0.0),
            RegionKind::Cardinality { .. } | RegionKind::Polytope { .. } => true,
        }
    }

    /// Whether the region is contained in `[0, 1]^n`.
    pub fn within_unit_cube(&self) -> bool {
        let (lo, hi) = self.bounding_box();
        lo.iter().all(|v| *v >= 0.0) && hi.iter().all(|v| *v <= 1.0)
    }

    /// Coordinate-wise bounds enclosing the region.
    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        match &self.kind {
            RegionKind::Box { lower, upper } => (lower.clone(), upper.clone()),
            RegionKind::Cardinality { n, budget } => (vec![0.0; *n], vec![budget.min(1.0); *n]),
            RegionKind::Polytope { a, b, u } => {
                let hi = (0..u.len())
                    .map(|i| {
                        a.iter()
                            .zip(b)
                            .filter(|(row, _)| row[i] > 0.0)
                            .map(|(row, bj)| bj / row[i])
                            .fold(u[i], f64::min)
                    })
                    .collect();
                (vec![0.0; u.len()], hi)
            }
        }
    }

    /// Default starting point: the origin for down-closed bodies, the lower
    /// corner for boxes.
    pub fn anchor(&self) -> Point {
        match &self.kind {
            RegionKind::Box { lower, .. } => Point::new(lower.clone()).expect("finite box"),
            _ => Point::zeros(self.dim()),
        }
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        if x.len() != self.dim() || x.iter().any(|v| !v.is_finite()) {
            return false;
        }
        match &self.kind {
            RegionKind::Box { lower, upper } => x
                .iter()
                .zip(lower.iter().zip(upper))
                .all(|(v, (l, u))| *v >= l - tol && *v <= u + tol),
            RegionKind::Cardinality { budget, .. } => {
                x.iter().all(|v| *v >= -tol && *v <= 1.0 + tol)
                    && x.iter().sum::<f64>() <= budget + tol
            }
            RegionKind::Polytope { a, b, u } => {
                x.iter().zip(u).all(|(v, ui)| *v >= -tol && *v <= ui + tol)
                    && a.iter()
                        .zip(b)
                        .all(|(row, bj)| crate::vecops::dot(row, x) <= bj + tol)
            }
        }
    }

    /// Maximize `<c, x>` over the region. Ties are broken toward the lowest
    /// index so the result is deterministic.
    pub fn lmo(&self, c: &[f64]) -> Result<LmoResult> {
        check_dim(self.dim(), c.len())?;
        if let Some(index) = c.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        let vertex = match &self.kind {
            RegionKind::Box { lower, upper } => c
                .iter()
                .zip(lower.iter().zip(upper))
                .map(|(ci, (l, u))| if *ci > 0.0 { *u } else { *l })
                .collect(),
            RegionKind::Cardinality { n, budget } => {
                let mut order: Vec<usize> = (0..*n).collect();
                // stable: equal scores keep index order
                order.sort_by(|&i, &j| c[j].partial_cmp(&c[i]).expect("finite"));
                let mut x = vec![0.0; *n];
                let mut remaining = *budget;
                for i in order {
                    if c[i] <= 0.0 || remaining <= 0.0 {
                        break;
                    }
                    let take = remaining.min(1.0);
                    x[i] = take;
                    remaining -= take;
                }
                x
            }
            RegionKind::Polytope { a, b, u } => {
                let n = u.len();
                let mut rows = a.clone();
                let mut rhs = b.clone();
                for i in 0..n {
                    let mut e = vec![0.0; n];
                    e[i] = 1.0;
                    rows.push(e);
                    rhs.push(u[i]);
                }
                let cap = 50 * (a.len() + 2 * n);
                let sol = simplex::maximize(&rows, &rhs, c, cap)?;
                sol.x
                    .into_iter()
                    .zip(u)
                    .map(|(v, ui)| v.clamp(0.0, *ui))
                    .collect()
            }
        };
        let objective_value = crate::vecops::dot(c, &vertex);
        Ok(LmoResult {
            vertex: Point::new(vertex)?,
            objective_value,
        })
    }

    /// Euclidean projection. Only boxes and cardinality bodies are supported.
    pub fn project(&self, x: &[f64]) -> Result<Point> {
        check_dim(self.dim(), x.len())?;
        match &self.kind {
            RegionKind::Box { lower, upper } => Point::new(
                x.iter()
                    .zip(lower.iter().zip(upper))
                    .map(|(v, (l, u))| v.clamp(*l, *u))
                    .collect(),
            ),
            RegionKind::Cardinality { budget, .. } => {
                Point::new(project_capped_simplex(x, *budget))
            }
            RegionKind::Polytope { .. } => Err(Error::UnsupportedRegion(
                "projection onto a general polytope is not available".into(),
            )),
        }
    }

    pub fn supports_projection(&self) -> bool {
        !matches!(self.kind, RegionKind::Polytope { .. })
    }

    /// Upper bound on `max_{x in P} ||x||_2` (exact for boxes and cardinality
    /// bodies, `||u||_2` for polytopes).
    pub fn diameter_bound(&self) -> f64 {
        match &self.kind {
            RegionKind::Box { lower, upper } => lower
                .iter()
                .zip(upper)
                .map(|(l, u)| l.abs().max(u.abs()).powi(2))
                .sum::<f64>()
                .sqrt(),
            RegionKind::Cardinality { n, budget } => {
                let k = budget.min(*n as f64);
                let full = k.floor();
                let rest = k - full;
                (full + rest * rest).sqrt()
            }
            RegionKind::Polytope { u, .. } => crate::vecops::norm2(u),
        }
    }

    /// Random feasible point (not uniform for polytopes: a random point of the
    /// bounding box scaled down until it satisfies `A x <= b`).
    pub fn sample(&self, rng: &mut Stream) -> Vec<f64> {
        match &self.kind {
            RegionKind::Box { lower, upper } => lower
                .iter()
                .zip(upper)
                .map(|(l, u)| rng.uniform_in(*l, *u))
                .collect(),
            RegionKind::Cardinality { n, budget } => {
                let x = rng.uniform_vec(*n, 0.0, 1.0);
                let s: f64 = x.iter().sum();
                if s > *budget {
                    x.iter().map(|v| v * budget / s).collect()
                } else {
                    x
                }
            }
            RegionKind::Polytope { a, b, u } => {
                let x: Vec<f64> = u.iter().map(|ui| ui * rng.uniform()).collect();
                let shrink = a
                    .iter()
                    .zip(b)
                    .map(|(row, bj)| {
                        let ax = crate::vecops::dot(row, &x);
                        if ax > 0.0 {
                            bj / ax
                        } else {
                            f64::INFINITY
                        }
                    })
                    .fold(1.0, f64::min);
                x.iter().map(|v| v * shrink).collect()
            }
        }
    }

    /// For a box `[l, u]`, the box `[0, u - l]` and the offset `l`.
    pub fn shift_to_origin(&self) -> Option<(FeasibleRegion, Vec<f64>)> {
        match &self.kind {
            RegionKind::Box { lower, upper } => {
                let width = upper.iter().zip(lower).map(|(u, l)| u - l).collect();
                Some((
                    FeasibleRegion {
                        kind: RegionKind::Box {
                            lower: vec![0.0; lower.len()],
                            upper: width,
                        },
                    },
                    lower.clone(),
                ))
            }
            _ => None,
        }
    }
}

/// Projection onto `{x in [0,1]^n : sum x <= budget}`: clamp, and if the
/// budget is exceeded find the shift `theta >= 0` with
/// `sum clamp(x_i - theta, 0, 1) = budget` by bisection.
fn project_capped_simplex(x: &[f64], budget: f64) -> Vec<f64> {
    let shifted =
        |theta: f64| -> Vec<f64> { x.iter().map(|v| (v - theta).clamp(0.0, 1.0)).collect() };
    let clamped = shifted(0.0);
    if clamped.iter().sum::<f64>() <= budget {
        return clamped;
    }
    let mut lo = 0.0;
    let mut hi = x.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    for _ in 0..200 {
        if hi - lo <= tolerances::PROJECTION_BISECTION * 1e-3 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if shifted(mid).iter().sum::<f64>() > budget {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // the upper end always satisfies the budget
    shifted(hi)
}
