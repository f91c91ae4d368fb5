//! Dense tableau simplex for `max c^T x  s.t.  G x <= h, x >= 0` with `h >= 0`.
//!
//! The slack basis is feasible because `h >= 0`, so no phase I is needed.
//! Bland's rule (lowest index entering and leaving) prevents cycling.

use crate::error::{Error, Result};
use crate::tolerances;

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    pub pivots: usize,
}

/// `rows` is the constraint matrix `G` (each row of length `c.len()`),
/// `rhs` the non-negative right-hand side `h`.
pub fn maximize(
    rows: &[Vec<f64>],
    rhs: &[f64],
    c: &[f64],
    max_pivots: usize,
) -> Result<LpSolution> {
    let m = rows.len();
    let n = c.len();
    if rhs.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: rhs.len(),
        });
    }
    if let Some(bad) = rhs.iter().find(|v| **v < 0.0) {
        return Err(Error::InvalidRegion(format!(
            "negative right-hand side {bad}"
        )));
    }
    let width = n + m + 1;
    // row-major tableau, m constraint rows; last column is the rhs
    let mut t = vec![0.0; m * width];
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: row.len(),
            });
        }
        t[i * width..i * width + n].copy_from_slice(row);
        t[i * width + n + i] = 1.0;
        t[i * width + n + m] = rhs[i];
    }
    // reduced costs c_j - z_j, and the current objective value
    let mut reduced: Vec<f64> = c
        .iter()
        .cloned()
        .chain(std::iter::repeat_n(0.0, m))
        .collect();
    let mut value = 0.0;
    let mut basis: Vec<usize> = (n..n + m).collect();

    let mut pivots = 0;
    while let Some(enter) = (0..n + m).find(|&j| reduced[j] > tolerances::PIVOT) {
        if pivots >= max_pivots {
            return Err(Error::IterationLimit(max_pivots));
        }
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..m {
            let a = t[i * width + enter];
            if a > tolerances::PIVOT {
                let ratio = t[i * width + n + m] / a;
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((r, best)) => {
                        let tie = (ratio - best).abs() <= 1e-12 * (1.0 + best.abs());
                        if ratio < best && !tie || tie && basis[i] < basis[r] {
                            Some((i, ratio))
                        } else {
                            Some((r, best))
                        }
                    }
                };
            }
        }
        let Some((row, _)) = leave else {
            return Err(Error::InvalidRegion("linear program is unbounded".into()));
        };

        let p = t[row * width + enter];
        for v in &mut t[row * width..(row + 1) * width] {
            *v /= p;
        }
        let pivot_row: Vec<f64> = t[row * width..(row + 1) * width].to_vec();
        for i in 0..m {
            if i == row {
                continue;
            }
            let f = t[i * width + enter];
            if f != 0.0 {
                for (v, pr) in t[i * width..(i + 1) * width].iter_mut().zip(&pivot_row) {
                    *v -= f * pr;
                }
            }
        }
        let f = reduced[enter];
        for (j, r) in reduced.iter_mut().enumerate() {
            *r -= f * pivot_row[j];
        }
        value += f * pivot_row[n + m];
        basis[row] = enter;
        pivots += 1;
    }

    let mut x = vec![0.0; n];
    for (i, &b) in basis.iter().enumerate() {
        if b < n {
            x[b] = t[i * width + n + m].max(0.0);
        }
    }
    Ok(LpSolution {
        x,
        objective: value,
        pivots,
    })
}
