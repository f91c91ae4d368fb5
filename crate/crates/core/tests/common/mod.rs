#![allow(dead_code)]

use std::sync::Arc;

use fwsubmix::objectives::QuadraticObjective;
use fwsubmix::rng::Stream;
use fwsubmix::{FeasibleRegion, ObjectiveFlags, ObjectivePair, ProblemInstance};
use nalgebra::{DMatrix, DVector};

/// Seeded small instance for the guarantee suites: a packing polytope
/// inside the unit cube, a DR-submodular quadratic G and a concave
/// quadratic C, each monotone or not on request, both non-negative.
pub fn guarantee_instance(
    n: usize,
    seed: u64,
    g_monotone: bool,
    c_monotone: bool,
) -> ProblemInstance {
    let mut rng = Stream::new(seed, 10);
    let m = 2;
    let a: Vec<Vec<f64>> = (0..m).map(|_| rng.uniform_vec(n, 0.01, 1.01)).collect();
    let b = vec![1.0; m];
    let u: Vec<f64> = (0..n)
        .map(|i| a.iter().map(|row| 1.0 / row[i]).fold(1.0, f64::min))
        .collect();
    let uv = DVector::from_column_slice(&u);

    let mut h = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = rng.uniform_in(-1.0, 0.0);
            h[(i, j)] = v;
            h[(j, i)] = v;
        }
    }
    // grad G = H x + h is smallest at x = u
    let hu = &h * &uv;
    let g_lin: Vec<f64> = if g_monotone {
        hu.iter().map(|v| -v + 0.1 * rng.uniform()).collect()
    } else {
        hu.iter().map(|v| -0.3 * v).collect()
    };
    let g_const = if g_monotone {
        0.0
    } else {
        lower_bound_offset(&h, &g_lin, &u)
    };
    let g = QuadraticObjective::dr_submodular(h, g_lin, g_const).unwrap();

    let r = DMatrix::from_fn(n, n, |_, _| rng.uniform());
    let mut q = -(&r * r.transpose()) / 5.0;
    q = (&q + q.transpose()) * 0.5;
    let qu = &q * &uv;
    let c_lin: Vec<f64> = if c_monotone {
        qu.iter().map(|v| -v + 0.1 * rng.uniform()).collect()
    } else {
        qu.iter().map(|v| -0.4 * v).collect()
    };
    let c_const = if c_monotone {
        0.0
    } else {
        lower_bound_offset(&q, &c_lin, &u)
    };
    let c = QuadraticObjective::new(q, c_lin, c_const).unwrap();

    let flags = ObjectiveFlags {
        g_monotone,
        g_nonneg: true,
        c_monotone,
        c_nonneg: true,
    };
    let pair = ObjectivePair::new(Arc::new(g), Arc::new(c), 0.5)
        .unwrap()
        .with_flags(flags);
    ProblemInstance::new(pair, FeasibleRegion::polytope(a, b, u).unwrap()).unwrap()
}

/// Constant making `1/2 x^T H x + h^T x + c >= 0` on `[0, u]`.
fn lower_bound_offset(h: &DMatrix<f64>, lin: &[f64], u: &[f64]) -> f64 {
    let n = u.len();
    let mut quad = 0.0;
    for i in 0..n {
        for j in 0..n {
            quad += 0.5 * h[(i, j)].abs() * u[i] * u[j];
        }
    }
    quad + lin.iter().zip(u).map(|(l, ui)| l.abs() * ui).sum::<f64>()
}

/// Maximum of `<c, x>` over `{x >= 0, A x <= b, x <= u}` by enumerating
/// every basic solution of the constraint system.
pub fn vertex_enumeration_max(a: &[Vec<f64>], b: &[f64], u: &[f64], c: &[f64]) -> f64 {
    let n = u.len();
    // rows: A x <= b, x <= u, -x <= 0
    let mut rows: Vec<(Vec<f64>, f64)> = a.iter().cloned().zip(b.iter().copied()).collect();
    for i in 0..n {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        rows.push((e.clone(), u[i]));
        e[i] = -1.0;
        rows.push((e, 0.0));
    }
    let mut best = f64::NEG_INFINITY;
    let mut subset: Vec<usize> = (0..n).collect();
    loop {
        let mat = DMatrix::from_fn(n, n, |i, j| rows[subset[i]].0[j]);
        let rhs = DVector::from_fn(n, |i, _| rows[subset[i]].1);
        if mat.determinant().abs() > 1e-12 {
            if let Some(x) = mat.lu().solve(&rhs) {
                let feasible = rows.iter().all(|(row, bound)| {
                    row.iter().zip(x.iter()).map(|(p, q)| p * q).sum::<f64>() <= bound + 1e-9
                });
                if feasible {
                    best = best.max(c.iter().zip(x.iter()).map(|(p, q)| p * q).sum());
                }
            }
        }
        // next n-subset of rows in lexicographic order
        let total = rows.len();
        let mut i = n;
        loop {
            if i == 0 {
                return best;
            }
            i -= 1;
            if subset[i] < total - n + i {
                break;
            }
        }
        subset[i] += 1;
        for j in i + 1..n {
            subset[j] = subset[j - 1] + 1;
        }
    }
}

/// Largest eigenvalue magnitude of a symmetric matrix by power iteration.
pub fn power_iteration(m: &DMatrix<f64>, iters: usize) -> f64 {
    let n = m.nrows();
    let mut v = DVector::from_element(n, 1.0 / (n as f64).sqrt());
    let mut lambda = 0.0;
    for _ in 0..iters {
        let w = m * &v;
        lambda = w.norm();
        if lambda == 0.0 {
            return 0.0;
        }
        v = w / lambda;
    }
    lambda
}
