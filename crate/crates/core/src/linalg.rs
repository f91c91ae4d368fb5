//! Dense linear-algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::tolerances;

/// `log det(m)` from an LU factorization with partial pivoting.
///
/// Returns the log-determinant together with the LU factors so callers can
/// reuse them for solves. A non-positive or (numerically) zero determinant is
/// a domain error.
pub fn log_det(m: DMatrix<f64>) -> Result<(f64, nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>)> {
    let n = m.nrows();
    let lu = m.lu();
    let mut sign: f64 = lu.p().determinant();
    let mut log_abs = 0.0;
    {
        let u = lu.u();
        for i in 0..n {
            let d = u[(i, i)];
            if d == 0.0 || !d.is_finite() {
                return Err(Error::Domain("singular matrix in log-det".into()));
            }
            if d < 0.0 {
                sign = -sign;
            }
            log_abs += d.abs().ln();
        }
    }
    if log_abs <= tolerances::SINGULAR_DET.ln() {
        return Err(Error::Domain(format!(
            "determinant underflows (log |det| = {log_abs})"
        )));
    }
    if sign < 0.0 {
        return Err(Error::Domain("negative determinant in log-det".into()));
    }
    Ok((log_abs, lu))
}

pub fn inverse(lu: &nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>) -> Result<DMatrix<f64>> {
    lu.try_inverse()
        .ok_or_else(|| Error::Domain("matrix is not invertible".into()))
}

/// Max-abs asymmetry `max |m_ij - m_ji|`.
pub fn asymmetry(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst
}

pub fn min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    SymmetricEigen::new(m.clone())
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min)
}

/// Clamp eigenvalues in `[-PSD_CLAMP, 0)` to zero. Larger negative
/// eigenvalues are an error: the matrix is not PSD.
pub fn repair_psd(m: DMatrix<f64>) -> Result<DMatrix<f64>> {
    let eig = SymmetricEigen::new(m.clone());
    let min = eig
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    if min < -tolerances::PSD_CLAMP {
        return Err(Error::Domain(format!(
            "kernel is not positive semidefinite (min eigenvalue {min:e})"
        )));
    }
    if min >= 0.0 {
        return Ok(m);
    }
    let mut vals = eig.eigenvalues.clone();
    for v in vals.iter_mut() {
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    let q = &eig.eigenvectors;
    let mut out = q * DMatrix::from_diagonal(&vals) * q.transpose();
    // restore exact symmetry lost in the product
    let n = out.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = 0.5 * (out[(i, j)] + out[(j, i)]);
            out[(i, j)] = avg;
            out[(j, i)] = avg;
        }
    }
    Ok(out)
}

pub fn from_rows(rows: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let r = rows.len();
    let c = rows.first().map_or(0, |row| row.len());
    if let Some(bad) = rows.iter().find(|row| row.len() != c) {
        return Err(Error::DimensionMismatch {
            expected: c,
            got: bad.len(),
        });
    }
    Ok(DMatrix::from_fn(r, c, |i, j| rows[i][j]))
}

pub fn to_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}
