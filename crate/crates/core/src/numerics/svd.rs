//! Singular value decomposition by one-sided Jacobi rotations.
//!
//! The matrix columns are repeatedly paired and rotated until mutually
//! orthogonal; column norms are then the singular values. Chosen for its
//! high relative accuracy on the small (order <= 32) matrices this crate
//! works with. Derived quantities (pseudoinverse, condition number,
//! smallest singular value, numerical rank) all go through [`svd`] so that
//! every consumer sees one consistent set of singular values.

use super::{c64, C64, ComplexMatrix};
use crate::error::{Error, Result};

/// Maximum number of Jacobi sweeps before reporting non-convergence.
const MAX_SWEEPS: usize = 100;

/// Economy-size SVD: `m = U diag(sigma) V^H` with orthonormal columns in
/// `u` (rows(m) x k) and `v` (cols(m) x k), k = min(rows, cols), and
/// `singular_values` sorted non-increasing.
#[derive(Clone, Debug)]
pub struct SvdResult {
    pub u: ComplexMatrix,
    pub singular_values: Vec<f64>,
    pub v: ComplexMatrix,
}

impl SvdResult {
    pub fn sigma_max(&self) -> f64 {
        self.singular_values[0]
    }

    pub fn sigma_min(&self) -> f64 {
        *self.singular_values.last().unwrap()
    }

    /// `U diag(sigma) V^H`, for residual checks.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let k = self.singular_values.len();
        let scaled = ComplexMatrix::from_fn(self.u.rows(), k, |i, j| {
            self.u[(i, j)] * self.singular_values[j]
        });
        scaled.mul(&self.v.conj_transpose())
    }
}

pub fn svd(m: &ComplexMatrix) -> Result<SvdResult> {
    m.check_finite()?;
    if m.rows() >= m.cols() {
        svd_tall(m)
    } else {
        // A = (A^H)^H: swap the roles of U and V.
        let t = svd_tall(&m.conj_transpose())?;
        Ok(SvdResult { u: t.v, singular_values: t.singular_values, v: t.u })
    }
}

fn svd_tall(a: &ComplexMatrix) -> Result<SvdResult> {
    let (m, n) = (a.rows(), a.cols());
    debug_assert!(m >= n);
    let mut b = a.clone();
    let mut v = ComplexMatrix::identity(n);
    let tol = 1e-15;

    let mut converged = false;
    let mut last_off = 0.0f64;
    for _sweep in 0..MAX_SWEEPS {
        let mut rotated = false;
        last_off = 0.0;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = C64::default();
                for i in 0..m {
                    let bp = b[(i, p)];
                    let bq = b[(i, q)];
                    alpha += bp.norm_sqr();
                    beta += bq.norm_sqr();
                    gamma += bp.conj() * bq;
                }
                let g = gamma.norm();
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                last_off = last_off.max(g / (alpha * beta).sqrt());
                if g <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                // Absorb the phase of gamma into column q, then the 2x2
                // Gram block is real symmetric and a classical Jacobi
                // rotation annihilates its off-diagonal.
                let phase = gamma.conj() / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..m {
                    let bp = b[(i, p)];
                    let bq = b[(i, q)] * phase;
                    b[(i, p)] = bp * c - bq * s;
                    b[(i, q)] = bp * s + bq * c;
                }
                for i in 0..n {
                    let vp = v[(i, p)];
                    let vq = v[(i, q)] * phase;
                    v[(i, p)] = vp * c - vq * s;
                    v[(i, q)] = vp * s + vq * c;
                }
                rotated = true;
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged && n > 1 {
        return Err(Error::SvdNoConvergence { sweeps: MAX_SWEEPS, off: last_off });
    }

    // Column norms are the singular values; sort non-increasing.
    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<f64> = (0..n).map(|j| super::vec_norm(&b.col(j))).collect();
    order.sort_by(|&x, &y| norms[y].partial_cmp(&norms[x]).unwrap());

    let singular_values: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let v_sorted = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    let mut u = ComplexMatrix::zeros(m, n);
    for (jj, &j) in order.iter().enumerate() {
        if norms[j] > 0.0 {
            for i in 0..m {
                u[(i, jj)] = b[(i, j)] / norms[j];
            }
        }
    }
    fill_null_columns(&mut u, &singular_values);

    Ok(SvdResult { u, singular_values, v: v_sorted })
}

/// Replaces the U columns belonging to zero singular values with an
/// orthonormal completion so that U always has orthonormal columns.
fn fill_null_columns(u: &mut ComplexMatrix, sigma: &[f64]) {
    let (m, n) = (u.rows(), u.cols());
    for j in 0..n {
        if sigma[j] > 0.0 {
            continue;
        }
        let mut best: Option<(f64, Vec<C64>)> = None;
        for cand in 0..m {
            let mut w = vec![C64::default(); m];
            w[cand] = c64(1.0, 0.0);
            for k in 0..n {
                if k == j || (sigma[k] == 0.0 && k > j) {
                    continue;
                }
                let proj = super::dot_h(&u.col(k), &w);
                for i in 0..m {
                    let uk = u[(i, k)];
                    w[i] -= proj * uk;
                }
            }
            let norm = super::vec_norm(&w);
            if best.as_ref().is_none_or(|(bn, _)| norm > *bn) {
                best = Some((norm, w));
            }
        }
        let (norm, w) = best.expect("m >= 1");
        for i in 0..m {
            u[(i, j)] = w[i] / norm;
        }
    }
}

/// Moore-Penrose pseudoinverse with relative truncation tolerance `rtol`:
/// singular values below `rtol * sigma_max` are dropped.
pub fn pinv(m: &ComplexMatrix, rtol: f64) -> Result<ComplexMatrix> {
    if !(rtol > 0.0 && rtol < 1.0) {
        return Err(Error::InvalidArgument(format!("pinv rtol must be in (0,1), got {rtol}")));
    }
    let dec = svd(m)?;
    let cutoff = rtol * dec.sigma_max();
    let k = dec.singular_values.len();
    let mut out = ComplexMatrix::zeros(m.cols(), m.rows());
    for l in 0..k {
        let s = dec.singular_values[l];
        if s <= cutoff || s == 0.0 {
            continue;
        }
        for i in 0..m.cols() {
            let vs = dec.v[(i, l)] / s;
            for j in 0..m.rows() {
                out[(i, j)] += vs * dec.u[(j, l)].conj();
            }
        }
    }
    Ok(out)
}

/// Default truncation tolerance for pseudoinverses.
pub const PINV_RTOL: f64 = 1e-12;

/// 2-norm condition number `sigma_max / sigma_min`. Returns `+inf` when
/// `sigma_min` underflows below 1e-300; errors on the zero matrix.
pub fn cond2(m: &ComplexMatrix) -> Result<f64> {
    let dec = svd(m)?;
    let smax = dec.sigma_max();
    if smax == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    let smin = dec.sigma_min();
    if smin < 1e-300 {
        return Ok(f64::INFINITY);
    }
    Ok(smax / smin)
}

/// Smallest singular value.
pub fn sigma_min(m: &ComplexMatrix) -> Result<f64> {
    Ok(svd(m)?.sigma_min())
}

/// Number of singular values above `rtol * sigma_max`.
pub fn numerical_rank(m: &ComplexMatrix, rtol: f64) -> Result<usize> {
    let dec = svd(m)?;
    let cutoff = rtol * dec.sigma_max();
    Ok(dec.singular_values.iter().filter(|&&s| s > cutoff && s > 0.0).count())
}
