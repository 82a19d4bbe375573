//! Eigenvalues of small complex matrices and matrix pencils.
//!
//! `eig_small` runs a shifted QR iteration on the Hessenberg form with
//! Wilkinson shifts. `generalized_eig` reduces the pencil through a pivoted
//! LU solve, then polishes each eigenpair with inverse iteration on the
//! shifted pencil and a Rayleigh-quotient update.

use super::{c64, cond2, C64, ComplexMatrix, Lu};
use crate::error::{Error, Result};

/// Hard cap on the matrix order accepted by the eigensolvers.
pub const MAX_EIG_ORDER: usize = 32;

/// Eigenvalues of a square complex matrix of order <= 32, unordered.
pub fn eig_small(m: &ComplexMatrix) -> Result<Vec<C64>> {
    if !m.is_square() {
        return Err(Error::Dimension(format!("eig needs a square matrix, got {}x{}", m.rows(), m.cols())));
    }
    if m.rows() > MAX_EIG_ORDER {
        return Err(Error::InvalidArgument(format!(
            "eig supports order <= {MAX_EIG_ORDER}, got {}",
            m.rows()
        )));
    }
    m.check_finite()?;
    let n = m.rows();
    if n == 1 {
        return Ok(vec![m[(0, 0)]]);
    }
    let mut h = hessenberg(m);
    let mut values = Vec::with_capacity(n);

    let cap = 40 * n.max(3);
    let mut total_iters = 0usize;
    let mut stalled = 0usize;
    let mut hi = n - 1;
    loop {
        // Deflate converged trailing blocks.
        loop {
            if hi == 0 {
                values.push(h[(0, 0)]);
                return Ok(values);
            }
            if subdiag_negligible(&h, hi) {
                values.push(h[(hi, hi)]);
                hi -= 1;
                stalled = 0;
                continue;
            }
            if hi == 1 || subdiag_negligible(&h, hi - 1) {
                let (l1, l2) = eig2(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)]);
                values.push(l1);
                values.push(l2);
                if hi == 1 {
                    return Ok(values);
                }
                hi -= 2;
                stalled = 0;
                continue;
            }
            break;
        }

        total_iters += 1;
        stalled += 1;
        if total_iters > cap {
            return Err(Error::EigNoConvergence { iterations: total_iters });
        }

        // Active window [lo, hi]: walk up until a negligible subdiagonal.
        let mut lo = hi;
        while lo > 0 && !subdiag_negligible(&h, lo) {
            lo -= 1;
        }

        let shift = if stalled.is_multiple_of(12) {
            // Exceptional shift to break rare cycling.
            h[(hi, hi)] + c64(0.75 * h[(hi, hi - 1)].norm(), 0.0)
        } else {
            wilkinson_shift(&h, hi)
        };
        qr_step(&mut h, lo, hi, shift);
    }
}

fn subdiag_negligible(h: &ComplexMatrix, i: usize) -> bool {
    let tol = f64::EPSILON * (h[(i - 1, i - 1)].norm() + h[(i, i)].norm());
    h[(i, i - 1)].norm() <= tol
}

/// Eigenvalues of [[a, b], [c, d]].
fn eig2(a: C64, b: C64, c: C64, d: C64) -> (C64, C64) {
    let mid = (a + d) * 0.5;
    let disc = ((a - d) * 0.5 * ((a - d) * 0.5) + b * c).sqrt();
    (mid + disc, mid - disc)
}

/// Eigenvalue of the trailing 2x2 block closest to the corner entry.
fn wilkinson_shift(h: &ComplexMatrix, hi: usize) -> C64 {
    let (l1, l2) = eig2(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)]);
    let corner = h[(hi, hi)];
    if (l1 - corner).norm() <= (l2 - corner).norm() {
        l1
    } else {
        l2
    }
}

/// Reduction to upper Hessenberg form by Householder similarity.
fn hessenberg(m: &ComplexMatrix) -> ComplexMatrix {
    let n = m.rows();
    let mut h = m.clone();
    for k in 0..n.saturating_sub(2) {
        let mut x: Vec<C64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let xnorm = super::vec_norm(&x);
        if xnorm == 0.0 {
            continue;
        }
        // alpha = -exp(i arg(x0)) * |x| avoids cancellation in v = x - alpha e1.
        let phase = if x[0].norm() > 0.0 { x[0] / x[0].norm() } else { c64(1.0, 0.0) };
        let alpha = -phase * xnorm;
        x[0] -= alpha;
        let vnorm = super::vec_norm(&x);
        if vnorm == 0.0 {
            continue;
        }
        let v: Vec<C64> = x.iter().map(|z| z / vnorm).collect();
        // Left: rows k+1..n get (I - 2 v v^H).
        for j in 0..n {
            let w: C64 = (0..v.len()).map(|l| v[l].conj() * h[(k + 1 + l, j)]).sum();
            for l in 0..v.len() {
                let upd = 2.0 * v[l] * w;
                h[(k + 1 + l, j)] -= upd;
            }
        }
        // Right: columns k+1..n.
        for i in 0..n {
            let w: C64 = (0..v.len()).map(|l| h[(i, k + 1 + l)] * v[l]).sum();
            for l in 0..v.len() {
                let upd = 2.0 * w * v[l].conj();
                h[(i, k + 1 + l)] -= upd;
            }
        }
        // Zero out the annihilated part explicitly.
        for i in k + 2..n {
            h[(i, k)] = C64::default();
        }
    }
    h
}

/// One explicit shifted QR step on the window [lo, hi] of a Hessenberg
/// matrix: H - sI = QR, then H <- RQ + sI via Givens rotations.
fn qr_step(h: &mut ComplexMatrix, lo: usize, hi: usize, shift: C64) {
    for i in lo..=hi {
        h[(i, i)] -= shift;
    }
    let mut rotations = Vec::with_capacity(hi - lo);
    for i in lo..hi {
        let (c, s) = givens(h[(i, i)], h[(i + 1, i)]);
        for j in i..=hi {
            let a = h[(i, j)];
            let b = h[(i + 1, j)];
            h[(i, j)] = a * c + b * s;
            h[(i + 1, j)] = -s.conj() * a + b * c;
        }
        rotations.push((i, c, s));
    }
    for &(i, c, s) in &rotations {
        let row_end = (i + 2).min(hi + 1);
        for r in lo..row_end.max(lo) {
            let a = h[(r, i)];
            let b = h[(r, i + 1)];
            h[(r, i)] = a * c + b * s.conj();
            h[(r, i + 1)] = -a * s + b * c;
        }
    }
    for i in lo..=hi {
        h[(i, i)] += shift;
    }
}

/// Unitary [[c, s], [-conj(s), c]] with real c mapping (f, g) to (r, 0).
fn givens(f: C64, g: C64) -> (f64, C64) {
    if g.norm() == 0.0 {
        return (1.0, C64::default());
    }
    if f.norm() == 0.0 {
        return (0.0, c64(1.0, 0.0));
    }
    let h = (f.norm_sqr() + g.norm_sqr()).sqrt();
    let c = f.norm() / h;
    let s = (f / f.norm()) * g.conj() / h;
    (c, s)
}

/// Generalized eigendecomposition of the pencil (A, E).
///
/// Right vectors satisfy `A q = lambda E q`, left vectors `p^T A = lambda
/// p^T E` (plain transpose); all are unit 2-norm columns. Values come out
/// unordered; match them to references by nearest distance.
#[derive(Clone, Debug)]
pub struct GeneralizedEig {
    pub values: Vec<C64>,
    pub right: ComplexMatrix,
    pub left: ComplexMatrix,
}

pub fn generalized_eig(a: &ComplexMatrix, e: &ComplexMatrix) -> Result<GeneralizedEig> {
    if !a.is_square() || !e.is_square() || a.rows() != e.rows() {
        return Err(Error::Dimension(format!(
            "pencil needs square factors of equal order, got {}x{} and {}x{}",
            a.rows(),
            a.cols(),
            e.rows(),
            e.cols()
        )));
    }
    let cond_e = cond2(e)?;
    if !cond_e.is_finite() || cond_e >= 1e12 {
        return Err(Error::SingularPencilFactor { cond: cond_e });
    }
    let n = a.rows();
    let t = Lu::new(e)?.solve_mat(a);
    let raw = eig_small(&t)?;

    let scale = a.norm_fro() + e.norm_fro();
    let mut values = Vec::with_capacity(n);
    let mut right = ComplexMatrix::zeros(n, n);
    let mut left = ComplexMatrix::zeros(n, n);
    for (idx, &lam0) in raw.iter().enumerate() {
        let (lam, q, p) = polish_eigenpair(a, e, lam0, idx, scale);
        values.push(lam);
        for i in 0..n {
            right[(i, idx)] = q[i];
            left[(i, idx)] = p[i];
        }
    }
    Ok(GeneralizedEig { values, right, left })
}

/// Inverse iteration on (A - lambda E) with a Rayleigh-quotient update in
/// between. Two short passes are enough at these orders; the repair floor
/// keeps the nearly singular solves finite.
fn polish_eigenpair(
    a: &ComplexMatrix,
    e: &ComplexMatrix,
    lam0: C64,
    index: usize,
    scale: f64,
) -> (C64, Vec<C64>, Vec<C64>) {
    let n = a.rows();
    let mut lam = lam0;
    let mut q = pseudo_random_unit(n, 2 * index as u64 + 1);
    let mut p = pseudo_random_unit(n, 2 * index as u64 + 2);
    for _pass in 0..2 {
        let shifted = a.sub(&e.scale(lam));
        let repair = f64::EPSILON * (scale + lam.norm() * e.norm_fro());
        if let Ok(f) = Lu::with_pivot_repair(&shifted, repair) {
            q = normalize(&f.solve_vec(&e.mul_vec(&q)));
            q = normalize(&f.solve_vec(&e.mul_vec(&q)));
        }
        if let Ok(ft) = Lu::with_pivot_repair(&shifted.transpose(), repair) {
            p = normalize(&ft.solve_vec(&e.transpose().mul_vec(&p)));
            p = normalize(&ft.solve_vec(&e.transpose().mul_vec(&p)));
        }
        let den = super::dot_t(&p, &e.mul_vec(&q));
        if den.norm() > 1e-280 {
            let candidate = super::dot_t(&p, &a.mul_vec(&q)) / den;
            // Refinement may not jump away from the converged QR value.
            if (candidate - lam).norm() <= 1e-2 * (1.0 + lam.norm()) {
                lam = candidate;
            }
        }
    }
    (lam, q, p)
}

/// Polishes one eigenvalue of the pencil (A, E) from the initial guess
/// `z0` by repeated inverse iteration and Rayleigh-quotient updates.
/// Used where a pencil eigenvalue is needed to the attainable f64 floor,
/// e.g. as the ground truth in perturbation experiments.
pub fn refine_pencil_eigenvalue(
    a: &ComplexMatrix,
    e: &ComplexMatrix,
    z0: C64,
    passes: usize,
) -> C64 {
    let n = a.rows();
    let mut z = z0;
    let mut x = pseudo_random_unit(n, 17);
    let mut y = pseudo_random_unit(n, 29);
    let scale = a.norm_fro() + e.norm_fro();
    for _ in 0..passes {
        let shifted = a.sub(&e.scale(z));
        let repair = f64::EPSILON * (scale + z.norm() * e.norm_fro());
        if let Ok(f) = Lu::with_pivot_repair(&shifted, repair) {
            x = normalize(&f.solve_vec(&e.mul_vec(&x)));
        }
        if let Ok(ft) = Lu::with_pivot_repair(&shifted.transpose(), repair) {
            y = normalize(&ft.solve_vec(&e.transpose().mul_vec(&y)));
        }
        let den = super::dot_t(&y, &e.mul_vec(&x));
        if den.norm() > 1e-280 {
            let candidate = super::dot_t(&y, &a.mul_vec(&x)) / den;
            if (candidate - z).norm() <= 1e-2 * (1.0 + z.norm()) {
                z = candidate;
            }
        }
    }
    z
}

fn normalize(x: &[C64]) -> Vec<C64> {
    let n = super::vec_norm(x);
    if n == 0.0 {
        return x.to_vec();
    }
    x.iter().map(|z| z / n).collect()
}

/// Deterministic quasi-random start vector for inverse iteration.
fn pseudo_random_unit(n: usize, seed: u64) -> Vec<C64> {
    let mut state = seed.wrapping_mul(0x9E3779B97F4A7C15).wrapping_add(0x2545F4914F6CDD1D);
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    };
    normalize(&(0..n).map(|_| c64(next(), next())).collect::<Vec<_>>())
}
