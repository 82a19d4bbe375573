//! eps-(nu, delta) pseudospectra of matrix pencils.
//!
//! The grid stores `eps(z) = sigma_min(zE - A) / (delta + nu |z|)`: the
//! smallest perturbation scale at which z becomes an eigenvalue of some
//! pencil `(A + eps D_A, E + eps D_E)` with `||D_E|| <= nu`,
//! `||D_A|| <= delta`. Zeros of the grid are the pencil eigenvalues.
//! `slope_estimate` samples random perturbation directions and measures
//! how fast an eigenvalue moves per unit eps; the unstructured
//! sensitivity rho is an upper bound for that slope.

use crate::error::{Error, Result};
use crate::numerics::{c64, sigma_min, C64, ComplexMatrix, RealMatrix};
use crate::rng::NoiseStream;
use serde::{Deserialize, Serialize};

/// Rectangular grid region in the complex plane.
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
pub struct GridRegion {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl GridRegion {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self> {
        if !(re_min < re_max && im_min < im_max) {
            return Err(Error::InvalidArgument(format!(
                "empty grid region [{re_min}, {re_max}] x [{im_min}, {im_max}]"
            )));
        }
        Ok(GridRegion { re_min, re_max, im_min, im_max })
    }
}

/// Sampled pseudospectra surface; `values` is row-major with rows running
/// over the imaginary axis (iy) and columns over the real axis (ix).
#[derive(Clone, Debug)]
pub struct PseudospectraGrid {
    pub region: GridRegion,
    pub nx: usize,
    pub ny: usize,
    pub nu: f64,
    pub delta: f64,
    pub values: RealMatrix,
}

impl PseudospectraGrid {
    pub fn x_coord(&self, ix: usize) -> f64 {
        self.region.re_min
            + (self.region.re_max - self.region.re_min) * ix as f64 / (self.nx - 1) as f64
    }

    pub fn y_coord(&self, iy: usize) -> f64 {
        self.region.im_min
            + (self.region.im_max - self.region.im_min) * iy as f64 / (self.ny - 1) as f64
    }

    pub fn cell_diameter(&self) -> f64 {
        let dx = (self.region.re_max - self.region.re_min) / (self.nx - 1) as f64;
        let dy = (self.region.im_max - self.region.im_min) / (self.ny - 1) as f64;
        (dx * dx + dy * dy).sqrt()
    }

    /// Grid point with the smallest eps inside a disk around `center`.
    pub fn local_minimum(&self, center: C64, radius: f64) -> Option<(C64, f64)> {
        let mut best: Option<(C64, f64)> = None;
        for iy in 0..self.ny {
            for ix in 0..self.nx {
                let z = c64(self.x_coord(ix), self.y_coord(iy));
                if (z - center).norm() > radius {
                    continue;
                }
                let v = self.values[(iy, ix)];
                if best.is_none_or(|(_, bv)| v < bv) {
                    best = Some((z, v));
                }
            }
        }
        best
    }
}

/// Evaluates the pseudospectra surface of the pencil (A, E) on a uniform
/// grid. `nu` and `delta` are non-negative and not both zero; the
/// conventional defaults are `nu = ||E||_2`, `delta = ||A||_2`.
pub fn grid_epsilon(
    a: &ComplexMatrix,
    e: &ComplexMatrix,
    region: GridRegion,
    nx: usize,
    ny: usize,
    nu: f64,
    delta: f64,
) -> Result<PseudospectraGrid> {
    if !a.is_square() || !e.is_square() || a.rows() != e.rows() {
        return Err(Error::Dimension("pseudospectra need a square pencil".into()));
    }
    if nx < 2 || ny < 2 {
        return Err(Error::InvalidArgument("grid needs nx, ny >= 2".into()));
    }
    if !(nu >= 0.0 && delta >= 0.0) || (nu == 0.0 && delta == 0.0) {
        return Err(Error::InvalidArgument("nu, delta must be >= 0 and not both zero".into()));
    }
    let mut values = RealMatrix::zeros(ny, nx);
    for iy in 0..ny {
        let y = region.im_min + (region.im_max - region.im_min) * iy as f64 / (ny - 1) as f64;
        for ix in 0..nx {
            let x = region.re_min + (region.re_max - region.re_min) * ix as f64 / (nx - 1) as f64;
            let z = c64(x, y);
            let pencil = e.scale(z).sub(a);
            values[(iy, ix)] = sigma_min(&pencil)? / (delta + nu * z.norm());
        }
    }
    Ok(PseudospectraGrid { region, nx, ny, nu, delta, values })
}

/// Default perturbation scales matching the rho weight convention.
pub fn default_scales(a: &ComplexMatrix, e: &ComplexMatrix) -> Result<(f64, f64)> {
    Ok((e.norm_two()?, a.norm_two()?))
}

// ---------------------------------------------------------------------------
// Contours (marching squares)
// ---------------------------------------------------------------------------

/// One extracted iso-line of the pseudospectra surface.
#[derive(Clone, Debug)]
pub struct ContourPolyline {
    pub level: f64,
    pub points: Vec<C64>,
}

/// Marching-squares contour extraction at the requested levels. Segments
/// sharing endpoints are chained into polylines; output order is
/// deterministic (level, then scan order).
pub fn contours(grid: &PseudospectraGrid, levels: &[f64]) -> Vec<ContourPolyline> {
    let mut out = Vec::new();
    for &level in levels {
        let mut segments: Vec<(C64, C64)> = Vec::new();
        for iy in 0..grid.ny - 1 {
            for ix in 0..grid.nx - 1 {
                let corners = [
                    (grid.x_coord(ix), grid.y_coord(iy), grid.values[(iy, ix)]),
                    (grid.x_coord(ix + 1), grid.y_coord(iy), grid.values[(iy, ix + 1)]),
                    (grid.x_coord(ix + 1), grid.y_coord(iy + 1), grid.values[(iy + 1, ix + 1)]),
                    (grid.x_coord(ix), grid.y_coord(iy + 1), grid.values[(iy + 1, ix)]),
                ];
                let mut crossings: Vec<C64> = Vec::new();
                for s in 0..4 {
                    let (x0, y0, v0) = corners[s];
                    let (x1, y1, v1) = corners[(s + 1) % 4];
                    if (v0 - level) * (v1 - level) < 0.0 {
                        let t = (level - v0) / (v1 - v0);
                        crossings.push(c64(x0 + t * (x1 - x0), y0 + t * (y1 - y0)));
                    }
                }
                // Ambiguous saddle cells (4 crossings) are split pairwise
                // in scan order; fine at plotting resolution.
                let mut it = crossings.chunks_exact(2);
                for pair in &mut it {
                    segments.push((pair[0], pair[1]));
                }
            }
        }
        out.extend(chain_segments(level, segments, grid.cell_diameter() * 1e-9));
    }
    out
}

fn chain_segments(level: f64, mut segments: Vec<(C64, C64)>, tol: f64) -> Vec<ContourPolyline> {
    let mut polylines = Vec::new();
    while let Some((a, b)) = segments.pop() {
        let mut points = vec![a, b];
        loop {
            let tail = *points.last().unwrap();
            let mut extended = false;
            for i in 0..segments.len() {
                let (s0, s1) = segments[i];
                if (s0 - tail).norm() <= tol {
                    points.push(s1);
                    segments.swap_remove(i);
                    extended = true;
                    break;
                }
                if (s1 - tail).norm() <= tol {
                    points.push(s0);
                    segments.swap_remove(i);
                    extended = true;
                    break;
                }
            }
            if !extended {
                break;
            }
        }
        polylines.push(ContourPolyline { level, points });
    }
    polylines.reverse();
    polylines
}

// ---------------------------------------------------------------------------
// Slope sampling
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct SlopeEstimate {
    /// Largest finite-difference slope over the sampled directions.
    pub xi_max: f64,
    /// Slope of every sampled direction, in draw order.
    pub xi_samples: Vec<f64>,
}

/// Finite-difference slope of the pseudospectra near `eigenvalue`:
/// for each sampled direction pair (`||D_E||_2 = nu`, `||D_A||_2 = delta`)
/// the matched eigenvalue of the perturbed pencil is tracked at
/// `eps_1 < eps_2` and `xi = |pi(eps_2) - pi(eps_1)| / (eps_2 - eps_1)`.
/// The supremum over all directions is the sensitivity rho.
#[allow(clippy::too_many_arguments)]
pub fn slope_estimate(
    a: &ComplexMatrix,
    e: &ComplexMatrix,
    eigenvalue: C64,
    eps: (f64, f64),
    nu: f64,
    delta: f64,
    num_directions: usize,
    seed: u64,
) -> Result<SlopeEstimate> {
    let (eps1, eps2) = eps;
    if !(eps2 > eps1 && eps1 > 0.0 && eps2 <= 1e-4) {
        return Err(Error::InvalidArgument(format!(
            "need 0 < eps1 < eps2 <= 1e-4, got ({eps1}, {eps2})"
        )));
    }
    if num_directions == 0 {
        return Err(Error::InvalidArgument("need at least one direction".into()));
    }
    let n = a.rows();
    let mut xi_samples = Vec::with_capacity(num_directions);
    // Matching sanity radius: other eigenvalues must stay distinguishable.
    let base = crate::numerics::generalized_eig(a, e)?;
    let mut min_gap = f64::INFINITY;
    for &v in &base.values {
        let d = (v - eigenvalue).norm();
        if d > 1e-9 {
            min_gap = min_gap.min(d);
        }
    }
    for dir in 0..num_directions {
        let mut stream = NoiseStream::new(seed, dir as u64);
        let mut d_e = stream.gaussian_matrix(n, n);
        let mut d_a = stream.gaussian_matrix(n, n);
        let ne = d_e.norm_two()?;
        let na = d_a.norm_two()?;
        if ne > 0.0 {
            d_e = d_e.scale(c64(nu / ne, 0.0));
        }
        if na > 0.0 {
            d_a = d_a.scale(c64(delta / na, 0.0));
        }
        let mut shifted = [C64::default(); 2];
        for (slot, &ep) in [eps1, eps2].iter().enumerate() {
            let pa = a.add(&d_a.scale(c64(ep, 0.0)));
            let pe = e.add(&d_e.scale(c64(ep, 0.0)));
            let eig = crate::numerics::generalized_eig(&pa, &pe)?;
            let idx = crate::loewner::greedy_match(&[eigenvalue], &eig.values)?;
            let matched = eig.values[idx[0]];
            if (matched - eigenvalue).norm() > 0.5 * min_gap {
                return Err(Error::EigenvalueMatching(format!(
                    "perturbed eigenvalue {matched} is no longer attributable to {eigenvalue}"
                )));
            }
            shifted[slot] = matched;
        }
        xi_samples.push((shifted[1] - shifted[0]).norm() / (eps2 - eps1));
    }
    let xi_max = xi_samples.iter().copied().fold(0.0, f64::max);
    Ok(SlopeEstimate { xi_max, xi_samples })
}
