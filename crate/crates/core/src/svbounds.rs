//! Grotzsch-ring singular-value decay bounds.
//!
//! Cauchy and Loewner matrices over disjoint real node intervals have
//! exponentially decaying singular values:
//! `sigma_{j+k}(C) <= 4 rho*^{-2k} sigma_j(C)` with
//! `rho* = exp(pi^2 / (4 mu(1/sqrt(gamma))))`, `gamma` the absolute
//! cross-ratio of the interval endpoints and `mu` the Grotzsch ring
//! function. Loewner matrices satisfy the same bound with index stride
//! `2k`. Taking j = 1, k = n-1 on a square Cauchy matrix turns the decay
//! bound into the condition-number lower bound `rho*^{2(n-1)} / 4`.

use crate::error::{Error, Result};
use crate::numerics::C64;
use std::f64::consts::PI;

/// Relative accuracy target of the AGM iteration.
const AGM_TOL: f64 = 1e-17;

fn agm(a0: f64, b0: f64) -> f64 {
    let (mut a, mut b) = (a0, b0);
    for _ in 0..60 {
        let an = 0.5 * (a + b);
        let bn = (a * b).sqrt();
        a = an;
        b = bn;
        if (a - b).abs() <= AGM_TOL * a {
            break;
        }
    }
    a
}

/// Complete elliptic integral of the first kind K(r), modulus convention,
/// via the arithmetic-geometric mean: `K(r) = pi / (2 AGM(1, sqrt(1-r^2)))`.
pub fn elliptic_k(r: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::OutOfDomain { value: r, domain: "[0, 1) for K" });
    }
    Ok(PI / (2.0 * agm(1.0, (1.0 - r * r).sqrt())))
}

/// Grotzsch ring function `mu(r) = (pi/2) K(sqrt(1-r^2)) / K(r)`.
///
/// Evaluated as `(pi/2) AGM(1, sqrt(1-r^2)) / AGM(1, r)`: feeding the
/// complementary modulus straight into the second AGM avoids the
/// cancellation in `1 - (sqrt(1-r^2))^2` that would wreck small r.
pub fn grotzsch_mu(r: f64) -> Result<f64> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::OutOfDomain { value: r, domain: "(0, 1) for mu" });
    }
    Ok(PI / 2.0 * agm(1.0, (1.0 - r * r).sqrt()) / agm(1.0, r))
}

/// Geometry of two disjoint real node intervals [a, b] and [c, d] with
/// the absolute cross-ratio `gamma = |(c-a)(d-b) / ((c-b)(d-a))|` that
/// drives the decay rate.
#[derive(Clone, Copy, Debug)]
pub struct IntervalPairGeometry {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub gamma: f64,
    pub mu_value: f64,
}

impl IntervalPairGeometry {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        if !(a <= b && c <= d) {
            return Err(Error::InvalidArgument(format!("malformed intervals [{a},{b}], [{c},{d}]")));
        }
        if b >= c && d >= a {
            // Overlap test for ordered intervals on the line.
            if !(b < c || d < a) {
                return Err(Error::OverlappingIntervals { a, b, c, d });
            }
        }
        let gamma = ((c - a) * (d - b) / ((c - b) * (d - a))).abs();
        let r = 1.0 / gamma.sqrt();
        let mu_value = grotzsch_mu(r)?;
        Ok(IntervalPairGeometry { a, b, c, d, gamma, mu_value })
    }

    /// Extracts intervals from two real node sets: x spans [min x, max x],
    /// y spans [min y, max y]. Complex nodes are rejected; the cited bound
    /// is proved for real intervals only.
    pub fn from_nodes(x: &[C64], y: &[C64]) -> Result<Self> {
        let reals = |v: &[C64], which: &str| -> Result<Vec<f64>> {
            v.iter()
                .map(|z| {
                    if z.im.abs() > 1e-12 * (1.0 + z.re.abs()) {
                        Err(Error::InvalidArgument(format!(
                            "{which} node {z} is complex; the decay bound needs real intervals"
                        )))
                    } else {
                        Ok(z.re)
                    }
                })
                .collect()
        };
        let xr = reals(x, "x")?;
        let yr = reals(y, "y")?;
        let min = |v: &[f64]| v.iter().copied().fold(f64::INFINITY, f64::min);
        let max = |v: &[f64]| v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Self::new(min(&xr), max(&xr), min(&yr), max(&yr))
    }

    /// Per-step decay factor `rho* = exp(pi^2 / (4 mu(1/sqrt(gamma))))`.
    pub fn decay_factor(&self) -> f64 {
        (PI * PI / (4.0 * self.mu_value)).exp()
    }
}

/// Upper bound for `sigma_{j+k}` of a Cauchy matrix over this geometry:
/// `4 rho*^{-2k} sigma_j`.
pub fn cauchy_sv_bound(geom: &IntervalPairGeometry, _j: usize, k: usize, sigma_j: f64) -> Result<f64> {
    if sigma_j < 0.0 {
        return Err(Error::InvalidArgument("sigma_j must be non-negative".into()));
    }
    let rho = geom.decay_factor();
    Ok(4.0 * rho.powi(-2 * k as i32) * sigma_j)
}

/// Same bound for a Loewner matrix, with index stride 2k:
/// `sigma_{j+2k} <= 4 rho*^{-2k} sigma_j`.
pub fn loewner_sv_bound(geom: &IntervalPairGeometry, _j: usize, k: usize, sigma_j: f64) -> Result<f64> {
    cauchy_sv_bound(geom, _j, k, sigma_j)
}

/// Condition-number lower bound for a square order-n Cauchy matrix over
/// the geometry: `kappa_2 >= rho*^{2(n-1)} / 4` (the decay bound at
/// j = 1, k = n-1 rearranged).
pub fn cond_lower_bound(geom: &IntervalPairGeometry, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidArgument("condition bound needs order n >= 2".into()));
    }
    let rho = geom.decay_factor();
    Ok(rho.powi(2 * (n as i32 - 1)) / 4.0)
}

/// Actual-vs-bound decay sequence for a list of singular values: entry i
/// is `(sigma_{1+i} actual, bound from sigma_1 with k = i)` for Cauchy
/// stride or `k = i/2` steps for the Loewner stride (odd offsets reuse
/// the last even step).
pub fn decay_curve(geom: &IntervalPairGeometry, sigma: &[f64], loewner_stride: bool) -> Vec<(f64, f64)> {
    let rho = geom.decay_factor();
    sigma
        .iter()
        .enumerate()
        .map(|(offset, &actual)| {
            let steps = if loewner_stride { offset / 2 } else { offset };
            (actual, 4.0 * rho.powi(-2 * steps as i32) * sigma[0])
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::loewner::{build_loewner, cauchy, TangentialDataSet};
    use crate::numerics::{c64, cond2, svd};
    use crate::systems::{SisoPoleResidue, SystemModel};

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn elliptic_k_special_values() {
        assert!((elliptic_k(0.0).unwrap() - PI / 2.0).abs() < 1e-15);
        // K(1/sqrt(2)) = K'(1/sqrt(2)) at the symmetry point.
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let k = elliptic_k(r).unwrap();
        let kp = elliptic_k((1.0 - r * r).sqrt()).unwrap();
        assert!((k - kp).abs() < 1e-14 * k);
        // Known value K(1/sqrt(2)) = Gamma(1/4)^2 / (4 sqrt(pi)).
        assert!((k - 1.8540746773013719).abs() < 1e-13);
        assert!(elliptic_k(1.0).is_err());
        assert!(elliptic_k(-0.1).is_err());
    }

    #[test]
    fn agm_fixed_point_self_consistency() {
        // At convergence AGM(a, b) has a = b to 1e-15; K recomputed from
        // the converged mean reproduces itself.
        for r in [0.1, 0.5, 0.9, 0.999] {
            let k = elliptic_k(r).unwrap();
            let agm = PI / (2.0 * k);
            // One more AGM step from (agm, agm) is a fixed point.
            let a2 = 0.5 * (agm + agm);
            assert!((a2 - agm).abs() <= 1e-15 * agm);
        }
    }

    #[test]
    fn grotzsch_symmetry_and_identity() {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((grotzsch_mu(r).unwrap() - PI / 2.0).abs() < 1e-14);
        // mu(r) mu(sqrt(1-r^2)) = pi^2 / 4.
        for r in [0.15, 0.4, 0.77, 0.95] {
            let prod = grotzsch_mu(r).unwrap() * grotzsch_mu((1.0 - r * r).sqrt()).unwrap();
            assert!((prod - PI * PI / 4.0).abs() < 1e-12, "r = {r}: {prod}");
        }
        // Small-r asymptote mu(r) -> ln(4/r).
        let r = 1e-6f64;
        let asym = (4.0 / r).ln();
        assert!((grotzsch_mu(r).unwrap() - asym).abs() < 1e-9);
        assert!(grotzsch_mu(0.0).is_err());
        assert!(grotzsch_mu(1.0).is_err());
    }

    #[test]
    fn grotzsch_strictly_decreasing() {
        let mut prev = f64::INFINITY;
        for i in 1..1000 {
            let r = i as f64 / 1000.0;
            let v = grotzsch_mu(r).unwrap();
            assert!(v < prev, "mu not decreasing at r = {r}");
            prev = v;
        }
    }

    #[test]
    fn geometry_construction_and_rejection() {
        let g = IntervalPairGeometry::new(11.0, 13.0, -2.1, -0.1).unwrap();
        assert!(g.gamma > 1.0);
        assert!(IntervalPairGeometry::new(0.0, 2.0, 1.0, 3.0).is_err());
        assert!(IntervalPairGeometry::from_nodes(
            &[c64(0.0, 1.0)],
            &[c64(2.0, 0.0), c64(3.0, 0.0)]
        )
        .is_err());
    }

    #[test]
    fn bound_specializations() {
        let g = IntervalPairGeometry::new(1.0, 3.0, -2.1, -0.1).unwrap();
        // k = 0: bound is 4 sigma_j for both strides.
        assert!((cauchy_sv_bound(&g, 1, 0, 2.5).unwrap() - 10.0).abs() < 1e-12);
        assert!((loewner_sv_bound(&g, 1, 0, 2.5).unwrap() - 10.0).abs() < 1e-12);
        // The Loewner bound at equal k decays over twice the index span,
        // so per index it is weaker: same value, larger index reach.
        let c_bound = cauchy_sv_bound(&g, 1, 3, 1.0).unwrap();
        let l_bound = loewner_sv_bound(&g, 1, 3, 1.0).unwrap();
        assert!((c_bound - l_bound).abs() < 1e-15);
    }

    #[test]
    fn table6_condition_bounds() {
        // mu in [1,3] / [11,13] / [101,103] against poles [-2.1, -0.1];
        // lambda rows shifted by -1. Printed Table values.
        let rows = [
            ((1.0, 3.0), (0.0, 2.0), 1.439e1, 7.443e0, 4.541e1, 1.732e0),
            ((11.0, 13.0), (10.0, 12.0), 1.737e2, 1.696e2, 1.485e2, 1.444e2),
            ((101.0, 103.0), (100.0, 102.0), 1.063e4, 1.063e4, 1.043e4, 1.042e4),
        ];
        let poles = [c64(-2.1, 0.0), c64(-0.1, 0.0)];
        for ((mu_lo, mu_hi), (lam_lo, lam_hi), k_l, bound_l, k_r, bound_r) in rows {
            let mu = [c64(mu_lo, 0.0), c64(mu_hi, 0.0)];
            let lam = [c64(lam_lo, 0.0), c64(lam_hi, 0.0)];
            let actual_l = cond2(&cauchy(&mu, &poles).unwrap()).unwrap();
            let actual_r = cond2(&cauchy(&lam, &poles).unwrap()).unwrap();
            assert!(rel(actual_l, k_l) < 5e-3, "kappa(C_L) = {actual_l}, printed {k_l}");
            assert!(rel(actual_r, k_r) < 5e-3, "kappa(C_R) = {actual_r}");
            let gl = IntervalPairGeometry::new(mu_lo, mu_hi, -2.1, -0.1).unwrap();
            let gr = IntervalPairGeometry::new(lam_lo, lam_hi, -2.1, -0.1).unwrap();
            let bl = cond_lower_bound(&gl, 2).unwrap();
            let br = cond_lower_bound(&gr, 2).unwrap();
            assert!(rel(bl, bound_l) < 5e-3, "bound(kappa(C_L)) = {bl}, printed {bound_l}");
            assert!(rel(br, bound_r) < 5e-3, "bound(kappa(C_R)) = {br}");
            // Lower bound property.
            assert!(bl <= actual_l * (1.0 + 5e-3));
            assert!(br <= actual_r * (1.0 + 5e-3));
        }
    }

    #[test]
    fn decay_bounds_dominate_singular_values() {
        // Ten-pole example, half-half separation: C_{mu,lambda} and the
        // Loewner matrix over disjoint intervals.
        let mu: Vec<C64> = (0..10).map(|i| c64(-10.25 + 0.5 * i as f64, 0.0)).collect();
        let lambda: Vec<C64> = (0..10).map(|i| c64(-5.25 + 0.5 * i as f64, 0.0)).collect();
        let geom = IntervalPairGeometry::from_nodes(&mu, &lambda).unwrap();
        let c = cauchy(&mu, &lambda).unwrap();
        let sv = svd(&c).unwrap().singular_values;
        for j in 1..=10usize {
            for k in 0..=(10 - j) {
                let bound = cauchy_sv_bound(&geom, j, k, sv[j - 1]).unwrap();
                assert!(
                    sv[j + k - 1] <= bound * (1.0 + 1e-12),
                    "sigma_{} = {} > bound {bound}",
                    j + k,
                    sv[j + k - 1]
                );
            }
        }
        let pr = SisoPoleResidue::new(
            (1..=10).map(|i| c64(-(i as f64), 0.0)).collect(),
            vec![c64(1.0, 0.0); 10],
        )
        .unwrap();
        let sys = SystemModel::PoleResidue(pr);
        let data = TangentialDataSet::sample_siso(&sys, mu, lambda).unwrap();
        let quad = build_loewner(&data).unwrap();
        let svl = svd(&quad.l).unwrap().singular_values;
        for j in 1..=10usize {
            let mut k = 0;
            while j + 2 * k <= 10 {
                let bound = loewner_sv_bound(&geom, j, k, svl[j - 1]).unwrap();
                assert!(
                    svl[j + 2 * k - 1] <= bound * (1.0 + 1e-12),
                    "loewner sigma_{} > bound",
                    j + 2 * k
                );
                k += 1;
            }
        }
    }

    #[test]
    fn cond_bound_below_actual_on_random_geometries() {
        // Twenty deterministic disjoint-interval geometries with Chebyshev
        // nodes filling the declared intervals.
        let mut checked = 0;
        for t in 0..20 {
            let gap = 0.5 + 0.35 * t as f64;
            let width = 1.0 + 0.2 * (t % 5) as f64;
            let n = 2 + (t % 4);
            let (a, b) = (0.0, width);
            let (c, d) = (width + gap, 2.0 * width + gap);
            let nodes = |lo: f64, hi: f64| -> Vec<C64> {
                (0..n)
                    .map(|i| {
                        let t = (2.0 * i as f64 + 1.0) * PI / (2.0 * n as f64);
                        c64(0.5 * (lo + hi) + 0.5 * (hi - lo) * t.cos(), 0.0)
                    })
                    .collect()
            };
            let x = nodes(a, b);
            let y = nodes(c, d);
            let geom = IntervalPairGeometry::new(a, b, c, d).unwrap();
            let actual = cond2(&cauchy(&x, &y).unwrap()).unwrap();
            let bound = cond_lower_bound(&geom, n).unwrap();
            assert!(bound <= actual * (1.0 + 1e-9), "t = {t}: bound {bound} vs actual {actual}");
            checked += 1;
        }
        assert_eq!(checked, 20);
    }
}
