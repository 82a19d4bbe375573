//! Eigenvalue sensitivities of the Loewner pencil.
//!
//! First-order perturbation of a pencil eigenvalue
//! `pi^(1) = p^T (D_Ls - pi D_L) q / (p^T L q)` specializes two ways:
//!
//! * unstructured: norm-bounded perturbations give the per-pole
//!   sensitivity `rho_i = ||p_i|| (|pi_i| ||L|| + ||Ls||) ||q_i|| / |gamma_i|`
//!   with bounds driven by the condition numbers of the Cauchy factors;
//! * structured: multiplicative measurement noise
//!   `vbar = v (1 + eps)` makes the perturbation pencil itself a Loewner
//!   matrix, and `pi_i^(1) = eps^T S_i` with explicit S (distinct points)
//!   or T (same points, value + derivative) matrices. `eta_i` is the
//!   column norm of |S| and predicts the Gaussian pole scatter
//!   `std(pi_i^(1)) = sigma eta_i`.
//!
//! Monte Carlo rebuilds noisy pencils against these predictions, and
//! `distance_scaling` measures the O(d^{4n-4}) / O(d^{4n-2}) growth of
//! rho and eta as the data cluster moves away from the poles.

use crate::error::{Error, Result};
use crate::loewner::{
    build_hermite_loewner, build_loewner, cauchy, cauchy_eigenvectors, cauchy_zero_diag,
    greedy_match, HermiteDataSet, LoewnerQuadruple, TangentialDataSet,
};
use crate::numerics::{
    c64, dot_t, pinv, vec_norm, C64, ComplexMatrix, RealMatrix, PINV_RTOL,
};
use crate::rng::NoiseStream;
use crate::systems::{SisoPoleResidue, SystemModel};

/// Eigenvalue of the pencil with its left/right eigenvectors in the
/// residue-normalized scaling `p^T L q = -gamma`.
#[derive(Clone, Debug)]
pub struct EigenTriple {
    pub value: C64,
    pub right: Vec<C64>,
    pub left: Vec<C64>,
    pub residue: C64,
}

/// A SISO pole-residue model with sampled distinct-point data and the
/// derived pencil, Cauchy factors and eigen-triples; the working context
/// for every sensitivity computation.
#[derive(Clone, Debug)]
pub struct SisoPencilContext {
    pub system: SisoPoleResidue,
    pub data: TangentialDataSet,
    pub quad: LoewnerQuadruple,
    pub c_mu_pi: ComplexMatrix,
    pub c_lambda_pi: ComplexMatrix,
    pub triples: Vec<EigenTriple>,
}

impl SisoPencilContext {
    pub fn new(pr: &SisoPoleResidue, mu: Vec<C64>, lambda: Vec<C64>) -> Result<Self> {
        let sys = SystemModel::PoleResidue(pr.clone());
        let data = TangentialDataSet::sample_siso(&sys, mu, lambda).map_err(|e| match e {
            Error::CoincidentNodes { .. } => Error::SharedInterpolationPoints,
            other => other,
        })?;
        let quad = build_loewner(&data)?;
        let c_mu_pi = cauchy(data.mu(), pr.poles())?;
        let c_lambda_pi = cauchy(data.lambda(), pr.poles())?;
        let (q_mat, p_mat) = cauchy_eigenvectors(pr, data.mu(), data.lambda())?;
        let triples = (0..pr.order())
            .map(|i| EigenTriple {
                value: pr.poles()[i],
                right: q_mat.col(i),
                left: p_mat.col(i),
                residue: pr.residues()[i],
            })
            .collect();
        Ok(SisoPencilContext { system: pr.clone(), data, quad, c_mu_pi, c_lambda_pi, triples })
    }

    pub fn order(&self) -> usize {
        self.system.order()
    }
}

/// Same-point (Hermite) counterpart; left and right eigenvectors coincide.
#[derive(Clone, Debug)]
pub struct HermitePencilContext {
    pub system: SisoPoleResidue,
    pub data: HermiteDataSet,
    pub quad: LoewnerQuadruple,
    pub c_mu_pi: ComplexMatrix,
    pub triples: Vec<EigenTriple>,
}

impl HermitePencilContext {
    pub fn new(pr: &SisoPoleResidue, mu: Vec<C64>) -> Result<Self> {
        let sys = SystemModel::PoleResidue(pr.clone());
        let data = HermiteDataSet::sample(&sys, mu)?;
        let quad = build_hermite_loewner(&data)?;
        let c_mu_pi = cauchy(data.mu(), pr.poles())?;
        let q_mat = pinv(&c_mu_pi.transpose(), PINV_RTOL)?;
        let triples = (0..pr.order())
            .map(|i| EigenTriple {
                value: pr.poles()[i],
                right: q_mat.col(i),
                left: q_mat.col(i),
                residue: pr.residues()[i],
            })
            .collect();
        Ok(HermitePencilContext { system: pr.clone(), data, quad, c_mu_pi, triples })
    }
}

// ---------------------------------------------------------------------------
// First-order shift
// ---------------------------------------------------------------------------

/// `pi^(1) = p^T (D_Ls - pi D_L) q / (p^T L q)`.
pub fn first_order_shift(
    triple: &EigenTriple,
    l: &ComplexMatrix,
    dl: &ComplexMatrix,
    dls: &ComplexMatrix,
) -> Result<C64> {
    let denom = dot_t(&triple.left, &l.mul_vec(&triple.right));
    let threshold = 1e-14 * l.norm_fro();
    if denom.norm() <= threshold {
        return Err(Error::DefectiveEigenpair { denominator: denom.norm(), threshold });
    }
    let num_mat = dls.sub(&dl.scale(triple.value));
    let numer = dot_t(&triple.left, &num_mat.mul_vec(&triple.right));
    Ok(numer / denom)
}

// ---------------------------------------------------------------------------
// Unstructured sensitivity rho
// ---------------------------------------------------------------------------

/// Per-pole unstructured sensitivities with their condition-number bounds.
#[derive(Clone, Debug)]
pub struct UnstructuredReport {
    pub poles: Vec<C64>,
    pub rho: Vec<f64>,
    pub zeta: Vec<f64>,
    pub bound_per_pole: Vec<f64>,
    pub bound_l2: f64,
    pub bound_l1: f64,
    pub rho_l2: f64,
    pub rho_l1: f64,
    pub cond_c_mu_pi: f64,
    pub cond_c_lambda_pi: f64,
    /// (omega_0, omega_1) actually used.
    pub weights: (f64, f64),
}

/// Computes `rho_i = (|pi_i| w0 + w1) ||p_i|| ||q_i|| / |gamma_i|` with the
/// default weights `w0 = ||L||_2`, `w1 = ||Ls||_2`, plus the three bounds:
/// per-pole `zeta_i k(C_mu,pi) k(C_lam,pi)`, the l2 bound on the whole
/// vector, and the half-sum Frobenius l1 bound.
pub fn rho_unstructured(ctx: &SisoPencilContext, weights: Option<(f64, f64)>) -> Result<UnstructuredReport> {
    let n = ctx.order();
    let w0 = weights.map_or_else(|| ctx.quad.l.norm_two(), |w| Ok(w.0))?;
    let w1 = weights.map_or_else(|| ctx.quad.ls.norm_two(), |w| Ok(w.1))?;
    let gammas = ctx.system.residues();
    let poles = ctx.system.poles();
    for (i, g) in gammas.iter().enumerate() {
        if g.norm() < 1e-14 {
            return Err(Error::VanishingResidue { index: i, magnitude: g.norm() });
        }
    }
    let mut rho = Vec::with_capacity(n);
    for t in &ctx.triples {
        rho.push((t.value.norm() * w0 + w1) * vec_norm(&t.left) * vec_norm(&t.right) / t.residue.norm());
    }
    let gamma_max = gammas.iter().map(|g| g.norm()).fold(0.0, f64::max);
    let pole_gamma_max = poles.iter().zip(gammas).map(|(p, g)| (p * g).norm()).fold(0.0, f64::max);
    let zeta: Vec<f64> = (0..n)
        .map(|i| (poles[i].norm() * gamma_max + pole_gamma_max) / gammas[i].norm())
        .collect();
    let cond_mu = crate::numerics::cond2(&ctx.c_mu_pi)?;
    let cond_lambda = crate::numerics::cond2(&ctx.c_lambda_pi)?;
    let kk = cond_mu * cond_lambda;
    let bound_per_pole: Vec<f64> = zeta.iter().map(|z| z * kk).collect();
    let bound_l2 = zeta.iter().map(|z| z * z).sum::<f64>().sqrt() * kk;
    let zeta_max = zeta.iter().copied().fold(0.0, f64::max);
    let pinv_mu_fro = pinv(&ctx.c_mu_pi, PINV_RTOL)?.norm_fro();
    let pinv_lambda_fro = pinv(&ctx.c_lambda_pi, PINV_RTOL)?.norm_fro();
    let norm_mu = ctx.c_mu_pi.norm_two()?;
    let norm_lambda = ctx.c_lambda_pi.norm_two()?;
    let bound_l1 = 0.5
        * zeta_max
        * (norm_mu * norm_mu * pinv_mu_fro * pinv_mu_fro
            + norm_lambda * norm_lambda * pinv_lambda_fro * pinv_lambda_fro);
    let rho_l2 = rho.iter().map(|r| r * r).sum::<f64>().sqrt();
    let rho_l1 = rho.iter().sum();
    Ok(UnstructuredReport {
        poles: poles.to_vec(),
        rho,
        zeta,
        bound_per_pole,
        bound_l2,
        bound_l1,
        rho_l2,
        rho_l1,
        cond_c_mu_pi: cond_mu,
        cond_c_lambda_pi: cond_lambda,
        weights: (w0, w1),
    })
}

// ---------------------------------------------------------------------------
// Structured sensitivity: S and T matrices
// ---------------------------------------------------------------------------

/// Distinct-point structured sensitivity matrices. Column i:
/// `S_mu e_i = (1/gamma_i) diag(p_i) (pi_i I - M) V C_{mu,lambda} q_i`,
/// `S_lam e_i = (1/gamma_i) diag(q_i) (pi_i I - Lam) W C_{lambda,mu} p_i`.
pub fn structured_s(ctx: &SisoPencilContext) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let q = ctx.data.q();
    let k = ctx.data.k();
    let n = ctx.order();
    let mu = ctx.data.mu();
    let lambda = ctx.data.lambda();
    let v = ctx.data.siso_left_values();
    let w = ctx.data.siso_right_values();
    let c_mu_lambda = cauchy(mu, lambda)?;
    let c_lambda_mu = cauchy(lambda, mu)?;
    let mut s_mu = ComplexMatrix::zeros(q, n);
    let mut s_lambda = ComplexMatrix::zeros(k, n);
    for (i, t) in ctx.triples.iter().enumerate() {
        let inv_gamma = t.residue.inv();
        // diag(p)(pi I - M) V C q, entrywise.
        let cq = c_mu_lambda.mul_vec(&t.right);
        for j in 0..q {
            s_mu[(j, i)] = inv_gamma * t.left[j] * (t.value - mu[j]) * v[j] * cq[j];
        }
        let cp = c_lambda_mu.mul_vec(&t.left);
        for j in 0..k {
            s_lambda[(j, i)] = inv_gamma * t.right[j] * (t.value - lambda[j]) * w[j] * cp[j];
        }
    }
    Ok((s_mu, s_lambda))
}

/// Same-point structured sensitivity matrices. Column i:
/// `T_mu e_i = (1/gamma_i) [2 diag(q_i)(pi_i I - M) V C_{mu,mu} q_i - diag(q_i) V q_i]`,
/// `T_mu' e_i = (1/gamma_i) diag(q_i)(pi_i I - M) V' q_i`,
/// where `C_{mu,mu}` has an exactly zero diagonal.
pub fn structured_t(ctx: &HermitePencilContext) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let q = ctx.data.q();
    let n = ctx.system.order();
    let mu = ctx.data.mu();
    let v = ctx.data.values();
    let vp = ctx.data.derivatives();
    let c_mm = cauchy_zero_diag(mu)?;
    let mut t_mu = ComplexMatrix::zeros(q, n);
    let mut t_mu_prime = ComplexMatrix::zeros(q, n);
    for (i, t) in ctx.triples.iter().enumerate() {
        let inv_gamma = t.residue.inv();
        let cq = c_mm.mul_vec(&t.right);
        for j in 0..q {
            let qj = t.right[j];
            t_mu[(j, i)] = inv_gamma * (2.0 * qj * (t.value - mu[j]) * v[j] * cq[j] - qj * v[j] * t.right[j]);
            t_mu_prime[(j, i)] = inv_gamma * qj * (t.value - mu[j]) * vp[j] * t.right[j];
        }
    }
    Ok((t_mu, t_mu_prime))
}

// ---------------------------------------------------------------------------
// Eta report
// ---------------------------------------------------------------------------

/// Which structured matrices a report was built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StructuredKind {
    /// Distinct points: blocks are left (mu) and right (lambda) values.
    DistinctPoints,
    /// Same points: blocks are values and derivatives.
    SamePoint,
}

/// Entry-wise moduli N of the structured matrices, the per-pole column
/// norms eta, optional measurement-normalized moduli, and Gaussian
/// standard-deviation predictions `sigma * eta_i` per requested sigma.
#[derive(Clone, Debug)]
pub struct StructuredReport {
    pub kind: StructuredKind,
    pub poles: Vec<C64>,
    /// |S_mu| (distinct) or |T_mu| (same point).
    pub n_mu: RealMatrix,
    /// |S_lambda| (distinct) or |T_mu'| (same point).
    pub n_second: RealMatrix,
    pub eta: Vec<f64>,
    pub eta_abs_mu: Option<RealMatrix>,
    pub eta_abs_second: Option<RealMatrix>,
    /// (sigma, predicted per-pole standard deviations).
    pub gaussian_std: Vec<(f64, Vec<f64>)>,
}

/// Assembles the eta report from structured matrices and the measurements
/// that scale them (left/right values, or values/derivatives).
pub fn eta_report(
    kind: StructuredKind,
    poles: &[C64],
    first: &ComplexMatrix,
    second: &ComplexMatrix,
    first_meas: &[C64],
    second_meas: &[C64],
    sigmas: &[f64],
) -> StructuredReport {
    let n_mu = first.abs();
    let n_second = second.abs();
    let n = first.cols();
    let eta: Vec<f64> = (0..n)
        .map(|i| {
            let a = n_mu.col_norm(i);
            let b = n_second.col_norm(i);
            (a * a + b * b).sqrt()
        })
        .collect();
    let normalize = |m: &RealMatrix, meas: &[C64]| {
        RealMatrix::from_fn(m.rows(), m.cols(), |j, i| {
            let scale = meas[j].norm();
            if scale == 0.0 {
                if m[(j, i)] == 0.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            } else {
                m[(j, i)] / scale
            }
        })
    };
    let eta_abs_mu = Some(normalize(&n_mu, first_meas));
    let eta_abs_second = Some(normalize(&n_second, second_meas));
    let gaussian_std = sigmas
        .iter()
        .map(|&s| (s, eta.iter().map(|e| s * e).collect()))
        .collect();
    StructuredReport {
        kind,
        poles: poles.to_vec(),
        n_mu,
        n_second,
        eta,
        eta_abs_mu,
        eta_abs_second,
        gaussian_std,
    }
}

/// Distinct-point eta report straight from a context.
pub fn eta_report_distinct(ctx: &SisoPencilContext, sigmas: &[f64]) -> Result<StructuredReport> {
    let (s_mu, s_lambda) = structured_s(ctx)?;
    Ok(eta_report(
        StructuredKind::DistinctPoints,
        ctx.system.poles(),
        &s_mu,
        &s_lambda,
        &ctx.data.siso_left_values(),
        &ctx.data.siso_right_values(),
        sigmas,
    ))
}

/// Same-point eta report straight from a context.
pub fn eta_report_same_point(ctx: &HermitePencilContext, sigmas: &[f64]) -> Result<StructuredReport> {
    let (t_mu, t_mu_prime) = structured_t(ctx)?;
    Ok(eta_report(
        StructuredKind::SamePoint,
        ctx.system.poles(),
        &t_mu,
        &t_mu_prime,
        ctx.data.values(),
        ctx.data.derivatives(),
        sigmas,
    ))
}

// ---------------------------------------------------------------------------
// Monte Carlo
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug)]
pub struct MonteCarloConfig {
    pub sigma: f64,
    pub trials: usize,
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct MonteCarloResult {
    pub reference_poles: Vec<C64>,
    /// Matched pole samples, one row per retained trial.
    pub samples: Vec<Vec<C64>>,
    pub empirical_mean: Vec<C64>,
    pub empirical_std: Vec<f64>,
    /// `sigma * eta_i` from the structured report.
    pub predicted_std: Vec<f64>,
    pub failed_trials: usize,
    /// Trials whose worst match distance exceeded 10x the predicted std;
    /// flagged but retained in `samples`.
    pub outlier_trials: Vec<usize>,
}

/// Rebuilds the pencil from multiplicatively perturbed measurements
/// `vbar = v (1 + eps)`, `wbar = w (1 + eps)` with circular Gaussian eps,
/// solves each perturbed generalized eigenproblem, matches poles to the
/// references by greedy nearest distance, and reports empirical spread
/// against the first-order prediction.
///
/// Trial t draws from sub-stream t of the seeded generator, so any
/// execution order (or parallel split) yields identical results.
pub fn monte_carlo_poles(ctx: &SisoPencilContext, cfg: &MonteCarloConfig) -> Result<MonteCarloResult> {
    if cfg.trials == 0 {
        return Err(Error::InvalidArgument("monte carlo needs at least one trial".into()));
    }
    let n = ctx.order();
    let reference = ctx.system.poles().to_vec();
    let eta = eta_report_distinct(ctx, &[cfg.sigma])?;
    let predicted_std: Vec<f64> = eta.eta.iter().map(|e| cfg.sigma * e).collect();
    let v0 = ctx.data.siso_left_values();
    let w0 = ctx.data.siso_right_values();

    let mut samples = Vec::with_capacity(cfg.trials);
    let mut failed = 0usize;
    let mut outliers = Vec::new();
    for trial in 0..cfg.trials {
        let mut stream = NoiseStream::new(cfg.seed, trial as u64);
        let eps_v = stream.complex_gaussian_vec(cfg.sigma, v0.len());
        let eps_w = stream.complex_gaussian_vec(cfg.sigma, w0.len());
        let v: Vec<C64> = v0.iter().zip(&eps_v).map(|(&a, &e)| a * (c64(1.0, 0.0) + e)).collect();
        let w: Vec<C64> = w0.iter().zip(&eps_w).map(|(&a, &e)| a * (c64(1.0, 0.0) + e)).collect();
        let data = ctx.data.with_siso_values(v, w)?;
        let quad = build_loewner(&data)?;
        let eig = match quad.pencil_eigenvalues() {
            Ok(g) => g,
            Err(_) => {
                failed += 1;
                continue;
            }
        };
        let idx = greedy_match(&reference, &eig.values)?;
        let matched: Vec<C64> = idx.iter().map(|&j| eig.values[j]).collect();
        let is_outlier = matched.iter().zip(&reference).zip(&predicted_std).any(|((m, r), &ps)| {
            ps > 0.0 && (m - r).norm() > 10.0 * ps
        });
        if is_outlier {
            outliers.push(trial);
        }
        samples.push(matched);
    }
    if samples.is_empty() {
        return Err(Error::EigenvalueMatching("every Monte Carlo trial failed".into()));
    }
    let retained = samples.len() as f64;
    let empirical_mean: Vec<C64> = (0..n)
        .map(|i| samples.iter().map(|row| row[i]).sum::<C64>() / retained)
        .collect();
    let empirical_std: Vec<f64> = (0..n)
        .map(|i| {
            if samples.len() < 2 {
                return 0.0;
            }
            let m = empirical_mean[i];
            let ss: f64 = samples.iter().map(|row| (row[i] - m).norm_sqr()).sum();
            (ss / (retained - 1.0)).sqrt()
        })
        .collect();
    Ok(MonteCarloResult {
        reference_poles: reference,
        samples,
        empirical_mean,
        empirical_std,
        predicted_std,
        failed_trials: failed,
        outlier_trials: outliers,
    })
}

// ---------------------------------------------------------------------------
// Distance scaling
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct DistanceSample {
    pub d: f64,
    pub mu: Vec<C64>,
    pub lambda: Vec<C64>,
    pub rho: Vec<f64>,
    pub eta: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct DistanceScan {
    pub samples: Vec<DistanceSample>,
    /// Least-squares slope of log max_i rho_i against log d.
    pub slope_rho: f64,
    /// Least-squares slope of log max_i eta_i against log d.
    pub slope_eta: f64,
}

/// Translates the base interpolation points by each `d` along the real
/// axis and records (rho, eta); fits log-log slopes across the sweep.
pub fn distance_scaling(
    pr: &SisoPoleResidue,
    base_mu: &[C64],
    base_lambda: &[C64],
    d_values: &[f64],
) -> Result<DistanceScan> {
    if d_values.len() < 2 {
        return Err(Error::InvalidArgument("distance scan needs at least two d values".into()));
    }
    let mut samples = Vec::with_capacity(d_values.len());
    for &d in d_values {
        let mu: Vec<C64> = base_mu.iter().map(|&z| z + d).collect();
        let lambda: Vec<C64> = base_lambda.iter().map(|&z| z + d).collect();
        let ctx = SisoPencilContext::new(pr, mu.clone(), lambda.clone())?;
        let rho = rho_unstructured(&ctx, None)?.rho;
        let eta = eta_report_distinct(&ctx, &[])?.eta;
        samples.push(DistanceSample { d, mu, lambda, rho, eta });
    }
    let xs: Vec<f64> = samples.iter().map(|s| s.d.ln()).collect();
    let rho_ys: Vec<f64> = samples.iter().map(|s| s.rho.iter().copied().fold(0.0, f64::max).ln()).collect();
    let eta_ys: Vec<f64> = samples.iter().map(|s| s.eta.iter().copied().fold(0.0, f64::max).ln()).collect();
    Ok(DistanceScan {
        samples,
        slope_rho: least_squares_slope(&xs, &rho_ys),
        slope_eta: least_squares_slope(&xs, &eta_ys),
    })
}

fn least_squares_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let xm = x.iter().sum::<f64>() / n;
    let ym = y.iter().sum::<f64>() / n;
    let num: f64 = x.iter().zip(y).map(|(a, b)| (a - xm) * (b - ym)).sum();
    let den: f64 = x.iter().map(|a| (a - xm) * (a - xm)).sum();
    num / den
}
