//! Loewner quadruples and the structured factors behind them.
//!
//! A quadruple (W, L, Ls, V) is assembled straight from tangential,
//! Hermite or Markov measurements. The same objects factor through
//! rational Krylov projectors (state-space models), Cauchy or generalized
//! Cauchy matrices (pole-residue models) and Vandermonde matrices
//! (polynomial models); `factorization_residuals` and
//! `sylvester_residuals` measure how well each identity holds on given
//! data, which is the working correctness check for everything downstream.

use crate::error::{Error, Result};
use crate::numerics::{
    c64, eig_small, numerical_rank, pinv, C64, ComplexMatrix,
};
use crate::systems::{
    transfer_derivative, transfer_eval, MimoPoleResidue, SisoPoleResidue,
    StateSpaceSystem, SystemModel,
};

/// Interpolation points closer than this are treated as coincident.
pub const NODE_DISTINCT_TOL: f64 = 1e-12;

/// Relative tolerance defining the numerical rank used for McMillan-degree
/// detection.
pub const RANK_RTOL: f64 = 1e-9;

/// Truncation tolerance for the pseudoinverses used in recovery and
/// eigenvector formulas.
pub const PINV_RTOL: f64 = crate::numerics::PINV_RTOL;

// ---------------------------------------------------------------------------
// Data sets
// ---------------------------------------------------------------------------

/// Left and right tangential interpolation data.
///
/// Left: `v_i^T = ell_i^T H(mu_i)`; right: `w_j = H(lambda_j) r_j`.
/// All interpolation points are mutually distinct across the union of the
/// two sets; coincident left/right points belong in [`HermiteDataSet`].
#[derive(Clone, Debug)]
pub struct TangentialDataSet {
    mu: Vec<C64>,
    left_dirs: Vec<Vec<C64>>,
    left_vals: Vec<Vec<C64>>,
    lambda: Vec<C64>,
    right_dirs: Vec<Vec<C64>>,
    right_vals: Vec<Vec<C64>>,
}

impl TangentialDataSet {
    pub fn new(
        mu: Vec<C64>,
        left_dirs: Vec<Vec<C64>>,
        left_vals: Vec<Vec<C64>>,
        lambda: Vec<C64>,
        right_dirs: Vec<Vec<C64>>,
        right_vals: Vec<Vec<C64>>,
    ) -> Result<Self> {
        let q = mu.len();
        let k = lambda.len();
        if q == 0 || k == 0 {
            return Err(Error::Dimension("need at least one left and one right point".into()));
        }
        if left_dirs.len() != q || left_vals.len() != q || right_dirs.len() != k || right_vals.len() != k {
            return Err(Error::Dimension("point/direction/value counts differ".into()));
        }
        let p = left_dirs[0].len();
        let m = right_dirs[0].len();
        if p == 0
            || m == 0
            || left_dirs.iter().any(|d| d.len() != p)
            || right_vals.iter().any(|w| w.len() != p)
            || right_dirs.iter().any(|d| d.len() != m)
            || left_vals.iter().any(|v| v.len() != m)
        {
            return Err(Error::Dimension("direction/value vector lengths inconsistent".into()));
        }
        check_mutually_distinct(&mu)?;
        check_mutually_distinct(&lambda)?;
        for (i, &a) in mu.iter().enumerate() {
            for (j, &b) in lambda.iter().enumerate() {
                if (a - b).norm() < NODE_DISTINCT_TOL {
                    return Err(Error::CoincidentNodes { i, j, value: format!("{a}") });
                }
            }
        }
        Ok(TangentialDataSet { mu, left_dirs, left_vals, lambda, right_dirs, right_vals })
    }

    /// SISO data: scalar values, all directions 1.
    pub fn from_siso_values(mu: Vec<C64>, v: Vec<C64>, lambda: Vec<C64>, w: Vec<C64>) -> Result<Self> {
        let one = vec![c64(1.0, 0.0)];
        let q = mu.len();
        let k = lambda.len();
        Self::new(
            mu,
            vec![one.clone(); q],
            v.into_iter().map(|z| vec![z]).collect(),
            lambda,
            vec![one; k],
            w.into_iter().map(|z| vec![z]).collect(),
        )
    }

    /// Samples a SISO model at the given points.
    pub fn sample_siso(sys: &SystemModel, mu: Vec<C64>, lambda: Vec<C64>) -> Result<Self> {
        let v = mu.iter().map(|&s| Ok(transfer_eval(sys, s)?[(0, 0)])).collect::<Result<Vec<_>>>()?;
        let w = lambda.iter().map(|&s| Ok(transfer_eval(sys, s)?[(0, 0)])).collect::<Result<Vec<_>>>()?;
        Self::from_siso_values(mu, v, lambda, w)
    }

    /// Samples a (possibly MIMO) model tangentially.
    pub fn sample_tangential(
        sys: &SystemModel,
        mu: Vec<C64>,
        left_dirs: Vec<Vec<C64>>,
        lambda: Vec<C64>,
        right_dirs: Vec<Vec<C64>>,
    ) -> Result<Self> {
        let mut left_vals = Vec::with_capacity(mu.len());
        for (&s, ell) in mu.iter().zip(&left_dirs) {
            let h = transfer_eval(sys, s)?;
            left_vals.push(h.premul_vec(ell));
        }
        let mut right_vals = Vec::with_capacity(lambda.len());
        for (&s, r) in lambda.iter().zip(&right_dirs) {
            let h = transfer_eval(sys, s)?;
            right_vals.push(h.mul_vec(r));
        }
        Self::new(mu, left_dirs, left_vals, lambda, right_dirs, right_vals)
    }

    pub fn q(&self) -> usize {
        self.mu.len()
    }

    pub fn k(&self) -> usize {
        self.lambda.len()
    }

    pub fn num_outputs(&self) -> usize {
        self.left_dirs[0].len()
    }

    pub fn num_inputs(&self) -> usize {
        self.right_dirs[0].len()
    }

    pub fn mu(&self) -> &[C64] {
        &self.mu
    }

    pub fn lambda(&self) -> &[C64] {
        &self.lambda
    }

    pub fn left_dirs(&self) -> &[Vec<C64>] {
        &self.left_dirs
    }

    pub fn right_dirs(&self) -> &[Vec<C64>] {
        &self.right_dirs
    }

    pub fn left_vals(&self) -> &[Vec<C64>] {
        &self.left_vals
    }

    pub fn right_vals(&self) -> &[Vec<C64>] {
        &self.right_vals
    }

    /// Scalar left values; panics unless the data is SISO.
    pub fn siso_left_values(&self) -> Vec<C64> {
        assert!(self.num_inputs() == 1, "siso_left_values on MIMO data");
        self.left_vals.iter().map(|v| v[0]).collect()
    }

    /// Scalar right values; panics unless the data is SISO.
    pub fn siso_right_values(&self) -> Vec<C64> {
        assert!(self.num_outputs() == 1, "siso_right_values on MIMO data");
        self.right_vals.iter().map(|w| w[0]).collect()
    }

    /// Same points and directions, different scalar values (noise studies).
    pub fn with_siso_values(&self, v: Vec<C64>, w: Vec<C64>) -> Result<Self> {
        Self::from_siso_values(self.mu.clone(), v, self.lambda.clone(), w)
    }
}

/// Coincident left/right points with transfer values and derivatives
/// (SISO). The Loewner diagonal carries the derivatives.
#[derive(Clone, Debug)]
pub struct HermiteDataSet {
    mu: Vec<C64>,
    values: Vec<C64>,
    derivatives: Vec<C64>,
}

impl HermiteDataSet {
    pub fn new(mu: Vec<C64>, values: Vec<C64>, derivatives: Vec<C64>) -> Result<Self> {
        if mu.is_empty() || mu.len() != values.len() || mu.len() != derivatives.len() {
            return Err(Error::Dimension("point/value/derivative counts differ".into()));
        }
        check_mutually_distinct(&mu)?;
        Ok(HermiteDataSet { mu, values, derivatives })
    }

    pub fn sample(sys: &SystemModel, mu: Vec<C64>) -> Result<Self> {
        let values = mu.iter().map(|&s| Ok(transfer_eval(sys, s)?[(0, 0)])).collect::<Result<Vec<_>>>()?;
        let derivatives =
            mu.iter().map(|&s| Ok(transfer_derivative(sys, s)?[(0, 0)])).collect::<Result<Vec<_>>>()?;
        Self::new(mu, values, derivatives)
    }

    pub fn q(&self) -> usize {
        self.mu.len()
    }

    pub fn mu(&self) -> &[C64] {
        &self.mu
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn derivatives(&self) -> &[C64] {
        &self.derivatives
    }

    pub fn with_values(&self, values: Vec<C64>, derivatives: Vec<C64>) -> Result<Self> {
        Self::new(self.mu.clone(), values, derivatives)
    }
}

fn check_mutually_distinct(points: &[C64]) -> Result<()> {
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if (points[i] - points[j]).norm() < NODE_DISTINCT_TOL {
                return Err(Error::RepeatedNodes { i, j, value: format!("{}", points[i]) });
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Quadruple
// ---------------------------------------------------------------------------

/// Which measurements built a quadruple.
#[derive(Clone, Debug, PartialEq)]
pub enum QuadrupleProvenance {
    Tangential { mu: Vec<C64>, lambda: Vec<C64> },
    Hermite { mu: Vec<C64> },
    Hankel { q: usize, k: usize },
}

/// The raw data-driven model (W, L, Ls, V).
#[derive(Clone, Debug)]
pub struct LoewnerQuadruple {
    pub w: ComplexMatrix,
    pub l: ComplexMatrix,
    pub ls: ComplexMatrix,
    pub v: ComplexMatrix,
    pub provenance: QuadrupleProvenance,
}

impl LoewnerQuadruple {
    /// Numerical rank of L (McMillan-degree estimate).
    pub fn mcmillan_degree(&self) -> Result<usize> {
        numerical_rank(&self.l, RANK_RTOL)
    }

    /// Eigenvalues of the pencil (Ls, L) with left/right eigenvectors;
    /// the poles of the raw model. Needs a square, invertible L.
    pub fn pencil_eigenvalues(&self) -> Result<crate::numerics::GeneralizedEig> {
        crate::numerics::generalized_eig(&self.ls, &self.l)
    }

    /// Transfer recovery `H(s) = W (Ls - s L)^+ V`.
    ///
    /// Exact (to roundoff amplified by the factor conditioning) whenever
    /// the data comes from an order-n system and q, k >= n — including
    /// redundant data. Errors when s is an eigenvalue of the pencil,
    /// detected as a rank drop of `Ls - sL` below the pencil rank.
    pub fn recover_transfer(&self, s: C64) -> Result<ComplexMatrix> {
        let shifted = self.ls.sub(&self.l.scale(s));
        let rank_ref = numerical_rank(&self.l, RANK_RTOL)?.max(numerical_rank(&self.ls, RANK_RTOL)?);
        if numerical_rank(&shifted, RANK_RTOL)? < rank_ref {
            return Err(Error::EvaluationAtPencilEigenvalue(format!("{s}")));
        }
        Ok(self.w.mul(&pinv(&shifted, PINV_RTOL)?).mul(&self.v))
    }
}

// ---------------------------------------------------------------------------
// Structured factors
// ---------------------------------------------------------------------------

/// Cauchy matrix with entries `1/(x_i - y_j)`.
pub fn cauchy(x: &[C64], y: &[C64]) -> Result<ComplexMatrix> {
    for (i, &a) in x.iter().enumerate() {
        for (j, &b) in y.iter().enumerate() {
            if (a - b).norm() < NODE_DISTINCT_TOL {
                return Err(Error::CoincidentNodes { i, j, value: format!("{a}") });
            }
        }
    }
    Ok(ComplexMatrix::from_fn(x.len(), y.len(), |i, j| (x[i] - y[j]).inv()))
}

/// Cauchy matrix over one point set with the diagonal set to exactly zero;
/// the kernel of the same-point (Hermite) formulas.
pub fn cauchy_zero_diag(x: &[C64]) -> Result<ComplexMatrix> {
    check_mutually_distinct(x)?;
    Ok(ComplexMatrix::from_fn(x.len(), x.len(), |i, j| {
        if i == j {
            C64::default()
        } else {
            (x[i] - x[j]).inv()
        }
    }))
}

/// Generalized Cauchy matrix `(C_L)_{i,j} = ell_i^T c_j / (mu_i - pi_j)`.
pub fn generalized_cauchy_left(
    mu: &[C64],
    ell_dirs: &[Vec<C64>],
    sys: &MimoPoleResidue,
) -> Result<ComplexMatrix> {
    assert_eq!(mu.len(), ell_dirs.len());
    let poles = sys.poles();
    for (i, &s) in mu.iter().enumerate() {
        for &p in poles {
            if (s - p).norm() < NODE_DISTINCT_TOL {
                return Err(Error::EvaluationAtPole { point: format!("{s}"), pole: format!("{p}"), index: i });
            }
        }
    }
    Ok(ComplexMatrix::from_fn(mu.len(), poles.len(), |i, j| {
        let num: C64 = ell_dirs[i].iter().zip(&sys.c_vectors()[j]).map(|(&l, &c)| l * c).sum();
        num / (mu[i] - poles[j])
    }))
}

/// Generalized Cauchy matrix `(C_R)_{i,j} = b_i^T r_j / (lambda_j - pi_i)`.
pub fn generalized_cauchy_right(
    lambda: &[C64],
    r_dirs: &[Vec<C64>],
    sys: &MimoPoleResidue,
) -> Result<ComplexMatrix> {
    assert_eq!(lambda.len(), r_dirs.len());
    let poles = sys.poles();
    for (j, &s) in lambda.iter().enumerate() {
        for &p in poles {
            if (s - p).norm() < NODE_DISTINCT_TOL {
                return Err(Error::EvaluationAtPole { point: format!("{s}"), pole: format!("{p}"), index: j });
            }
        }
    }
    Ok(ComplexMatrix::from_fn(poles.len(), lambda.len(), |i, j| {
        let num: C64 = sys.b_vectors()[i].iter().zip(&r_dirs[j]).map(|(&b, &r)| b * r).sum();
        num / (lambda[j] - poles[i])
    }))
}

/// Closed-form inverse of a square Cauchy matrix:
/// `(C^{-1})_{i,j} = prod_k (x_j - y_k) prod_k (x_k - y_i) /
///  [(x_j - y_i) prod_{k != j} (x_j - x_k) prod_{k != i} (y_k - y_i)]`.
pub fn inverse_cauchy_closed_form(x: &[C64], y: &[C64]) -> Result<ComplexMatrix> {
    if x.len() != y.len() {
        return Err(Error::Dimension("closed-form inverse needs a square Cauchy matrix".into()));
    }
    check_mutually_distinct(x)?;
    check_mutually_distinct(y)?;
    let n = x.len();
    for (i, &a) in x.iter().enumerate() {
        for (j, &b) in y.iter().enumerate() {
            if (a - b).norm() < NODE_DISTINCT_TOL {
                return Err(Error::CoincidentNodes { i, j, value: format!("{a}") });
            }
        }
    }
    Ok(ComplexMatrix::from_fn(n, n, |i, j| {
        let mut num = c64(1.0, 0.0);
        for k in 0..n {
            num *= x[j] - y[k];
            num *= x[k] - y[i];
        }
        let mut den = x[j] - y[i];
        for k in 0..n {
            if k != j {
                den *= x[j] - x[k];
            }
            if k != i {
                den *= y[k] - y[i];
            }
        }
        num / den
    }))
}

/// Vandermonde matrix with entry `(i, j) = x_j^{i-1}` (`rows` x len(x)).
pub fn vandermonde(x: &[C64], rows: usize) -> ComplexMatrix {
    assert!(rows >= 1, "vandermonde needs at least one row");
    let mut m = ComplexMatrix::zeros(rows, x.len());
    for j in 0..x.len() {
        let mut p = c64(1.0, 0.0);
        for i in 0..rows {
            m[(i, j)] = p;
            p *= x[j];
        }
    }
    m
}

// ---------------------------------------------------------------------------
// Builders
// ---------------------------------------------------------------------------

/// Assembles the quadruple from tangential data:
/// `L_{i,j} = (v_i^T r_j - ell_i^T w_j)/(mu_i - lambda_j)`,
/// `Ls_{i,j} = (mu_i v_i^T r_j - ell_i^T w_j lambda_j)/(mu_i - lambda_j)`.
pub fn build_loewner(data: &TangentialDataSet) -> Result<LoewnerQuadruple> {
    let (q, k) = (data.q(), data.k());
    let mut l = ComplexMatrix::zeros(q, k);
    let mut ls = ComplexMatrix::zeros(q, k);
    for i in 0..q {
        for j in 0..k {
            let vr: C64 = data.left_vals[i].iter().zip(&data.right_dirs[j]).map(|(&a, &b)| a * b).sum();
            let lw: C64 = data.left_dirs[i].iter().zip(&data.right_vals[j]).map(|(&a, &b)| a * b).sum();
            let denom = data.mu[i] - data.lambda[j];
            l[(i, j)] = (vr - lw) / denom;
            ls[(i, j)] = (data.mu[i] * vr - lw * data.lambda[j]) / denom;
        }
    }
    let w = ComplexMatrix::from_fn(data.num_outputs(), k, |i, j| data.right_vals[j][i]);
    let v = ComplexMatrix::from_fn(q, data.num_inputs(), |i, j| data.left_vals[i][j]);
    Ok(LoewnerQuadruple {
        w,
        l,
        ls,
        v,
        provenance: QuadrupleProvenance::Tangential { mu: data.mu.clone(), lambda: data.lambda.clone() },
    })
}

/// Assembles the same-point quadruple: off-diagonal entries are divided
/// differences, the diagonal carries derivatives,
/// `L = V Cmm - Cmm V + V'` and `Ls = M V Cmm - Cmm V M + M V' + V`.
pub fn build_hermite_loewner(data: &HermiteDataSet) -> Result<LoewnerQuadruple> {
    let q = data.q();
    let mut l = ComplexMatrix::zeros(q, q);
    let mut ls = ComplexMatrix::zeros(q, q);
    for i in 0..q {
        for j in 0..q {
            if i == j {
                l[(i, i)] = data.derivatives[i];
                ls[(i, i)] = data.values[i] + data.mu[i] * data.derivatives[i];
            } else {
                let denom = data.mu[i] - data.mu[j];
                l[(i, j)] = (data.values[i] - data.values[j]) / denom;
                ls[(i, j)] = (data.mu[i] * data.values[i] - data.mu[j] * data.values[j]) / denom;
            }
        }
    }
    let w = ComplexMatrix::from_fn(1, q, |_, j| data.values[j]);
    let v = ComplexMatrix::from_fn(q, 1, |i, _| data.values[i]);
    Ok(LoewnerQuadruple { w, l, ls, v, provenance: QuadrupleProvenance::Hermite { mu: data.mu.clone() } })
}

/// Hankel pencil from Markov parameters: `L = H_{q,k}` with block entries
/// `h_{i+j-1}` and `Ls` the shifted Hankel with `h_{i+j}`.
///
/// The sign convention follows the matching-at-infinity factorization
/// `L = +K_L K_R`, so the pencil eigenvalues are the system poles but
/// `recover_transfer` on this quadruple returns `-H(s)`.
pub fn hankel_pencil(markov: &[ComplexMatrix], q: usize, k: usize) -> Result<LoewnerQuadruple> {
    if q == 0 || k == 0 {
        return Err(Error::Dimension("hankel pencil needs q, k >= 1".into()));
    }
    if markov.len() < q + k {
        return Err(Error::Dimension(format!(
            "need at least q + k = {} Markov parameters, got {}",
            q + k,
            markov.len()
        )));
    }
    let p = markov[0].rows();
    let m = markov[0].cols();
    if markov.iter().any(|h| h.rows() != p || h.cols() != m) {
        return Err(Error::Dimension("Markov parameters have inconsistent shapes".into()));
    }
    let l = ComplexMatrix::from_fn(q * p, k * m, |i, j| {
        let (bi, ri) = (i / p, i % p);
        let (bj, rj) = (j / m, j % m);
        markov[bi + bj][(ri, rj)]
    });
    let ls = ComplexMatrix::from_fn(q * p, k * m, |i, j| {
        let (bi, ri) = (i / p, i % p);
        let (bj, rj) = (j / m, j % m);
        markov[bi + bj + 1][(ri, rj)]
    });
    let w = ComplexMatrix::from_fn(p, k * m, |i, j| markov[j / m][(i, j % m)]);
    let v = ComplexMatrix::from_fn(q * p, m, |i, j| markov[i / p][(i % p, j)]);
    Ok(LoewnerQuadruple { w, l, ls, v, provenance: QuadrupleProvenance::Hankel { q, k } })
}

/// Hankel singular values of a stable SISO system through the Loewner
/// matrix at mirrored-pole points `mu_i = lambda_i = -conj(pi_i)`:
/// `sigma_i = sqrt(|eig(L^H Gamma)|)`, sorted non-increasing.
pub fn hankel_singular_values_via_loewner(pr: &SisoPoleResidue) -> Result<Vec<f64>> {
    for &p in pr.poles() {
        if p.re >= 0.0 {
            return Err(Error::UnstablePole { pole: format!("{p}") });
        }
    }
    let mu: Vec<C64> = pr.poles().iter().map(|p| -p.conj()).collect();
    let sys = SystemModel::PoleResidue(pr.clone());
    let data = HermiteDataSet::sample(&sys, mu)?;
    let quad = build_hermite_loewner(&data)?;
    let gamma = ComplexMatrix::diag(pr.residues());
    let prod = quad.l.conj_transpose().mul(&gamma);
    let mut sv: Vec<f64> = eig_small(&prod)?.iter().map(|z| z.norm().sqrt()).collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(sv)
}

// ---------------------------------------------------------------------------
// Krylov projectors
// ---------------------------------------------------------------------------

/// Tangential rational Krylov projection matrices: rows
/// `ell_i^T C Phi(mu_i)` and columns `Phi(lambda_j) B r_j`.
pub fn krylov_projectors(
    sys: &StateSpaceSystem,
    data: &TangentialDataSet,
) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let n = sys.order();
    let mut k_l = ComplexMatrix::zeros(data.q(), n);
    for i in 0..data.q() {
        // ell^T C Phi(mu) via the transposed resolvent solve.
        let shifted = sys.e.scale(data.mu[i]).sub(&sys.a).transpose();
        let lu = crate::numerics::Lu::new(&shifted)
            .map_err(|_| Error::Singular(format!("resolvent singular at mu_{i} = {}", data.mu[i])))?;
        let rhs = sys.c.premul_vec(&data.left_dirs[i]);
        let row = lu.solve_vec(&rhs);
        for j in 0..n {
            k_l[(i, j)] = row[j];
        }
    }
    let mut k_r = ComplexMatrix::zeros(n, data.k());
    for j in 0..data.k() {
        let lu = sys
            .resolvent_lu(data.lambda[j])
            .map_err(|_| Error::Singular(format!("resolvent singular at lambda_{j} = {}", data.lambda[j])))?;
        let col = lu.solve_vec(&sys.b.mul_vec(&data.right_dirs[j]));
        for i in 0..n {
            k_r[(i, j)] = col[i];
        }
    }
    Ok((k_l, k_r))
}

// ---------------------------------------------------------------------------
// Residual reports
// ---------------------------------------------------------------------------

/// One named identity residual; `relative` is scaled by the Frobenius
/// norm of the Loewner matrix it checks.
#[derive(Clone, Debug)]
pub struct ResidualEntry {
    pub name: String,
    pub absolute: f64,
    pub relative: f64,
}

#[derive(Clone, Debug)]
pub struct ResidualReport {
    pub entries: Vec<ResidualEntry>,
    /// ||L||_F of the quadruple under test.
    pub scale: f64,
    /// Numerical rank of K_L K_R when the Krylov route applies.
    pub projector_product_rank: Option<usize>,
}

impl ResidualReport {
    fn push(&mut self, name: &str, diff: &ComplexMatrix) {
        let absolute = diff.norm_fro();
        let relative = if self.scale > 0.0 { absolute / self.scale } else { absolute };
        self.entries.push(ResidualEntry { name: name.to_string(), absolute, relative });
    }

    pub fn max_relative(&self) -> f64 {
        self.entries.iter().map(|e| e.relative).fold(0.0, f64::max)
    }

    pub fn max_absolute(&self) -> f64 {
        self.entries.iter().map(|e| e.absolute).fold(0.0, f64::max)
    }
}

fn new_report(quad: &LoewnerQuadruple) -> ResidualReport {
    ResidualReport { entries: Vec::new(), scale: quad.l.norm_fro(), projector_product_rank: None }
}

/// Frobenius residuals of every factorization the model form supports:
/// Krylov (state space), scalar Cauchy (SISO pole-residue), generalized
/// Cauchy (MIMO) or Vandermonde/Hankel-coefficient (polynomial).
pub fn factorization_residuals(
    quad: &LoewnerQuadruple,
    sys: &SystemModel,
    data: &TangentialDataSet,
) -> Result<ResidualReport> {
    let mut report = new_report(quad);
    match sys {
        SystemModel::StateSpace(ss) => {
            let (k_l, k_r) = krylov_projectors(ss, data)?;
            report.push("W - C K_R", &quad.w.sub(&ss.c.mul(&k_r)));
            report.push("L + K_L E K_R", &quad.l.add(&k_l.mul(&ss.e).mul(&k_r)));
            report.push("Ls + K_L A K_R", &quad.ls.add(&k_l.mul(&ss.a).mul(&k_r)));
            report.push("V - K_L B", &quad.v.sub(&k_l.mul(&ss.b)));
            report.projector_product_rank = Some(numerical_rank(&k_l.mul(&k_r), RANK_RTOL)?);
        }
        SystemModel::PoleResidue(pr) => {
            let c_mu = cauchy(data.mu(), pr.poles())?;
            let c_lam_t = cauchy(data.lambda(), pr.poles())?.transpose();
            let gamma = ComplexMatrix::diag(pr.residues());
            let pi_gamma = ComplexMatrix::diag(
                &pr.poles().iter().zip(pr.residues()).map(|(&p, &g)| p * g).collect::<Vec<_>>(),
            );
            let ones = ComplexMatrix::from_fn(pr.order(), 1, |_, _| c64(1.0, 0.0));
            report.push("L + C_mupi Gamma C_lampi^T", &quad.l.add(&c_mu.mul(&gamma).mul(&c_lam_t)));
            report.push("Ls + C_mupi Pi Gamma C_lampi^T", &quad.ls.add(&c_mu.mul(&pi_gamma).mul(&c_lam_t)));
            report.push("W - 1^T Gamma C_lampi^T", &quad.w.sub(&ones.transpose().mul(&gamma).mul(&c_lam_t)));
            report.push("V - C_mupi Gamma 1", &quad.v.sub(&c_mu.mul(&gamma).mul(&ones)));
        }
        SystemModel::Mimo(mp) => {
            let c_l = generalized_cauchy_left(data.mu(), data.left_dirs(), mp)?;
            let c_r = generalized_cauchy_right(data.lambda(), data.right_dirs(), mp)?;
            let pi = ComplexMatrix::diag(mp.poles());
            report.push("L + C_L C_R", &quad.l.add(&c_l.mul(&c_r)));
            report.push("Ls + C_L Pi C_R", &quad.ls.add(&c_l.mul(&pi).mul(&c_r)));
            report.push("W - C C_R", &quad.w.sub(&mp.c_matrix().mul(&c_r)));
            report.push("V - C_L B", &quad.v.sub(&c_l.mul(&mp.b_matrix())));
        }
        SystemModel::Polynomial(poly) => {
            let r = poly.degree_bound();
            let coeff = poly.coefficients();
            let v_mu = vandermonde(data.mu(), r);
            let v_lam = vandermonde(data.lambda(), r);
            let e_hat = ComplexMatrix::from_fn(r, r, |i, j| {
                if i + j < r - 1 { coeff[i + j + 1] } else { C64::default() }
            });
            let a_hat = ComplexMatrix::from_fn(r, r, |i, j| {
                if i + j < r { coeff[i + j] } else { C64::default() }
            });
            let b_hat = ComplexMatrix::from_fn(r, 1, |i, _| coeff[i]);
            report.push("L - V_mu^T Ehat V_lam", &quad.l.sub(&v_mu.transpose().mul(&e_hat).mul(&v_lam)));
            report.push("Ls - V_mu^T Ahat V_lam", &quad.ls.sub(&v_mu.transpose().mul(&a_hat).mul(&v_lam)));
            report.push("W - Chat V_lam", &quad.w.sub(&b_hat.transpose().mul(&v_lam)));
            report.push("V - V_mu^T Bhat", &quad.v.sub(&v_mu.transpose().mul(&b_hat)));
        }
    }
    Ok(report)
}

/// Lemma-2 factorization residuals for the same-point (Hermite) quadruple,
/// which the distinct-point factorization reaches in the limit.
pub fn factorization_residuals_hermite(
    quad: &LoewnerQuadruple,
    pr: &SisoPoleResidue,
    data: &HermiteDataSet,
) -> Result<ResidualReport> {
    let mut report = new_report(quad);
    let c_mu = cauchy(data.mu(), pr.poles())?;
    let c_mu_t = c_mu.transpose();
    let gamma = ComplexMatrix::diag(pr.residues());
    let pi_gamma = ComplexMatrix::diag(
        &pr.poles().iter().zip(pr.residues()).map(|(&p, &g)| p * g).collect::<Vec<_>>(),
    );
    report.push("L + C_mupi Gamma C_mupi^T", &quad.l.add(&c_mu.mul(&gamma).mul(&c_mu_t)));
    report.push("Ls + C_mupi Pi Gamma C_mupi^T", &quad.ls.add(&c_mu.mul(&pi_gamma).mul(&c_mu_t)));
    Ok(report)
}

/// Residuals of the generalized Sylvester equations tying the projectors
/// (or their Cauchy specializations) to the data:
/// `M K_L E - K_L A = L^T C` and `E K_R Lambda - A K_R = B R`.
pub fn sylvester_residuals(sys: &SystemModel, data: &TangentialDataSet) -> Result<ResidualReport> {
    let quad = build_loewner(data)?;
    let mut report = new_report(&quad);
    let m_diag = ComplexMatrix::diag(data.mu());
    let lam_diag = ComplexMatrix::diag(data.lambda());
    let l_t = ComplexMatrix::from_fn(data.q(), data.num_outputs(), |i, j| data.left_dirs[i][j]);
    let r_mat = ComplexMatrix::from_fn(data.num_inputs(), data.k(), |i, j| data.right_dirs[j][i]);
    match sys {
        SystemModel::StateSpace(ss) => {
            let (k_l, k_r) = krylov_projectors(ss, data)?;
            let left = m_diag.mul(&k_l).mul(&ss.e).sub(&k_l.mul(&ss.a)).sub(&l_t.mul(&ss.c));
            let right = ss.e.mul(&k_r).mul(&lam_diag).sub(&ss.a.mul(&k_r)).sub(&ss.b.mul(&r_mat));
            report.push("M K_L E - K_L A - L^T C", &left);
            report.push("E K_R Lam - A K_R - B R", &right);
        }
        SystemModel::PoleResidue(pr) => {
            let n = pr.order();
            let c_mu = cauchy(data.mu(), pr.poles())?;
            let c_lam_t = cauchy(data.lambda(), pr.poles())?.transpose();
            let pi = ComplexMatrix::diag(pr.poles());
            let ones_qn = ComplexMatrix::from_fn(data.q(), n, |_, _| c64(1.0, 0.0));
            let ones_nk = ComplexMatrix::from_fn(n, data.k(), |_, _| c64(1.0, 0.0));
            report.push(
                "M C_mupi - C_mupi Pi - 1 1^T",
                &m_diag.mul(&c_mu).sub(&c_mu.mul(&pi)).sub(&ones_qn),
            );
            report.push(
                "C_lampi^T Lam - Pi C_lampi^T - 1 1^T",
                &c_lam_t.mul(&lam_diag).sub(&pi.mul(&c_lam_t)).sub(&ones_nk),
            );
        }
        SystemModel::Mimo(mp) => {
            let c_l = generalized_cauchy_left(data.mu(), data.left_dirs(), mp)?;
            let c_r = generalized_cauchy_right(data.lambda(), data.right_dirs(), mp)?;
            let pi = ComplexMatrix::diag(mp.poles());
            report.push(
                "M C_L - C_L Pi - L^T C",
                &m_diag.mul(&c_l).sub(&c_l.mul(&pi)).sub(&l_t.mul(&mp.c_matrix())),
            );
            report.push(
                "C_R Lam - Pi C_R - B R",
                &c_r.mul(&lam_diag).sub(&pi.mul(&c_r)).sub(&mp.b_matrix().mul(&r_mat)),
            );
        }
        SystemModel::Polynomial(_) => {
            return Err(Error::InvalidArgument(
                "Sylvester residuals use the rational-model specializations; polynomial models \
                 are covered by factorization_residuals"
                    .into(),
            ));
        }
    }
    Ok(report)
}

/// Residuals of the degenerate Sylvester equations for data matched at
/// the mirrored poles, `mu = lambda = -conj(pi)`:
/// `L Pi - Pi L + R^T W - W^T R = 0` and
/// `Ls Pi - Pi Ls - R^T W Pi + Pi W^T R = 0`.
pub fn mirror_point_sylvester_residuals(pr: &SisoPoleResidue) -> Result<ResidualReport> {
    for &p in pr.poles() {
        if p.re >= 0.0 {
            return Err(Error::UnstablePole { pole: format!("{p}") });
        }
    }
    let mu: Vec<C64> = pr.poles().iter().map(|p| -p.conj()).collect();
    let sys = SystemModel::PoleResidue(pr.clone());
    let data = HermiteDataSet::sample(&sys, mu)?;
    let quad = build_hermite_loewner(&data)?;
    let mut report = new_report(&quad);
    let n = pr.order();
    let pi = ComplexMatrix::diag(pr.poles());
    // R = L = 1^T and W the sample row: (R^T W)_{ij} = w_j, (W^T R)_{ij} = w_i.
    let rt_w = ComplexMatrix::from_fn(n, n, |_, j| data.values()[j]);
    let wt_r = ComplexMatrix::from_fn(n, n, |i, _| data.values()[i]);
    let first = quad.l.mul(&pi).sub(&pi.mul(&quad.l)).add(&rt_w).sub(&wt_r);
    let second = quad.ls.mul(&pi).sub(&pi.mul(&quad.ls)).sub(&rt_w.mul(&pi)).add(&pi.mul(&wt_r));
    report.push("L Pi - Pi L + R^T W - W^T R", &first);
    report.push("Ls Pi - Pi Ls - R^T W Pi + Pi W^T R", &second);
    Ok(report)
}

/// Residuals of the two Hankel Sylvester identities on a Markov-data
/// pencil (scalar blocks).
pub fn hankel_sylvester_residuals(quad: &LoewnerQuadruple) -> Result<ResidualReport> {
    let (q, k) = match quad.provenance {
        QuadrupleProvenance::Hankel { q, k } => (q, k),
        _ => return Err(Error::InvalidArgument("not a Hankel quadruple".into())),
    };
    if quad.l.rows() != q || quad.l.cols() != k {
        return Err(Error::InvalidArgument(
            "Hankel Sylvester identities are stated for scalar blocks".into(),
        ));
    }
    let mut report = new_report(quad);
    let j_q = jordan_zero(q);
    let j_k = jordan_zero(k);
    let e1_q = unit_first(q);
    let e1_k = unit_first(k);
    let h = &quad.l;
    let sh = &quad.ls;
    let lhs1 = h.mul(&j_k).sub(&j_q.transpose().mul(h));
    let rhs1 = e1_q
        .mul(&e1_q.transpose())
        .mul(h)
        .mul(&j_k)
        .sub(&j_q.transpose().mul(h).mul(&e1_k).mul(&e1_k.transpose()));
    report.push("H J_k - J_q^T H identity", &lhs1.sub(&rhs1));
    let lhs2 = sh.mul(&j_k).sub(&j_q.transpose().mul(sh));
    let rhs2 = e1_q.mul(&e1_q.transpose()).mul(h).sub(&h.mul(&e1_k).mul(&e1_k.transpose()));
    report.push("sH J_k - J_q^T sH identity", &lhs2.sub(&rhs2));
    Ok(report)
}

fn jordan_zero(n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |i, j| if j == i + 1 { c64(1.0, 0.0) } else { C64::default() })
}

fn unit_first(n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, 1, |i, _| if i == 0 { c64(1.0, 0.0) } else { C64::default() })
}

// ---------------------------------------------------------------------------
// Eigenvector formulas
// ---------------------------------------------------------------------------

/// Right and left pencil eigenvectors for a SISO pole-residue model:
/// `q_i = (C_{lambda,pi}^T)^+ e_i` and `p_i = (C_{mu,pi}^T)^+ e_i`,
/// returned as the columns of the two matrices. With these scalings
/// `p_i^T L q_i = -gamma_i`.
pub fn cauchy_eigenvectors(
    pr: &SisoPoleResidue,
    mu: &[C64],
    lambda: &[C64],
) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let p_mat = pinv(&cauchy(mu, pr.poles())?.transpose(), PINV_RTOL)?;
    let q_mat = pinv(&cauchy(lambda, pr.poles())?.transpose(), PINV_RTOL)?;
    Ok((q_mat, p_mat))
}

/// Same formulas through the closed-form Cauchy inverse; only available
/// when q = k = n. Cross-checks the pseudoinverse route.
pub fn cauchy_eigenvectors_closed_form(
    pr: &SisoPoleResidue,
    mu: &[C64],
    lambda: &[C64],
) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let n = pr.order();
    if mu.len() != n || lambda.len() != n {
        return Err(Error::Dimension("closed-form eigenvectors need q = k = n".into()));
    }
    // (C^T)^{-1} = (C^{-1})^T.
    let p_mat = inverse_cauchy_closed_form(mu, pr.poles())?.transpose();
    let q_mat = inverse_cauchy_closed_form(lambda, pr.poles())?.transpose();
    Ok((q_mat, p_mat))
}

/// Matches each reference value to the nearest candidate, greedily in
/// reference order, consuming candidates. Returns candidate indices.
pub fn greedy_match(references: &[C64], candidates: &[C64]) -> Result<Vec<usize>> {
    if candidates.len() < references.len() {
        return Err(Error::EigenvalueMatching(format!(
            "{} candidates for {} references",
            candidates.len(),
            references.len()
        )));
    }
    let mut taken = vec![false; candidates.len()];
    let mut out = Vec::with_capacity(references.len());
    for &r in references {
        let mut best: Option<(f64, usize)> = None;
        for (j, &cand) in candidates.iter().enumerate() {
            if taken[j] {
                continue;
            }
            let d = (cand - r).norm();
            if best.is_none_or(|(bd, _)| d < bd) {
                best = Some((d, j));
            }
        }
        let (_, j) = best.expect("at least one free candidate");
        taken[j] = true;
        out.push(j);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{cond2, generalized_eig, vec_norm, Lu};
    use crate::systems::{markov_parameters, pole_residue_realization_diagonal, PolynomialTF};

    fn cplx(re: f64, im: f64) -> C64 {
        c64(re, im)
    }

    fn example1_pr() -> SisoPoleResidue {
        SisoPoleResidue::new(vec![cplx(-2.1, 0.0), cplx(-0.1, 0.0)], vec![cplx(0.5, 0.0), cplx(0.5, 0.0)])
            .unwrap()
    }

    fn five_pole_pr() -> SisoPoleResidue {
        let s3 = 3f64.sqrt();
        SisoPoleResidue::new(
            vec![cplx(-1.0, 0.0), cplx(-1.0, -1.0), cplx(-1.0, 1.0), cplx(-0.5, -s3 / 2.0), cplx(-0.5, s3 / 2.0)],
            vec![cplx(1.0, 0.0), cplx(0.0, -0.5), cplx(0.0, 0.5), cplx(0.0, -s3 / 3.0), cplx(0.0, s3 / 3.0)],
        )
        .unwrap()
    }

    fn five_pole_points() -> (Vec<C64>, Vec<C64>) {
        let lambda: Vec<C64> = (1..=5).map(|j| cplx(2.0 * j as f64 / 9.0, 0.0)).collect();
        let mu: Vec<C64> = lambda.iter().map(|&l| -l).collect();
        (mu, lambda)
    }

    #[test]
    fn cauchy_basics() {
        let m = cauchy(&[cplx(2.0, 0.0)], &[cplx(1.0, 0.0)]).unwrap();
        assert!((m[(0, 0)] - cplx(1.0, 0.0)).norm() < 1e-15);

        let m = cauchy(&[cplx(0.0, 0.0), cplx(1.0, 0.0)], &[cplx(2.0, 0.0), cplx(3.0, 0.0)]).unwrap();
        let expect = [[-0.5, -1.0 / 3.0], [-1.0, -0.5]];
        for i in 0..2 {
            for j in 0..2 {
                assert!((m[(i, j)] - cplx(expect[i][j], 0.0)).norm() < 1e-15);
            }
        }
        assert!(matches!(
            cauchy(&[cplx(1.0, 0.0)], &[cplx(1.0, 0.0)]),
            Err(Error::CoincidentNodes { i: 0, j: 0, .. })
        ));
    }

    #[test]
    fn cauchy_sylvester_identity() {
        let x = [cplx(0.3, 0.7), cplx(-1.2, 0.1), cplx(2.0, -0.4)];
        let y = [cplx(1.5, 1.0), cplx(-0.8, -0.9)];
        let c = cauchy(&x, &y).unwrap();
        let dx = ComplexMatrix::diag(&x);
        let dy = ComplexMatrix::diag(&y);
        let ones = ComplexMatrix::from_fn(3, 2, |_, _| cplx(1.0, 0.0));
        let resid = dx.mul(&c).sub(&c.mul(&dy)).sub(&ones).norm_fro();
        assert!(resid <= 1e-13, "Sylvester residual {resid}");
    }

    #[test]
    fn inverse_cauchy_closed_form_cases() {
        let one = inverse_cauchy_closed_form(&[cplx(2.0, 0.0)], &[cplx(1.0, 0.0)]).unwrap();
        assert!((one[(0, 0)] - cplx(1.0, 0.0)).norm() < 1e-15);

        // n = 2 with fixed nodes vs LU inverse.
        let x = [cplx(0.4, 0.3), cplx(-1.1, 0.8)];
        let y = [cplx(2.0, -0.5), cplx(0.9, 1.4)];
        let c = cauchy(&x, &y).unwrap();
        let inv_numeric = Lu::new(&c).unwrap().inverse();
        let inv_closed = inverse_cauchy_closed_form(&x, &y).unwrap();
        let rel = inv_closed.sub(&inv_numeric).norm_fro() / inv_numeric.norm_fro();
        assert!(rel < 1e-10, "closed form vs LU inverse: {rel}");

        // n = 5 with the five-pole example's nodes: C * C^{-1} = I.
        let (mu, _) = five_pole_points();
        let pr = five_pole_pr();
        let c = cauchy(&mu, pr.poles()).unwrap();
        let inv = inverse_cauchy_closed_form(&mu, pr.poles()).unwrap();
        let resid = c.mul(&inv).sub(&ComplexMatrix::identity(5)).norm_fro();
        assert!(resid < 1e-9, "C C^-1 - I = {resid}");

        assert!(inverse_cauchy_closed_form(&[cplx(1.0, 0.0), cplx(1.0, 0.0)], &[cplx(2.0, 0.0), cplx(3.0, 0.0)])
            .is_err());
    }

    #[test]
    fn build_loewner_one_point() {
        // H(s) = 1/(s+1), mu = [1], lambda = [0]: v = 0.5, w = 1.
        let pr = SisoPoleResidue::new(vec![cplx(-1.0, 0.0)], vec![cplx(1.0, 0.0)]).unwrap();
        let sys = SystemModel::PoleResidue(pr.clone());
        let data =
            TangentialDataSet::sample_siso(&sys, vec![cplx(1.0, 0.0)], vec![cplx(0.0, 0.0)]).unwrap();
        let quad = build_loewner(&data).unwrap();
        assert!((quad.l[(0, 0)] - cplx(-0.5, 0.0)).norm() < 1e-15);
        assert!((quad.ls[(0, 0)] - cplx(0.5, 0.0)).norm() < 1e-15);
        let report = factorization_residuals(&quad, &sys, &data).unwrap();
        assert!(report.max_relative() < 1e-14);
        // 1x1 pencil eigenvalue is the pole.
        let g = generalized_eig(&quad.ls, &quad.l).unwrap();
        assert!((g.values[0] - cplx(-1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn siso_directions_reduce_to_scalar_formula() {
        let pr = example1_pr();
        let sys = SystemModel::PoleResidue(pr);
        let mu = vec![cplx(0.0, 1.0), cplx(0.0, -1.0)];
        let lambda = vec![cplx(0.0, 0.0), cplx(1.0, 0.0)];
        let data = TangentialDataSet::sample_siso(&sys, mu.clone(), lambda.clone()).unwrap();
        let quad = build_loewner(&data).unwrap();
        let v = data.siso_left_values();
        let w = data.siso_right_values();
        for i in 0..2 {
            for j in 0..2 {
                let expect = (v[i] - w[j]) / (mu[i] - lambda[j]);
                assert!((quad.l[(i, j)] - expect).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn example1_setting1_pencil_eigenvalues() {
        let sys = SystemModel::PoleResidue(example1_pr());
        let data = TangentialDataSet::sample_siso(
            &sys,
            vec![cplx(0.0, 1.0), cplx(0.0, -1.0)],
            vec![cplx(0.0, 0.0), cplx(1.0, 0.0)],
        )
        .unwrap();
        let quad = build_loewner(&data).unwrap();
        let g = quad.pencil_eigenvalues().unwrap();
        let idx = greedy_match(&[cplx(-2.1, 0.0), cplx(-0.1, 0.0)], &g.values).unwrap();
        assert!((g.values[idx[0]] - cplx(-2.1, 0.0)).norm() < 1e-10);
        assert!((g.values[idx[1]] - cplx(-0.1, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn hermite_quadruple_small_cases() {
        let pr = SisoPoleResidue::new(vec![cplx(-1.0, 0.0)], vec![cplx(1.0, 0.0)]).unwrap();
        let sys = SystemModel::PoleResidue(pr);
        // q = 1: pure diagonal.
        let data = HermiteDataSet::sample(&sys, vec![cplx(2.0, 0.0)]).unwrap();
        let quad = build_hermite_loewner(&data).unwrap();
        let v = 1.0 / 3.0;
        let vp = -1.0 / 9.0;
        assert!((quad.l[(0, 0)] - cplx(vp, 0.0)).norm() < 1e-15);
        assert!((quad.ls[(0, 0)] - cplx(v + 2.0 * vp, 0.0)).norm() < 1e-15);

        // H(s) = 1/(s+1), mu = [0, 1]: hand-computed divided differences.
        let data = HermiteDataSet::sample(&sys, vec![cplx(0.0, 0.0), cplx(1.0, 0.0)]).unwrap();
        let quad = build_hermite_loewner(&data).unwrap();
        let expect = [[-1.0, -0.5], [-0.5, -0.25]];
        for i in 0..2 {
            for j in 0..2 {
                assert!((quad.l[(i, j)] - cplx(expect[i][j], 0.0)).norm() < 1e-15, "L[{i}{j}]");
            }
        }
    }

    #[test]
    fn hermite_pencil_recovers_poles() {
        // The five-pole Hermite pencil is ill-conditioned (eta ~ 1e8);
        // 1e-6 is what double precision affords here, while the
        // better-conditioned systems below get 1e-8.
        let pr = five_pole_pr();
        let sys = SystemModel::PoleResidue(pr.clone());
        let (mu, _) = five_pole_points();
        let mu_pos: Vec<C64> = mu.iter().map(|z| -z).collect();
        let data = HermiteDataSet::sample(&sys, mu_pos).unwrap();
        let quad = build_hermite_loewner(&data).unwrap();
        let g = quad.pencil_eigenvalues().unwrap();
        let idx = greedy_match(pr.poles(), &g.values).unwrap();
        for (p, &j) in pr.poles().iter().zip(&idx) {
            assert!((g.values[j] - p).norm() < 1e-6, "pole {p} vs {}", g.values[j]);
        }
        let report = factorization_residuals_hermite(&quad, &pr, &data).unwrap();
        assert!(report.max_relative() < 1e-12, "hermite factorization {:?}", report.entries);
    }

    #[test]
    fn exact_data_recovers_poles_to_1e8() {
        // Order-10 system with interlaced points: pencil eigenvalues hit
        // the poles to 1e-8 absolute.
        let poles: Vec<C64> = (1..=10).map(|i| cplx(-(i as f64), 0.0)).collect();
        let pr = SisoPoleResidue::new(poles.clone(), vec![cplx(1.0, 0.0); 10]).unwrap();
        let sys = SystemModel::PoleResidue(pr);
        let mu: Vec<C64> = (0..10).map(|i| cplx(-9.75 + i as f64, 0.0)).collect();
        let lambda: Vec<C64> = (0..10).map(|i| cplx(-10.25 + i as f64, 0.0)).collect();
        let data = TangentialDataSet::sample_siso(&sys, mu, lambda).unwrap();
        let quad = build_loewner(&data).unwrap();
        let g = quad.pencil_eigenvalues().unwrap();
        let idx = greedy_match(&poles, &g.values).unwrap();
        for (p, &j) in poles.iter().zip(&idx) {
            assert!((g.values[j] - p).norm() < 1e-8, "pole {p} vs {}", g.values[j]);
        }
    }

    #[test]
    fn hermite_matches_distinct_point_limit() {
        let pr = example1_pr();
        let sys = SystemModel::PoleResidue(pr);
        let mu = vec![cplx(0.5, 0.0), cplx(1.0, 0.0), cplx(1.5, 0.0)];
        let h = 1e-7;
        let lambda: Vec<C64> = mu.iter().map(|&m| m + h).collect();
        let hermite = build_hermite_loewner(&HermiteDataSet::sample(&sys, mu.clone()).unwrap()).unwrap();
        let finite = build_loewner(&TangentialDataSet::sample_siso(&sys, mu, lambda).unwrap()).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let d = (hermite.l[(i, j)] - finite.l[(i, j)]).norm();
                assert!(d < 1e-5 * (1.0 + hermite.l[(i, j)].norm()), "L[{i}{j}] differs by {d}");
                let ds = (hermite.ls[(i, j)] - finite.ls[(i, j)]).norm();
                assert!(ds < 1e-5 * (1.0 + hermite.ls[(i, j)].norm()), "Ls[{i}{j}] differs by {ds}");
            }
        }
    }

    #[test]
    fn krylov_projectors_factor_the_quadruple() {
        let pr = example1_pr();
        let ss = pole_residue_realization_diagonal(&pr);
        let sys = SystemModel::StateSpace(ss.clone());
        // n = 1 sanity: H(s) = 1/(s+1), mu = [1] gives K_L = [0.5].
        let one_pole = SisoPoleResidue::new(vec![cplx(-1.0, 0.0)], vec![cplx(1.0, 0.0)]).unwrap();
        let one_ss = pole_residue_realization_diagonal(&one_pole);
        let d1 = TangentialDataSet::sample_siso(
            &SystemModel::StateSpace(one_ss.clone()),
            vec![cplx(1.0, 0.0)],
            vec![cplx(0.0, 0.0)],
        )
        .unwrap();
        let (k_l, _) = krylov_projectors(&one_ss, &d1).unwrap();
        assert!((k_l[(0, 0)] - cplx(0.5, 0.0)).norm() < 1e-15);

        let data = TangentialDataSet::sample_siso(
            &sys,
            vec![cplx(0.0, 2.0), cplx(0.0, -2.0), cplx(3.0, 0.0)],
            vec![cplx(0.25, 0.0), cplx(0.75, 0.0)],
        )
        .unwrap();
        let quad = build_loewner(&data).unwrap();
        let (k_l, k_r) = krylov_projectors(&ss, &data).unwrap();
        let l_resid = quad.l.add(&k_l.mul(&ss.e).mul(&k_r)).norm_fro();
        assert!(l_resid <= 1e-11 * quad.l.norm_fro().max(1.0), "K_L E K_R = -L: {l_resid}");
        let v_resid = quad.v.sub(&k_l.mul(&ss.b)).norm_fro();
        let w_resid = quad.w.sub(&ss.c.mul(&k_r)).norm_fro();
        assert!(v_resid <= 1e-11 && w_resid <= 1e-11);
        let report = factorization_residuals(&quad, &sys, &data).unwrap();
        assert!(report.max_relative() < 1e-11, "{:?}", report.entries);
        assert_eq!(report.projector_product_rank, Some(2));
    }

    #[test]
    fn sylvester_residuals_all_routes() {
        let pr = example1_pr();
        let mu = vec![cplx(0.0, 2.0), cplx(0.0, -2.0)];
        let lambda = vec![cplx(0.25, 0.0), cplx(0.75, 0.0)];
        // Scalar Cauchy route.
        let sys_pr = SystemModel::PoleResidue(pr.clone());
        let data = TangentialDataSet::sample_siso(&sys_pr, mu.clone(), lambda.clone()).unwrap();
        let rep = sylvester_residuals(&sys_pr, &data).unwrap();
        assert!(rep.max_absolute() < 1e-13, "{:?}", rep.entries);
        // State-space route.
        let sys_ss = SystemModel::StateSpace(pole_residue_realization_diagonal(&pr));
        let rep = sylvester_residuals(&sys_ss, &data).unwrap();
        assert!(rep.max_relative() < 1e-12, "{:?}", rep.entries);
    }

    #[test]
    fn mimo_generalized_cauchy_factorization() {
        // Two-output, two-input, three-pole system with tangential data.
        let mp = MimoPoleResidue::new(
            vec![cplx(-1.0, 0.0), cplx(-2.0, 0.5), cplx(-0.5, -1.0)],
            vec![
                vec![cplx(1.0, 0.0), cplx(0.3, -0.2)],
                vec![cplx(-0.4, 0.1), cplx(0.8, 0.0)],
                vec![cplx(0.2, 0.6), cplx(-0.1, 0.9)],
            ],
            vec![
                vec![cplx(0.7, 0.0), cplx(-0.3, 0.4)],
                vec![cplx(0.1, -0.5), cplx(1.1, 0.0)],
                vec![cplx(-0.6, 0.2), cplx(0.4, 0.3)],
            ],
        )
        .unwrap();
        let sys = SystemModel::Mimo(mp.clone());
        let mu = vec![cplx(0.4, 0.9), cplx(1.3, -0.6), cplx(2.2, 0.1), cplx(0.8, -1.4)];
        let lambda = vec![cplx(1.8, 1.1), cplx(0.2, -0.3), cplx(2.6, 0.7)];
        let left_dirs = vec![
            vec![cplx(1.0, 0.0), cplx(0.2, 0.1)],
            vec![cplx(0.0, 1.0), cplx(1.0, 0.0)],
            vec![cplx(0.5, -0.5), cplx(0.3, 0.0)],
            vec![cplx(1.0, 0.3), cplx(-0.2, 0.8)],
        ];
        let right_dirs = vec![
            vec![cplx(1.0, 0.0), cplx(-0.4, 0.2)],
            vec![cplx(0.6, 0.6), cplx(1.0, 0.0)],
            vec![cplx(0.0, -1.0), cplx(0.7, 0.1)],
        ];
        let data =
            TangentialDataSet::sample_tangential(&sys, mu, left_dirs, lambda, right_dirs).unwrap();
        let quad = build_loewner(&data).unwrap();
        let rep = factorization_residuals(&quad, &sys, &data).unwrap();
        assert!(rep.max_relative() < 1e-12, "{:?}", rep.entries);
        let rep = sylvester_residuals(&sys, &data).unwrap();
        assert!(rep.max_relative() < 1e-12, "{:?}", rep.entries);
        // Rank of L reveals the McMillan degree.
        assert_eq!(quad.mcmillan_degree().unwrap(), 3);
    }

    #[test]
    fn mimo_identical_rows_reduce_to_scaled_cauchy() {
        // All rows of L^T equal: C_L = C_{mu,pi} diag(ell^T c_j).
        let mp = MimoPoleResidue::new(
            vec![cplx(-1.0, 0.0), cplx(-2.0, 0.0)],
            vec![vec![cplx(1.0, 0.0), cplx(0.5, 0.0)], vec![cplx(-0.3, 0.2), cplx(0.9, 0.0)]],
            vec![vec![cplx(1.0, 0.0)], vec![cplx(2.0, 0.0)]],
        )
        .unwrap();
        let ell = vec![cplx(0.8, -0.1), cplx(0.4, 0.3)];
        let mu = vec![cplx(0.5, 0.5), cplx(1.5, -0.4), cplx(2.5, 0.0)];
        let c_l = generalized_cauchy_left(&mu, &vec![ell.clone(); 3], &mp).unwrap();
        let c_scalar = cauchy(&mu, mp.poles()).unwrap();
        for j in 0..2 {
            let weight: C64 = ell.iter().zip(&mp.c_vectors()[j]).map(|(&a, &b)| a * b).sum();
            for i in 0..3 {
                assert!((c_l[(i, j)] - c_scalar[(i, j)] * weight).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn generalized_cauchy_rejects_pole_points() {
        let mp = MimoPoleResidue::new(
            vec![cplx(-1.0, 0.0)],
            vec![vec![cplx(1.0, 0.0)]],
            vec![vec![cplx(1.0, 0.0)]],
        )
        .unwrap();
        let r = generalized_cauchy_left(&[cplx(-1.0, 0.0)], &[vec![cplx(1.0, 0.0)]], &mp);
        assert!(matches!(r, Err(Error::EvaluationAtPole { .. })));
    }

    #[test]
    fn polynomial_quadruple_and_factorization() {
        // Degenerate r = 1: L = 0, Ls = a0 * ones.
        let poly = PolynomialTF::new(vec![cplx(2.5, 0.0)]).unwrap();
        let sys = SystemModel::Polynomial(poly);
        let mu = vec![cplx(1.0, 0.0), cplx(2.0, 0.0)];
        let lambda = vec![cplx(-1.0, 0.0), cplx(3.0, 0.0)];
        let data = TangentialDataSet::sample_siso(&sys, mu, lambda).unwrap();
        let quad = build_loewner(&data).unwrap();
        assert!(quad.l.norm_fro() < 1e-14);
        for i in 0..2 {
            for j in 0..2 {
                assert!((quad.ls[(i, j)] - cplx(2.5, 0.0)).norm() < 1e-13);
            }
        }
        let rep = factorization_residuals(&quad, &sys, &data).unwrap();
        assert!(rep.max_absolute() < 1e-12, "{:?}", rep.entries);

        // General r = 3 case against the Vandermonde sum, plus recovery.
        let poly = PolynomialTF::new(vec![cplx(1.0, 0.0), cplx(0.0, 0.0), cplx(1.0, 0.0)]).unwrap();
        let sys = SystemModel::Polynomial(poly.clone());
        let mu = vec![cplx(0.5, 0.0), cplx(1.5, 0.0), cplx(-0.7, 0.0)];
        let lambda = vec![cplx(1.0, 0.0), cplx(-1.3, 0.0), cplx(2.2, 0.0)];
        let data = TangentialDataSet::sample_siso(&sys, mu.clone(), lambda.clone()).unwrap();
        let quad = build_loewner(&data).unwrap();
        let rep = factorization_residuals(&quad, &sys, &data).unwrap();
        assert!(rep.max_relative() < 1e-12, "{:?}", rep.entries);
        // Vandermonde sum of homogeneous terms: the degree-(t-1) block is
        // V_t(mu)^T EXCH_t V_t(lam) (exchange matrix flips the lambda
        // powers so the product is mu^{t-1} + mu^{t-2} lam + ... + lam^{t-1}).
        let mut l_sum = ComplexMatrix::zeros(3, 3);
        for t in 1..=2usize {
            let a_t = poly.coefficients()[t];
            let vm = vandermonde(&mu, t);
            let vl = vandermonde(&lambda, t);
            let exch = ComplexMatrix::from_fn(t, t, |i, j| {
                if i + j == t - 1 { cplx(1.0, 0.0) } else { C64::default() }
            });
            l_sum = l_sum.add(&vm.transpose().mul(&exch).mul(&vl).scale(a_t));
        }
        assert!(quad.l.sub(&l_sum).norm_fro() < 1e-12);
        // H(s) = s^2 + 1 recovered through the pseudoinverse formula.
        for s in [cplx(0.1, 0.0), cplx(2.0, 1.0)] {
            let h = quad.recover_transfer(s).unwrap();
            let expect = s * s + 1.0;
            assert!((h[(0, 0)] - expect).norm() < 1e-9 * expect.norm().max(1.0));
        }
    }

    #[test]
    fn vandermonde_shapes() {
        let row = vandermonde(&[cplx(3.0, 0.0), cplx(-1.0, 0.0)], 1);
        assert_eq!((row.rows(), row.cols()), (1, 2));
        assert!((row[(0, 0)] - cplx(1.0, 0.0)).norm() < 1e-15);
        let col = vandermonde(&[cplx(2.0, 0.0)], 3);
        for (i, want) in [1.0, 2.0, 4.0].iter().enumerate() {
            assert!((col[(i, 0)] - cplx(*want, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn recovery_exact_and_redundant() {
        let pr = five_pole_pr();
        let sys = SystemModel::PoleResidue(pr.clone());
        let (mu, lambda) = five_pole_points();
        let eval_pts =
            [cplx(0.17, 0.31), cplx(1.4, -0.8), cplx(-0.35, 1.9), cplx(2.3, 0.4), cplx(0.6, -1.2)];
        // Exact-size data q = k = n = 5.
        let data = TangentialDataSet::sample_siso(&sys, mu.clone(), lambda.clone()).unwrap();
        let quad = build_loewner(&data).unwrap();
        for s in eval_pts {
            let want = transfer_eval(&sys, s).unwrap()[(0, 0)];
            let got = quad.recover_transfer(s).unwrap()[(0, 0)];
            assert!((want - got).norm() <= 1e-8 * want.norm().max(1e-6), "s = {s}: {got} vs {want}");
        }
        // Redundant data q = k = 8 > n = 5: same recovery guarantee.
        let mut mu8 = mu.clone();
        mu8.extend([cplx(-1.4, 0.6), cplx(-1.8, -0.9), cplx(-2.3, 0.2)]);
        let mut lam8 = lambda.clone();
        lam8.extend([cplx(1.5, 0.5), cplx(1.9, -0.7), cplx(2.4, 0.9)]);
        let data = TangentialDataSet::sample_siso(&sys, mu8, lam8).unwrap();
        let quad = build_loewner(&data).unwrap();
        assert_eq!(quad.mcmillan_degree().unwrap(), 5);
        for s in eval_pts {
            let want = transfer_eval(&sys, s).unwrap()[(0, 0)];
            let got = quad.recover_transfer(s).unwrap()[(0, 0)];
            assert!((want - got).norm() <= 1e-8 * want.norm().max(1e-6), "redundant s = {s}");
        }
        // At a pencil eigenvalue the recovery refuses.
        assert!(matches!(
            quad.recover_transfer(cplx(-1.0, 0.0)),
            Err(Error::EvaluationAtPencilEigenvalue(_))
        ));
    }

    #[test]
    fn scalar_recovery_by_hand() {
        let pr = SisoPoleResidue::new(vec![cplx(-1.0, 0.0)], vec![cplx(1.0, 0.0)]).unwrap();
        let sys = SystemModel::PoleResidue(pr);
        let data =
            TangentialDataSet::sample_siso(&sys, vec![cplx(1.0, 0.0)], vec![cplx(0.0, 0.0)]).unwrap();
        let quad = build_loewner(&data).unwrap();
        let h = quad.recover_transfer(cplx(2.0, 0.0)).unwrap();
        assert!((h[(0, 0)] - cplx(1.0 / 3.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn hankel_pencil_patterns() {
        // h = (1, 0, 0, ...): H = e1 e1^T.
        let h1: Vec<ComplexMatrix> = (0..6)
            .map(|i| {
                ComplexMatrix::from_rows(&[vec![if i == 0 { cplx(1.0, 0.0) } else { C64::default() }]])
                    .unwrap()
            })
            .collect();
        let quad = hankel_pencil(&h1, 3, 3).unwrap();
        assert!((quad.l[(0, 0)] - cplx(1.0, 0.0)).norm() < 1e-15);
        assert!(quad.l.norm_fro() - 1.0 < 1e-15);

        // A = [[-1]], B = C = [1], q = k = 2: H = [[1,-1],[-1,1]].
        let ss = StateSpaceSystem::standard(
            ComplexMatrix::identity(1),
            ComplexMatrix::from_rows(&[vec![cplx(-1.0, 0.0)]]).unwrap(),
            ComplexMatrix::identity(1),
        )
        .unwrap();
        let markov = markov_parameters(&ss, 4).unwrap();
        let quad = hankel_pencil(&markov, 2, 2).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let want = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
                assert!((quad.l[(i, j)] - cplx(want, 0.0)).norm() < 1e-15);
            }
        }
        let rep = hankel_sylvester_residuals(&quad).unwrap();
        assert!(rep.max_absolute() < 1e-13, "{:?}", rep.entries);
        assert_eq!(quad.mcmillan_degree().unwrap(), 1);

        assert!(hankel_pencil(&markov, 3, 3).is_err(), "needs q+k parameters");
    }

    #[test]
    fn hankel_rank_reveals_order() {
        // Balanced seven-pole system (poles inside the unit disk) with
        // q = k = 9 > n: numerical rank of H equals n. Systems with
        // widely spread poles grade the Hankel matrix past what f64
        // resolves, so the rank statement needs |pole| = O(1) data.
        let n = 7;
        let a = ComplexMatrix::from_fn(n, n, |i, j| {
            if i == j {
                let angle = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
                cplx(0.85 * angle.cos(), 0.85 * angle.sin())
            } else {
                C64::default()
            }
        });
        let b = ComplexMatrix::from_fn(n, 1, |_, _| cplx(1.0, 0.0));
        let c = ComplexMatrix::from_fn(1, n, |_, _| cplx(1.0, 0.0));
        let ss = StateSpaceSystem::standard(c, a, b).unwrap();
        let markov = markov_parameters(&ss, 18).unwrap();
        let quad = hankel_pencil(&markov, 9, 9).unwrap();
        assert_eq!(numerical_rank(&quad.l, RANK_RTOL).unwrap(), n);
    }

    #[test]
    fn hankel_singular_values_first_order() {
        // H(s) = 1/(s+1): P = Q = 1/2, sigma = 1/2.
        let pr = SisoPoleResidue::new(vec![cplx(-1.0, 0.0)], vec![cplx(1.0, 0.0)]).unwrap();
        let sv = hankel_singular_values_via_loewner(&pr).unwrap();
        assert!((sv[0] - 0.5).abs() < 1e-12, "sigma = {}", sv[0]);
        // Scaling: H(s) = 2/(s+1) doubles the Hankel singular value.
        let pr2 = SisoPoleResidue::new(vec![cplx(-1.0, 0.0)], vec![cplx(2.0, 0.0)]).unwrap();
        let sv2 = hankel_singular_values_via_loewner(&pr2).unwrap();
        assert!((sv2[0] - 1.0).abs() < 1e-12);
        // Unstable pole refused.
        let unstable = SisoPoleResidue::new(vec![cplx(1.0, 0.0)], vec![cplx(1.0, 0.0)]).unwrap();
        assert!(matches!(hankel_singular_values_via_loewner(&unstable), Err(Error::UnstablePole { .. })));
    }

    #[test]
    fn hankel_singular_values_match_gramian_product() {
        // Ten poles -1..-10, unit residues: compare with sqrt(eig(P Q)),
        // P = C_{-pi,pi*}, Q = -Gamma* C_{pi*,-pi} Gamma.
        let poles: Vec<C64> = (1..=10).map(|i| cplx(-(i as f64), 0.0)).collect();
        let residues = vec![cplx(1.0, 0.0); 10];
        let pr = SisoPoleResidue::new(poles.clone(), residues.clone()).unwrap();
        let sv = hankel_singular_values_via_loewner(&pr).unwrap();
        let minus_pi: Vec<C64> = poles.iter().map(|p| -p).collect();
        let pi_conj: Vec<C64> = poles.iter().map(|p| p.conj()).collect();
        let p_gram = cauchy(&minus_pi, &pi_conj).unwrap();
        let gamma = ComplexMatrix::diag(&residues);
        let q_gram = gamma
            .conj()
            .mul(&cauchy(&pi_conj, &minus_pi).unwrap())
            .mul(&gamma)
            .scale(cplx(-1.0, 0.0));
        let mut gram_sv: Vec<f64> =
            eig_small(&p_gram.mul(&q_gram)).unwrap().iter().map(|z| z.norm().sqrt()).collect();
        gram_sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
        // Absolute agreement: both eig routes carry ~eps*||M|| error, so
        // the smallest HSV (3.6e-5) cannot match to 1e-8 *relative*.
        let scale = gram_sv[0].max(1.0);
        for (a, b) in sv.iter().zip(&gram_sv) {
            assert!((a - b).abs() <= 1e-8 * scale, "{a} vs {b}");
        }
    }

    #[test]
    fn eigenvector_formulas_and_residue_normalization() {
        let pr = five_pole_pr();
        let sys = SystemModel::PoleResidue(pr.clone());
        let (mu, lambda) = five_pole_points();
        let data = TangentialDataSet::sample_siso(&sys, mu.clone(), lambda.clone()).unwrap();
        let quad = build_loewner(&data).unwrap();
        let (q_mat, p_mat) = cauchy_eigenvectors(&pr, &mu, &lambda).unwrap();
        for i in 0..5 {
            let qi = q_mat.col(i);
            let pi_vec = p_mat.col(i);
            let pole = pr.poles()[i];
            // Ls q = pi L q.
            let lhs = quad.ls.mul_vec(&qi);
            let rhs: Vec<C64> = quad.l.mul_vec(&qi).iter().map(|z| z * pole).collect();
            let num = vec_norm(&lhs.iter().zip(&rhs).map(|(a, b)| a - b).collect::<Vec<_>>());
            assert!(num <= 1e-9 * vec_norm(&rhs).max(1e-12), "right eigvec {i}: {num}");
            // p^T Ls = pi p^T L.
            let lhs_l = quad.ls.premul_vec(&pi_vec);
            let rhs_l: Vec<C64> = quad.l.premul_vec(&pi_vec).iter().map(|z| z * pole).collect();
            let num_l = vec_norm(&lhs_l.iter().zip(&rhs_l).map(|(a, b)| a - b).collect::<Vec<_>>());
            assert!(num_l <= 1e-9 * vec_norm(&rhs_l).max(1e-12), "left eigvec {i}");
            // p^T L q = -gamma.
            let plq = crate::numerics::dot_t(&pi_vec, &quad.l.mul_vec(&qi));
            assert!((plq + pr.residues()[i]).norm() <= 1e-9 * pr.residues()[i].norm(), "residue {i}");
        }
        // Closed-form inverse route agrees with the pseudoinverse route.
        let (q_cf, p_cf) = cauchy_eigenvectors_closed_form(&pr, &mu, &lambda).unwrap();
        assert!(q_cf.sub(&q_mat).norm_fro() <= 1e-8 * q_mat.norm_fro());
        assert!(p_cf.sub(&p_mat).norm_fro() <= 1e-8 * p_mat.norm_fro());
    }

    #[test]
    fn coincident_left_right_eigenvectors() {
        let pr = example1_pr();
        let mu = vec![cplx(1.0, 0.0), cplx(2.0, 0.0)];
        let (q_mat, p_mat) = cauchy_eigenvectors(&pr, &mu, &mu).unwrap();
        assert!(q_mat.sub(&p_mat).norm_fro() < 1e-13);
    }

    #[test]
    fn mirror_point_identities_and_derivative_diagonal() {
        let pr = example1_pr();
        let rep = mirror_point_sylvester_residuals(&pr).unwrap();
        assert!(rep.max_relative() < 1e-11, "{:?}", rep.entries);
        // Diagonal entries are H'(-pi_i) and d(sH)/ds|_{-pi_i}.
        let sys = SystemModel::PoleResidue(pr.clone());
        let mu: Vec<C64> = pr.poles().iter().map(|p| -p.conj()).collect();
        let data = HermiteDataSet::sample(&sys, mu.clone()).unwrap();
        let quad = build_hermite_loewner(&data).unwrap();
        for (i, &m) in mu.iter().enumerate() {
            let h = transfer_eval(&sys, m).unwrap()[(0, 0)];
            let dh = transfer_derivative(&sys, m).unwrap()[(0, 0)];
            assert!((quad.l[(i, i)] - dh).norm() < 1e-13, "L diag = H'");
            assert!((quad.ls[(i, i)] - (h + m * dh)).norm() < 1e-13, "Ls diag = d(sH)/ds");
        }
    }

    #[test]
    fn rank_reveals_mcmillan_degree() {
        let pr = five_pole_pr();
        let sys = SystemModel::PoleResidue(pr);
        let mu: Vec<C64> = (0..7).map(|i| cplx(0.3 + 0.4 * i as f64, 0.8)).collect();
        let lambda: Vec<C64> = (0..6).map(|i| cplx(0.5 + 0.4 * i as f64, -0.9)).collect();
        let data = TangentialDataSet::sample_siso(&sys, mu, lambda).unwrap();
        let quad = build_loewner(&data).unwrap();
        assert_eq!(quad.mcmillan_degree().unwrap(), 5);
    }

    #[test]
    fn dataset_validation() {
        let one = vec![cplx(1.0, 0.0)];
        // mu/lambda collision.
        assert!(TangentialDataSet::from_siso_values(
            vec![cplx(1.0, 0.0)],
            one.clone(),
            vec![cplx(1.0, 0.0)],
            one.clone(),
        )
        .is_err());
        // Repeated mu.
        assert!(TangentialDataSet::from_siso_values(
            vec![cplx(1.0, 0.0), cplx(1.0, 0.0)],
            vec![cplx(1.0, 0.0); 2],
            vec![cplx(0.0, 0.0)],
            one,
        )
        .is_err());
        // Hermite repeated point.
        assert!(HermiteDataSet::new(
            vec![cplx(1.0, 0.0), cplx(1.0, 0.0)],
            vec![cplx(1.0, 0.0); 2],
            vec![cplx(1.0, 0.0); 2],
        )
        .is_err());
    }

    #[test]
    fn redundant_square_pencil_pushes_to_pseudoinverse_path() {
        // q = k = 8 > n = 2 makes L singular: the eigensolver refuses and
        // the recovery formula is the supported route.
        let pr = example1_pr();
        let sys = SystemModel::PoleResidue(pr);
        let mu: Vec<C64> = (0..8).map(|i| cplx(1.0 + i as f64 * 0.5, 1.0)).collect();
        let lambda: Vec<C64> = (0..8).map(|i| cplx(1.25 + i as f64 * 0.5, -1.0)).collect();
        let data = TangentialDataSet::sample_siso(&sys, mu, lambda).unwrap();
        let quad = build_loewner(&data).unwrap();
        assert!(matches!(quad.pencil_eigenvalues(), Err(Error::SingularPencilFactor { .. })));
        assert!(cond2(&quad.l).unwrap() > 1e12);
    }

    #[test]
    fn zero_diag_cauchy() {
        let x = [cplx(0.1, 0.0), cplx(0.7, 0.0)];
        let c = cauchy_zero_diag(&x).unwrap();
        assert_eq!(c[(0, 0)], C64::default());
        assert!((c[(0, 1)] - cplx(1.0 / (0.1 - 0.7), 0.0)).norm() < 1e-15);
    }
}
