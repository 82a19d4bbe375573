//! LTI system models and transfer-function evaluation.
//!
//! Four interchangeable representations: descriptor state-space
//! (C, E, A, B), SISO pole-residue, MIMO pole-residue and polynomial.
//! All of them evaluate H(s) and H'(s); the pole-residue and polynomial
//! forms also convert to canonical state-space realizations.

use crate::error::{Error, Result};
use crate::numerics::{c64, C64, ComplexMatrix, Lu};

/// Poles closer than this are rejected as coincident.
pub const POLE_DISTINCT_TOL: f64 = 1e-10;

/// Guard radius around poles for transfer evaluation.
fn pole_guard(pole: C64) -> f64 {
    1e-12 * (1.0 + pole.norm())
}

/// Descriptor state-space system `E x' = A x + B u`, `y = C x` with
/// transfer function `H(s) = C (sE - A)^{-1} B`.
#[derive(Clone, Debug)]
pub struct StateSpaceSystem {
    pub c: ComplexMatrix,
    pub e: ComplexMatrix,
    pub a: ComplexMatrix,
    pub b: ComplexMatrix,
}

impl StateSpaceSystem {
    pub fn new(c: ComplexMatrix, e: ComplexMatrix, a: ComplexMatrix, b: ComplexMatrix) -> Result<Self> {
        let n = a.rows();
        if !a.is_square() || !e.is_square() || e.rows() != n || c.cols() != n || b.rows() != n {
            return Err(Error::Dimension(format!(
                "state-space dimensions inconsistent: C {}x{}, E {}x{}, A {}x{}, B {}x{}",
                c.rows(), c.cols(), e.rows(), e.cols(), a.rows(), a.cols(), b.rows(), b.cols()
            )));
        }
        for m in [&c, &e, &a, &b] {
            m.check_finite()?;
        }
        Ok(StateSpaceSystem { c, e, a, b })
    }

    /// With E = I (ordinary state space).
    pub fn standard(c: ComplexMatrix, a: ComplexMatrix, b: ComplexMatrix) -> Result<Self> {
        let e = ComplexMatrix::identity(a.rows());
        Self::new(c, e, a, b)
    }

    pub fn order(&self) -> usize {
        self.a.rows()
    }

    pub fn num_outputs(&self) -> usize {
        self.c.rows()
    }

    pub fn num_inputs(&self) -> usize {
        self.b.cols()
    }

    /// Factorization of `sE - A`, the inverse resolvent at `s`.
    pub fn resolvent_lu(&self, s: C64) -> Result<Lu> {
        let pencil = self.e.scale(s).sub(&self.a);
        Lu::new(&pencil).map_err(|_| Error::Singular(format!("sE - A is singular at s = {s}")))
    }
}

/// SISO strictly proper system given by its partial fraction decomposition
/// `H(s) = sum_i gamma_i / (s - pi_i)`.
#[derive(Clone, Debug)]
pub struct SisoPoleResidue {
    poles: Vec<C64>,
    residues: Vec<C64>,
}

impl SisoPoleResidue {
    pub fn new(poles: Vec<C64>, residues: Vec<C64>) -> Result<Self> {
        if poles.is_empty() || poles.len() != residues.len() {
            return Err(Error::Dimension(format!(
                "{} poles vs {} residues",
                poles.len(),
                residues.len()
            )));
        }
        check_distinct(&poles)?;
        for (i, g) in residues.iter().enumerate() {
            if !g.re.is_finite() || !g.im.is_finite() {
                return Err(Error::NonFinite { row: i, col: 0, value: format!("{g}") });
            }
            if g.norm() == 0.0 {
                return Err(Error::InvalidArgument(format!("residue {i} is zero")));
            }
        }
        Ok(SisoPoleResidue { poles, residues })
    }

    pub fn order(&self) -> usize {
        self.poles.len()
    }

    pub fn poles(&self) -> &[C64] {
        &self.poles
    }

    pub fn residues(&self) -> &[C64] {
        &self.residues
    }
}

/// MIMO strictly proper system `H(s) = sum_i c_i b_i^T / (s - pi_i)`.
#[derive(Clone, Debug)]
pub struct MimoPoleResidue {
    poles: Vec<C64>,
    /// Column vectors c_i, each of length p.
    c_vectors: Vec<Vec<C64>>,
    /// Column vectors b_i, each of length m.
    b_vectors: Vec<Vec<C64>>,
}

impl MimoPoleResidue {
    pub fn new(poles: Vec<C64>, c_vectors: Vec<Vec<C64>>, b_vectors: Vec<Vec<C64>>) -> Result<Self> {
        if poles.is_empty() || poles.len() != c_vectors.len() || poles.len() != b_vectors.len() {
            return Err(Error::Dimension("pole/residue-vector counts differ".into()));
        }
        check_distinct(&poles)?;
        let p = c_vectors[0].len();
        let m = b_vectors[0].len();
        if p == 0 || m == 0 {
            return Err(Error::Dimension("direction vectors must be non-empty".into()));
        }
        for (i, (cv, bv)) in c_vectors.iter().zip(&b_vectors).enumerate() {
            if cv.len() != p || bv.len() != m {
                return Err(Error::Dimension(format!("residue vectors at index {i} have inconsistent lengths")));
            }
            if cv.iter().all(|z| z.norm() == 0.0) || bv.iter().all(|z| z.norm() == 0.0) {
                return Err(Error::InvalidArgument(format!("residue vector {i} is identically zero")));
            }
        }
        Ok(MimoPoleResidue { poles, c_vectors, b_vectors })
    }

    pub fn order(&self) -> usize {
        self.poles.len()
    }

    pub fn poles(&self) -> &[C64] {
        &self.poles
    }

    pub fn c_vectors(&self) -> &[Vec<C64>] {
        &self.c_vectors
    }

    pub fn b_vectors(&self) -> &[Vec<C64>] {
        &self.b_vectors
    }

    pub fn num_outputs(&self) -> usize {
        self.c_vectors[0].len()
    }

    pub fn num_inputs(&self) -> usize {
        self.b_vectors[0].len()
    }

    /// C = [c_1 ... c_n] as a p x n matrix.
    pub fn c_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.num_outputs(), self.order(), |i, j| self.c_vectors[j][i])
    }

    /// B = [b_1 ... b_n]^T as an n x m matrix.
    pub fn b_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.order(), self.num_inputs(), |i, j| self.b_vectors[i][j])
    }
}

/// Polynomial transfer function `H(s) = a_{r-1} s^{r-1} + ... + a_1 s + a_0`.
#[derive(Clone, Debug)]
pub struct PolynomialTF {
    coefficients: Vec<C64>,
}

impl PolynomialTF {
    /// Coefficients in ascending order a_0, ..., a_{r-1}.
    pub fn new(coefficients: Vec<C64>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::Dimension("polynomial needs at least one coefficient".into()));
        }
        if coefficients.last().unwrap().norm() == 0.0 && coefficients.len() > 1 {
            return Err(Error::InvalidArgument("leading coefficient is zero".into()));
        }
        Ok(PolynomialTF { coefficients })
    }

    pub fn degree_bound(&self) -> usize {
        self.coefficients.len()
    }

    pub fn coefficients(&self) -> &[C64] {
        &self.coefficients
    }

    pub fn eval(&self, s: C64) -> C64 {
        // Horner, highest first.
        self.coefficients.iter().rev().fold(C64::default(), |acc, &a| acc * s + a)
    }

    pub fn eval_derivative(&self, s: C64) -> C64 {
        self.coefficients
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(C64::default(), |acc, (k, &a)| acc * s + a * k as f64)
    }
}

/// Tagged union over the four model forms.
#[derive(Clone, Debug)]
pub enum SystemModel {
    StateSpace(StateSpaceSystem),
    PoleResidue(SisoPoleResidue),
    Mimo(MimoPoleResidue),
    Polynomial(PolynomialTF),
}

impl SystemModel {
    pub fn num_outputs(&self) -> usize {
        match self {
            SystemModel::StateSpace(s) => s.num_outputs(),
            SystemModel::PoleResidue(_) | SystemModel::Polynomial(_) => 1,
            SystemModel::Mimo(m) => m.num_outputs(),
        }
    }

    pub fn num_inputs(&self) -> usize {
        match self {
            SystemModel::StateSpace(s) => s.num_inputs(),
            SystemModel::PoleResidue(_) | SystemModel::Polynomial(_) => 1,
            SystemModel::Mimo(m) => m.num_inputs(),
        }
    }
}

fn check_distinct(poles: &[C64]) -> Result<()> {
    for i in 0..poles.len() {
        for j in i + 1..poles.len() {
            if (poles[i] - poles[j]).norm() < POLE_DISTINCT_TOL {
                return Err(Error::RepeatedNodes { i, j, value: format!("{}", poles[i]) });
            }
        }
    }
    Ok(())
}

fn check_not_pole(poles: &[C64], s: C64) -> Result<()> {
    for (i, &p) in poles.iter().enumerate() {
        if (s - p).norm() < pole_guard(p) {
            return Err(Error::EvaluationAtPole { point: format!("{s}"), pole: format!("{p}"), index: i });
        }
    }
    Ok(())
}

/// Evaluates the p x m transfer function of any model form at `s`.
pub fn transfer_eval(sys: &SystemModel, s: C64) -> Result<ComplexMatrix> {
    match sys {
        SystemModel::StateSpace(ss) => {
            let lu = ss.resolvent_lu(s)?;
            Ok(ss.c.mul(&lu.solve_mat(&ss.b)))
        }
        SystemModel::PoleResidue(pr) => {
            check_not_pole(&pr.poles, s)?;
            let h: C64 = pr.poles.iter().zip(&pr.residues).map(|(&p, &g)| g / (s - p)).sum();
            Ok(ComplexMatrix::from_rows(&[vec![h]])?)
        }
        SystemModel::Mimo(mp) => {
            check_not_pole(&mp.poles, s)?;
            let (p, m) = (mp.num_outputs(), mp.num_inputs());
            let mut h = ComplexMatrix::zeros(p, m);
            for (k, &pole) in mp.poles.iter().enumerate() {
                let w = (s - pole).inv();
                for i in 0..p {
                    for j in 0..m {
                        h[(i, j)] += mp.c_vectors[k][i] * mp.b_vectors[k][j] * w;
                    }
                }
            }
            Ok(h)
        }
        SystemModel::Polynomial(poly) => Ok(ComplexMatrix::from_rows(&[vec![poly.eval(s)]])?),
    }
}

/// Evaluates H'(s). For state space: -C Phi(s) E Phi(s) B.
pub fn transfer_derivative(sys: &SystemModel, s: C64) -> Result<ComplexMatrix> {
    match sys {
        SystemModel::StateSpace(ss) => {
            let lu = ss.resolvent_lu(s)?;
            let phi_b = lu.solve_mat(&ss.b);
            let e_phi_b = ss.e.mul(&phi_b);
            let phi_e_phi_b = lu.solve_mat(&e_phi_b);
            Ok(ss.c.mul(&phi_e_phi_b).scale(c64(-1.0, 0.0)))
        }
        SystemModel::PoleResidue(pr) => {
            check_not_pole(&pr.poles, s)?;
            let h: C64 = pr
                .poles
                .iter()
                .zip(&pr.residues)
                .map(|(&p, &g)| {
                    let d = s - p;
                    -g / (d * d)
                })
                .sum();
            Ok(ComplexMatrix::from_rows(&[vec![h]])?)
        }
        SystemModel::Mimo(mp) => {
            check_not_pole(&mp.poles, s)?;
            let (p, m) = (mp.num_outputs(), mp.num_inputs());
            let mut h = ComplexMatrix::zeros(p, m);
            for (k, &pole) in mp.poles.iter().enumerate() {
                let d = s - pole;
                let w = -(d * d).inv();
                for i in 0..p {
                    for j in 0..m {
                        h[(i, j)] += mp.c_vectors[k][i] * mp.b_vectors[k][j] * w;
                    }
                }
            }
            Ok(h)
        }
        SystemModel::Polynomial(poly) => Ok(ComplexMatrix::from_rows(&[vec![poly.eval_derivative(s)]])?),
    }
}

/// Canonical realization of a SISO pole-residue system:
/// `A = Pi Gamma, E = Gamma, B = Gamma 1, C = 1^T Gamma`.
pub fn pole_residue_realization(pr: &SisoPoleResidue) -> StateSpaceSystem {
    let n = pr.order();
    let gamma = ComplexMatrix::diag(&pr.residues);
    let a = ComplexMatrix::from_fn(n, n, |i, j| if i == j { pr.poles[i] * pr.residues[i] } else { C64::default() });
    let b = ComplexMatrix::from_fn(n, 1, |i, _| pr.residues[i]);
    let c = ComplexMatrix::from_fn(1, n, |_, j| pr.residues[j]);
    StateSpaceSystem { c, e: gamma, a, b }
}

/// Equivalent diagonal realization `A = Pi, E = I, B = 1, C = Gamma^T`.
pub fn pole_residue_realization_diagonal(pr: &SisoPoleResidue) -> StateSpaceSystem {
    let n = pr.order();
    let a = ComplexMatrix::diag(&pr.poles);
    let b = ComplexMatrix::from_fn(n, 1, |_, _| c64(1.0, 0.0));
    let c = ComplexMatrix::from_fn(1, n, |_, j| pr.residues[j]);
    StateSpaceSystem { c, e: ComplexMatrix::identity(n), a, b }
}

/// Minimal descriptor realization of a polynomial transfer function:
/// `E = J_r` (nilpotent Jordan block), `A = I_r`, `B = e_r`.
///
/// With `C = [a_{r-1} ... a_1 a_0]` the product `C (sE - A)^{-1} B`
/// expands through the nilpotent geometric series to `-H(s)`, so C is
/// negated here and the returned realization satisfies
/// `transfer_eval = +H(s)` like every other model form.
pub fn polynomial_realization(poly: &PolynomialTF) -> StateSpaceSystem {
    let r = poly.degree_bound();
    let coeff = poly.coefficients();
    let e = ComplexMatrix::from_fn(r, r, |i, j| if j == i + 1 { c64(1.0, 0.0) } else { C64::default() });
    let a = ComplexMatrix::identity(r);
    let b = ComplexMatrix::from_fn(r, 1, |i, _| if i == r - 1 { c64(1.0, 0.0) } else { C64::default() });
    let c = ComplexMatrix::from_fn(1, r, |_, j| -coeff[r - 1 - j]);
    StateSpaceSystem { c, e, a, b }
}

/// Markov parameters `h_i = C A^{i-1} B`, i = 1..count. Requires E = I.
pub fn markov_parameters(sys: &StateSpaceSystem, count: usize) -> Result<Vec<ComplexMatrix>> {
    let n = sys.order();
    let id = ComplexMatrix::identity(n);
    if sys.e.sub(&id).norm_fro() > 1e-14 * (1.0 + sys.e.norm_fro()) {
        return Err(Error::InvalidArgument("Markov parameters need E = I".into()));
    }
    let mut out = Vec::with_capacity(count);
    let mut power_b = sys.b.clone();
    for _ in 0..count {
        out.push(sys.c.mul(&power_b));
        power_b = sys.a.mul(&power_b);
    }
    Ok(out)
}
