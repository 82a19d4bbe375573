//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite entry {value} at ({row}, {col})")]
    NonFinite { row: usize, col: usize, value: String },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("SVD did not converge after {sweeps} sweeps (off-diagonal {off:.3e})")]
    SvdNoConvergence { sweeps: usize, off: f64 },

    #[error("QR eigenvalue iteration did not converge after {iterations} iterations")]
    EigNoConvergence { iterations: usize },

    #[error("matrix is singular: {0}")]
    Singular(String),

    #[error("cond2 of a zero matrix is undefined")]
    ZeroMatrix,

    #[error("E factor is numerically singular (cond {cond:.3e}); use the pseudoinverse-based recovery path instead")]
    SingularPencilFactor { cond: f64 },

    #[error("evaluation point {point} coincides with pole {pole} (index {index})")]
    EvaluationAtPole { point: String, pole: String, index: usize },

    #[error("point sets coincide: x[{i}] = {value} = y[{j}]")]
    CoincidentNodes { i: usize, j: usize, value: String },

    #[error("repeated node {value} at indices {i} and {j}")]
    RepeatedNodes { i: usize, j: usize, value: String },

    #[error("s = {0} is an eigenvalue of the Loewner pencil; transfer recovery is undefined there")]
    EvaluationAtPencilEigenvalue(String),

    #[error("interpolation points coincide with the left set; use the same-point (Hermite) sensitivity instead")]
    SharedInterpolationPoints,

    #[error("eigenpair is defective or ill-normalized: |p^T L q| = {denominator:.3e} below threshold {threshold:.3e}")]
    DefectiveEigenpair { denominator: f64, threshold: f64 },

    #[error("residue {index} has magnitude {magnitude:.3e}; residue-normalized sensitivity is undefined")]
    VanishingResidue { index: usize, magnitude: f64 },

    #[error("pole {pole} is not in the open left half-plane; the system is not stable")]
    UnstablePole { pole: String },

    #[error("intervals [{a}, {b}] and [{c}, {d}] overlap; the decay bound requires disjoint real intervals")]
    OverlappingIntervals { a: f64, b: f64, c: f64, d: f64 },

    #[error("argument {value} outside the domain {domain}")]
    OutOfDomain { value: f64, domain: &'static str },

    #[error("eigenvalue matching failed: {0}")]
    EigenvalueMatching(String),

    #[error("scenario validation failed: {0}")]
    ScenarioValidation(String),

    #[error("{0} analyses failed; see the run index for details")]
    AnalysisFailures(usize),

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
