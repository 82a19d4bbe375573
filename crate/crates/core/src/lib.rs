//! Loewner matrix pencils from transfer-function data.
//!
//! Builds the Loewner quadruple (W, L, Ls, V) out of left/right (or
//! Hermite, or Markov) measurements of a transfer function, verifies the
//! Cauchy/Krylov/Vandermonde factorizations and Sylvester identities
//! behind it, and quantifies how the pencil's eigenvalues — the poles of
//! the data-driven model — react to perturbations:
//!
//! * `numerics` — self-contained dense complex linear algebra (order <= 32);
//! * `systems` — LTI models in state-space, pole-residue and polynomial form;
//! * `loewner` — quadruple assembly, structured factors, factorization and
//!   Sylvester residual checks, transfer recovery;
//! * `sensitivity` — first-order eigenvalue perturbations, the unstructured
//!   sensitivity rho with its condition-number bounds, the structured
//!   sensitivity eta for noisy measurements, Monte Carlo validation and the
//!   cluster-distance scaling experiment;
//! * `pseudospectra` — eps-(nu, delta) pseudospectra grids and local slopes;
//! * `svbounds` — Grotzsch-ring singular-value decay bounds for Cauchy and
//!   Loewner matrices;
//! * `scenario` — JSON-driven experiment runner behind the `loewner` CLI.

pub mod catalog;
pub mod error;
pub mod loewner;
pub mod numerics;
pub mod pseudospectra;
pub mod report;
pub mod rng;
pub mod scenario;
pub mod sensitivity;
pub mod svbounds;
pub mod systems;

pub use error::{Error, Result};
