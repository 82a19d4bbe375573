//! LU factorization with partial pivoting for complex matrices.

use super::{C64, ComplexMatrix};
use crate::error::{Error, Result};

/// Packed LU factors of a square matrix: `P A = L U` with unit lower L.
pub struct Lu {
    lu: ComplexMatrix,
    piv: Vec<usize>,
    swaps: usize,
}

impl Lu {
    pub fn new(a: &ComplexMatrix) -> Result<Self> {
        Self::with_pivot_repair(a, 0.0)
    }

    /// Factorizes, replacing any pivot of magnitude below `repair` with
    /// `repair` (phase preserved). `repair = 0` means plain LU, which fails
    /// on an exactly singular matrix. Inverse iteration passes a tiny
    /// `repair` so that solves against a near-singular shifted matrix
    /// return a huge, normalizable direction instead of an error.
    pub fn with_pivot_repair(a: &ComplexMatrix, repair: f64) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::Dimension(format!("LU needs a square matrix, got {}x{}", a.rows(), a.cols())));
        }
        let n = a.rows();
        let mut lu = a.clone();
        let mut piv: Vec<usize> = (0..n).collect();
        let mut swaps = 0;
        for k in 0..n {
            let (mut p, mut best) = (k, lu[(k, k)].norm());
            for i in k + 1..n {
                let v = lu[(i, k)].norm();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if p != k {
                for j in 0..n {
                    let t = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = t;
                }
                piv.swap(k, p);
                swaps += 1;
            }
            let mut pivot = lu[(k, k)];
            if pivot.norm() < repair {
                pivot = if pivot.norm() == 0.0 {
                    C64::new(repair, 0.0)
                } else {
                    pivot / pivot.norm() * repair
                };
                lu[(k, k)] = pivot;
            }
            if pivot.norm() == 0.0 {
                return Err(Error::Singular(format!("zero pivot at step {k}")));
            }
            for i in k + 1..n {
                let m = lu[(i, k)] / pivot;
                lu[(i, k)] = m;
                if m != C64::default() {
                    for j in k + 1..n {
                        let s = lu[(k, j)];
                        lu[(i, j)] -= m * s;
                    }
                }
            }
        }
        Ok(Lu { lu, piv, swaps })
    }

    pub fn order(&self) -> usize {
        self.lu.rows()
    }

    pub fn det(&self) -> C64 {
        let mut d = if self.swaps.is_multiple_of(2) { C64::new(1.0, 0.0) } else { C64::new(-1.0, 0.0) };
        for k in 0..self.order() {
            d *= self.lu[(k, k)];
        }
        d
    }

    pub fn solve_vec(&self, b: &[C64]) -> Vec<C64> {
        let n = self.order();
        assert_eq!(b.len(), n);
        let mut x: Vec<C64> = self.piv.iter().map(|&p| b[p]).collect();
        for k in 0..n {
            for i in k + 1..n {
                let m = self.lu[(i, k)];
                let s = x[k];
                x[i] -= m * s;
            }
        }
        for k in (0..n).rev() {
            for j in k + 1..n {
                let s = x[j];
                x[k] -= self.lu[(k, j)] * s;
            }
            x[k] /= self.lu[(k, k)];
        }
        x
    }

    pub fn solve_mat(&self, b: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(b.rows(), self.order());
        let mut out = ComplexMatrix::zeros(b.rows(), b.cols());
        for j in 0..b.cols() {
            let x = self.solve_vec(&b.col(j));
            for i in 0..b.rows() {
                out[(i, j)] = x[i];
            }
        }
        out
    }

    pub fn inverse(&self) -> ComplexMatrix {
        self.solve_mat(&ComplexMatrix::identity(self.order()))
    }
}
