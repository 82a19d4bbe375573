//! Seeded, stream-splittable Gaussian noise.
//!
//! ChaCha8 keyed by the user seed provides the raw bits; each Monte Carlo
//! trial (or direction sample) owns its own ChaCha stream, so results are
//! identical no matter how trials are scheduled. Normal variates come from
//! Box-Muller on 53-bit uniforms — fully specified arithmetic, same bytes
//! on every platform.

use crate::numerics::{C64, ComplexMatrix};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

pub struct NoiseStream {
    rng: ChaCha8Rng,
}

impl NoiseStream {
    /// Sub-stream `stream` of the generator keyed by `seed`.
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        NoiseStream { rng }
    }

    /// Uniform in [0, 1) with 53-bit resolution.
    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal pair (Box-Muller).
    pub fn standard_normal_pair(&mut self) -> (f64, f64) {
        let u = 1.0 - self.uniform(); // (0, 1], keeps ln finite
        let v = self.uniform();
        let r = (-2.0 * u.ln()).sqrt();
        let (s, c) = (2.0 * std::f64::consts::PI * v).sin_cos();
        (r * c, r * s)
    }

    /// Circular complex Gaussian with `E|eps|^2 = sigma^2`
    /// (real and imaginary parts each N(0, sigma^2/2)).
    pub fn complex_gaussian(&mut self, sigma: f64) -> C64 {
        let (a, b) = self.standard_normal_pair();
        C64::new(a, b) * (sigma / std::f64::consts::SQRT_2)
    }

    pub fn complex_gaussian_vec(&mut self, sigma: f64, len: usize) -> Vec<C64> {
        (0..len).map(|_| self.complex_gaussian(sigma)).collect()
    }

    /// Matrix with independent unit circular Gaussian entries.
    pub fn gaussian_matrix(&mut self, rows: usize, cols: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(rows, cols, |_, _| self.complex_gaussian(1.0))
    }
}
