//! Deterministic seeded random number streams.
//!
//! Every stochastic routine in this crate draws from an [`RngStream`]
//! identified by a `(seed, stream)` pair. Distinct stream indices give
//! statistically independent generators, so batch computations can assign
//! one stream per work unit and stay reproducible under any parallelism.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};

use crate::error::{Error, Result};

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer; used to key streams and derive per-unit seeds.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A deterministic pseudo-random stream derived from `(seed, stream)`.
#[derive(Debug, Clone)]
pub struct RngStream {
    rng: ChaCha8Rng,
}

impl RngStream {
    /// Stream `stream` of the generator family keyed by `seed`.
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut state = mix64(seed) ^ mix64(stream ^ 0x5851_F42D_4C95_7F2D);
        let mut key = [0u8; 32];
        for chunk in key.chunks_exact_mut(8) {
            state = state.wrapping_add(GOLDEN);
            chunk.copy_from_slice(&mix64(state).to_le_bytes());
        }
        Self { rng: ChaCha8Rng::from_seed(key) }
    }

    /// Standard normal draw.
    #[inline]
    pub fn normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    /// Uniform draw on `[0, 1)`.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    /// Gamma draw with the given shape and *scale* (mean = shape * scale).
    pub fn gamma(&mut self, shape: f64, scale: f64) -> Result<f64> {
        let dist = Gamma::new(shape, scale)
            .map_err(|e| Error::Domain(format!("gamma(shape={shape}, scale={scale}): {e}")))?;
        Ok(dist.sample(&mut self.rng))
    }

    /// Chi draw with `dof` degrees of freedom (`dof` may be non-integer).
    ///
    /// Realized as the square root of a Gamma(dof/2, 2) variate so that
    /// non-integer parameters are supported.
    pub fn chi(&mut self, dof: f64) -> Result<f64> {
        Ok(self.gamma(dof / 2.0, 2.0)?.sqrt())
    }

    /// Symmetric Dirichlet draw with `k` components of concentration `alpha`.
    pub fn dirichlet(&mut self, k: usize, alpha: f64) -> Result<Vec<f64>> {
        let dist = Gamma::new(alpha, 1.0)
            .map_err(|e| Error::Domain(format!("dirichlet(alpha={alpha}): {e}")))?;
        let mut w: Vec<f64> = (0..k).map(|_| dist.sample(&mut self.rng)).collect();
        let total: f64 = w.iter().sum();
        if !(total > 0.0) {
            // Probability-zero event under the model; retry keeps the law intact.
            return self.dirichlet(k, alpha);
        }
        for v in &mut w {
            *v /= total;
        }
        Ok(w)
    }

    /// Access the raw generator (used by distributions not wrapped above).
    pub fn raw(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }
}
