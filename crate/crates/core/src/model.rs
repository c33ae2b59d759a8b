//! Domain types: interlacing arrays, level spectra, edge spacings, the
//! limiting Gamma law, and simulation configuration.
//!
//! An interlacing array with `N` levels stores positions `x^k_i` for
//! `1 <= i <= k <= N`; row `k` holds `k` ordered particles and consecutive
//! rows interlace: `x^{k+1}_i <= x^k_i <= x^{k+1}_{i+1}`. The edge spacing
//! vector collects the differences between the rightmost particles on
//! adjacent levels, counted downward from the top level.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::reg_lower_gamma;

/// Interlacing triangular array of particle positions.
///
/// Construction validates the row-length structure only; the interlacing
/// inequalities are queried through [`GtArray::validate_interlacing`] so
/// that invalid configurations remain representable (e.g. when vetting
/// data read from disk).
#[derive(Debug, Clone, PartialEq)]
pub struct GtArray {
    levels: Vec<Vec<f64>>,
}

impl GtArray {
    /// Build from rows; row `k` (1-based) must hold exactly `k` entries.
    pub fn from_levels(levels: Vec<Vec<f64>>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::MalformedRow { row: 1, got: 0, expected: 1 });
        }
        for (idx, row) in levels.iter().enumerate() {
            if row.len() != idx + 1 {
                return Err(Error::MalformedRow { row: idx + 1, got: row.len(), expected: idx + 1 });
            }
        }
        Ok(Self { levels })
    }

    pub fn n_levels(&self) -> usize {
        self.levels.len()
    }

    /// Row `k`, 1-based; `k` particles in nondecreasing order.
    pub fn level(&self, k: usize) -> &[f64] {
        &self.levels[k - 1]
    }

    pub fn levels(&self) -> &[Vec<f64>] {
        &self.levels
    }

    pub(crate) fn levels_mut(&mut self) -> &mut Vec<Vec<f64>> {
        &mut self.levels
    }

    /// Rightmost particle of row `k`.
    pub fn top(&self, k: usize) -> f64 {
        self.levels[k - 1][k - 1]
    }

    /// First violated interlacing inequality, reported as the 1-based
    /// (longer row, index) pair, or `None` when the array is in the cone.
    pub fn first_interlacing_violation(&self) -> Option<(usize, usize)> {
        for k in 0..self.levels.len().saturating_sub(1) {
            let upper = &self.levels[k];
            let lower = &self.levels[k + 1];
            for i in 0..upper.len() {
                if lower[i] > upper[i] || upper[i] > lower[i + 1] {
                    return Some((k + 2, i + 1));
                }
            }
        }
        None
    }

    /// Worst signed violation of the (closed) interlacing inequalities;
    /// any positive value means the array is outside the cone.
    pub fn max_interlacing_violation(&self) -> f64 {
        let mut worst = f64::NEG_INFINITY;
        for k in 0..self.levels.len() - 1 {
            let upper = &self.levels[k];
            let lower = &self.levels[k + 1];
            for i in 0..upper.len() {
                worst = worst.max(lower[i] - upper[i]);
                worst = worst.max(upper[i] - lower[i + 1]);
            }
        }
        if worst == f64::NEG_INFINITY {
            0.0
        } else {
            worst
        }
    }

    /// True iff every interlacing inequality holds (non-strict; the cone
    /// is closed). Row monotonicity follows from the inequalities.
    pub fn validate_interlacing(&self) -> bool {
        if self.levels.len() == 1 {
            return true;
        }
        self.max_interlacing_violation() <= 0.0
    }

    /// True iff all interlacing inequalities hold strictly; samplers and
    /// integrators require this since ties have probability zero.
    pub fn strictly_interlacing(&self) -> bool {
        if self.levels.len() == 1 {
            return true;
        }
        self.max_interlacing_violation() < 0.0
    }

    /// The first `k` spacings between rightmost particles on adjacent
    /// levels: `r_i = x^{N+1-i}_{N+1-i} - x^{N-i}_{N-i}`.
    pub fn edge_spacings(&self, k: usize) -> Result<SpacingVector> {
        let n = self.n_levels();
        if k == 0 || k >= n {
            return Err(Error::Range(format!("spacing count k={k} must satisfy 1 <= k <= N-1={}", n - 1)));
        }
        let r: Vec<f64> = (1..=k).map(|i| self.top(n + 1 - i) - self.top(n - i)).collect();
        SpacingVector::new(r)
    }

    /// Multiply every coordinate by `sqrt(to_time / from_time)`, the
    /// diffusive rescaling that maps the fixed-time law at `from_time`
    /// to the one at `to_time`.
    pub fn rescale_time(&self, from_time: f64, to_time: f64) -> Result<Self> {
        let factor = rescale_factor(from_time, to_time)?;
        let levels = self
            .levels
            .iter()
            .map(|row| row.iter().map(|x| x * factor).collect())
            .collect();
        Ok(Self { levels })
    }
}

fn rescale_factor(from_time: f64, to_time: f64) -> Result<f64> {
    if !(from_time > 0.0) || !(to_time > 0.0) {
        return Err(Error::Domain(format!(
            "rescaling needs positive times, got {from_time} -> {to_time}"
        )));
    }
    Ok((to_time / from_time).sqrt())
}

/// Ordered coordinates of a single level (a point in the closed Weyl
/// chamber).
#[derive(Debug, Clone, PartialEq)]
pub struct LevelSpectrum {
    values: Vec<f64>,
}

impl LevelSpectrum {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Range("spectrum must hold at least one value".into()));
        }
        if values.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Precondition("spectrum values must be nondecreasing".into()));
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Number of particles on the level.
    pub fn level(&self) -> usize {
        self.values.len()
    }

    pub fn top(&self) -> f64 {
        *self.values.last().unwrap()
    }

    pub fn strictly_increasing(&self) -> bool {
        self.values.windows(2).all(|w| w[0] < w[1])
    }

    pub fn rescale_time(&self, from_time: f64, to_time: f64) -> Result<Self> {
        let factor = rescale_factor(from_time, to_time)?;
        Ok(Self { values: self.values.iter().map(|x| x * factor).collect() })
    }
}

/// Vector of `k` consecutive edge spacings, all nonnegative.
#[derive(Debug, Clone, PartialEq)]
pub struct SpacingVector {
    r: Vec<f64>,
}

impl SpacingVector {
    pub fn new(r: Vec<f64>) -> Result<Self> {
        if r.is_empty() {
            return Err(Error::Range("spacing vector must hold at least one entry".into()));
        }
        if r.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::Domain("spacings must be finite and nonnegative".into()));
        }
        Ok(Self { r })
    }

    pub fn values(&self) -> &[f64] {
        &self.r
    }

    pub fn k(&self) -> usize {
        self.r.len()
    }
}

/// Gamma law of the limiting edge spacings: shape `beta/2` and rate
/// `sqrt(beta / (2 T0))`; at `T0 = 2/beta` the rate equals `beta/2` and
/// the mean is 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaLaw {
    pub shape: f64,
    pub rate: f64,
}

impl GammaLaw {
    pub fn new(shape: f64, rate: f64) -> Result<Self> {
        if !(shape > 0.0) || !(rate > 0.0) {
            return Err(Error::Domain(format!("gamma law needs shape, rate > 0, got ({shape}, {rate})")));
        }
        Ok(Self { shape, rate })
    }

    /// The spacing law for inverse temperature `beta` at time parameter `t0`.
    pub fn limiting(beta: f64, t0: f64) -> Result<Self> {
        if !(beta > 0.0) || !(t0 > 0.0) {
            return Err(Error::Domain(format!("limiting law needs beta, t0 > 0, got ({beta}, {t0})")));
        }
        Self::new(beta / 2.0, (beta / (2.0 * t0)).sqrt())
    }

    pub fn mean(&self) -> f64 {
        self.shape / self.rate
    }

    pub fn variance(&self) -> f64 {
        self.shape / (self.rate * self.rate)
    }

    /// Distribution function; regularized lower incomplete gamma at
    /// `rate * x`, zero for negative arguments.
    pub fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        reg_lower_gamma(self.shape, self.rate * x).expect("shape validated at construction")
    }

    pub fn density(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        (self.shape * self.rate.ln() - crate::special::ln_gamma(self.shape)
            + (self.shape - 1.0) * x.ln()
            - self.rate * x)
            .exp()
    }
}

/// Parameters shared by every sampler and integrator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    /// Inverse temperature; >= 1 for fixed-time sampling, >= 4 for dynamics.
    pub beta: f64,
    /// Time parameter T0; the dynamics warm-start at absolute time N*T0.
    pub t0: f64,
    /// Number of levels / matrix size.
    pub n: usize,
    /// Number of tracked edge spacings, at most n - 1.
    pub k: usize,
    /// Integrator step.
    pub dt: f64,
    /// Simulated time horizon past the warm start.
    pub horizon: f64,
    /// Number of independent samples or paths.
    pub n_samples: usize,
    /// Master seed; unit `i` uses stream `(seed, i)`.
    pub seed: u64,
}

impl SimConfig {
    /// Check the cross-field invariants shared by all commands.
    pub fn validate(&self) -> Result<()> {
        if !(self.beta >= 1.0) {
            return Err(Error::Domain(format!("beta must be >= 1, got {}", self.beta)));
        }
        if !(self.t0 > 0.0) {
            return Err(Error::Domain(format!("t0 must be positive, got {}", self.t0)));
        }
        if self.n == 0 {
            return Err(Error::Range("n must be >= 1".into()));
        }
        if self.k == 0 || self.k > self.n.saturating_sub(1) {
            return Err(Error::Range(format!(
                "k={} must satisfy 1 <= k <= n-1={}",
                self.k,
                self.n.saturating_sub(1)
            )));
        }
        if !(self.dt > 0.0) {
            return Err(Error::Domain(format!("dt must be positive, got {}", self.dt)));
        }
        if self.horizon < 0.0 {
            return Err(Error::Domain(format!("horizon must be >= 0, got {}", self.horizon)));
        }
        if self.horizon > 0.0 && self.dt > self.horizon {
            return Err(Error::Domain(format!(
                "dt={} exceeds horizon={}",
                self.dt, self.horizon
            )));
        }
        // n_samples = 0 is allowed and means an empty batch.
        Ok(())
    }

    /// Additional requirement for the interacting-particle dynamics.
    pub fn validate_for_dynamics(&self) -> Result<()> {
        self.validate()?;
        if self.beta < 4.0 {
            return Err(Error::Domain(format!(
                "dynamics requires beta >= 4 (particles may collide below); got {}",
                self.beta
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn arr(levels: &[&[f64]]) -> GtArray {
        GtArray::from_levels(levels.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn interlacing_examples() {
        assert!(arr(&[&[0.0], &[-1.0, 1.0]]).validate_interlacing());
        assert!(!arr(&[&[2.0], &[-1.0, 1.0]]).validate_interlacing());
        // Degenerate all-zero array: inside the closed cone, not strictly.
        let zero = arr(&[&[0.0], &[0.0, 0.0], &[0.0, 0.0, 0.0]]);
        assert!(zero.validate_interlacing());
        assert!(!zero.strictly_interlacing());
    }

    #[test]
    fn malformed_rows_are_structural_errors() {
        let err = GtArray::from_levels(vec![vec![0.0, 1.0]]).unwrap_err();
        assert!(matches!(err, Error::MalformedRow { row: 1, .. }));
        let err = GtArray::from_levels(vec![vec![0.0], vec![1.0]]).unwrap_err();
        assert!(matches!(err, Error::MalformedRow { row: 2, got: 1, expected: 2 }));
    }

    #[test]
    fn edge_spacing_examples() {
        let a = arr(&[&[0.0], &[-1.0, 1.0]]);
        let r = a.edge_spacings(1).unwrap();
        assert_eq!(r.values(), &[1.0]);
        assert!(a.edge_spacings(2).is_err());
        assert!(a.edge_spacings(0).is_err());
    }

    #[test]
    fn edge_spacings_telescope() {
        let a = arr(&[&[0.5], &[-0.25, 1.5], &[-1.0, 0.0, 2.25]]);
        assert!(a.validate_interlacing());
        let r = a.edge_spacings(2).unwrap();
        let total: f64 = r.values().iter().sum();
        assert_abs_diff_eq!(total, a.top(3) - a.top(1), epsilon = 1e-12);
        assert!(r.values().iter().all(|v| *v >= 0.0));
    }

    #[test]
    fn rescaling_examples() {
        let a = arr(&[&[0.5], &[-0.25, 1.5]]);
        // from == to is the identity map.
        assert_eq!(a.rescale_time(3.0, 3.0).unwrap(), a);
        // Composition multiplies the square-root factors.
        let ab = a.rescale_time(1.0, 2.0).unwrap().rescale_time(2.0, 5.0).unwrap();
        let ac = a.rescale_time(1.0, 5.0).unwrap();
        for (x, y) in ab.level(2).iter().zip(ac.level(2)) {
            assert_abs_diff_eq!(x, y, epsilon = 1e-14);
        }
        // Positive scaling preserves interlacing.
        assert!(ab.validate_interlacing());
        assert!(a.rescale_time(0.0, 1.0).is_err());
        assert!(a.rescale_time(1.0, -2.0).is_err());
    }

    #[test]
    fn gamma_law_examples() {
        let exp = GammaLaw::new(1.0, 1.0).unwrap();
        assert_eq!(exp.cdf(0.0), 0.0);
        assert_abs_diff_eq!(exp.cdf(1.0), 1.0 - (-1.0f64).exp(), epsilon = 1e-14);
        // beta = 3 at T0 = 2/beta: rate beta/2.
        let law = GammaLaw::limiting(3.0, 2.0 / 3.0).unwrap();
        assert_abs_diff_eq!(law.rate, 1.5, epsilon = 1e-14);
        assert_abs_diff_eq!(law.shape, 1.5, epsilon = 1e-14);
        assert_abs_diff_eq!(law.mean(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn gamma_cdf_monotone_with_density_derivative() {
        let law = GammaLaw::limiting(4.0, 0.5).unwrap();
        let h = 1e-4;
        let mut prev = 0.0;
        for j in 1..=20 {
            let x = 0.15 * j as f64;
            let c = law.cdf(x);
            assert!(c >= prev, "cdf must be nondecreasing");
            prev = c;
            let numeric = (law.cdf(x + h) - law.cdf(x - h)) / (2.0 * h);
            assert_abs_diff_eq!(numeric, law.density(x), epsilon = 1e-6);
        }
    }

    #[test]
    fn sim_config_validation() {
        let base = SimConfig {
            beta: 4.0,
            t0: 0.5,
            n: 60,
            k: 2,
            dt: 1e-4,
            horizon: 1.0,
            n_samples: 10,
            seed: 1,
        };
        assert!(base.validate().is_ok());
        assert!(SimConfig { k: 60, ..base }.validate().is_err());
        assert!(SimConfig { dt: 2.0, ..base }.validate().is_err());
        assert!(SimConfig { beta: 0.5, ..base }.validate().is_err());
        assert!(SimConfig { beta: 2.0, ..base }.validate().is_ok());
        assert!(SimConfig { beta: 2.0, ..base }.validate_for_dynamics().is_err());
        // horizon == 0 allows any positive dt.
        assert!(SimConfig { horizon: 0.0, ..base }.validate().is_ok());
    }
}
