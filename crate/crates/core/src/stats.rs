//! Empirical distributions, Kolmogorov-Smirnov distances, moments and
//! histogram diagnostics used by the verification suite.

use crate::error::{Error, Result};

/// A sorted sample with its empirical distribution function.
#[derive(Debug, Clone)]
pub struct EmpiricalDistribution {
    values: Vec<f64>,
}

impl EmpiricalDistribution {
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Domain("empirical distribution needs a nonempty sample".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("sample contains non-finite values".into()));
        }
        values.sort_by(f64::total_cmp);
        Ok(Self { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Right-continuous ECDF: fraction of the sample `<= x`.
    pub fn cdf(&self, x: f64) -> f64 {
        let idx = self.values.partition_point(|v| *v <= x);
        idx as f64 / self.values.len() as f64
    }

    /// Sup-norm distance to a reference distribution function.
    ///
    /// The supremum is evaluated at the ECDF jump points using both
    /// one-sided ECDF values; the reference is probed just left of each
    /// jump as well, so step-function references (e.g. another ECDF) are
    /// handled exactly.
    pub fn ks_distance<F: Fn(f64) -> f64>(&self, cdf: F) -> f64 {
        let m = self.values.len() as f64;
        let mut worst = 0.0f64;
        let mut i = 0;
        while i < self.values.len() {
            let x = self.values[i];
            let mut j = i;
            while j + 1 < self.values.len() && self.values[j + 1] == x {
                j += 1;
            }
            let below = i as f64 / m;
            let at = (j + 1) as f64 / m;
            worst = worst.max((cdf(x) - at).abs());
            worst = worst.max((cdf(x.next_down()) - below).abs());
            i = j + 1;
        }
        worst
    }

    /// Sup-norm distance between two ECDFs.
    pub fn ks_two_sample(&self, other: &EmpiricalDistribution) -> f64 {
        let a = &self.values;
        let b = &other.values;
        let (na, nb) = (a.len() as f64, b.len() as f64);
        let (mut ia, mut ib) = (0usize, 0usize);
        let mut worst = 0.0f64;
        while ia < a.len() || ib < b.len() {
            let x = match (a.get(ia), b.get(ib)) {
                (Some(&va), Some(&vb)) => va.min(vb),
                (Some(&va), None) => va,
                (None, Some(&vb)) => vb,
                (None, None) => break,
            };
            while ia < a.len() && a[ia] == x {
                ia += 1;
            }
            while ib < b.len() && b[ib] == x {
                ib += 1;
            }
            worst = worst.max((ia as f64 / na - ib as f64 / nb).abs());
        }
        worst
    }
}

/// Sample mean and its standard error.
pub fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, f64::INFINITY);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Unbiased sample variance.
pub fn sample_variance(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
}

/// Pearson correlation coefficient of two equally long samples.
pub fn pearson_correlation(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        let dx = x - mx;
        let dy = y - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    sxy / (sxx * syy).sqrt()
}

/// L1 distance between the binned empirical measure of `samples` on
/// `[lo, hi]` (points outside are dropped) and the reference measure given
/// through its CDF, on an equispaced grid of `bins` cells.
pub fn histogram_l1_distance<F: Fn(f64) -> f64>(
    samples: &[f64],
    lo: f64,
    hi: f64,
    bins: usize,
    ref_cdf: F,
) -> f64 {
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0usize; bins];
    for &x in samples {
        if x >= lo && x < hi {
            counts[((x - lo) / width) as usize] += 1;
        } else if x == hi {
            counts[bins - 1] += 1;
        }
    }
    let m = samples.len() as f64;
    let mut l1 = 0.0;
    for (j, c) in counts.iter().enumerate() {
        let a = lo + j as f64 * width;
        let b = lo + (j + 1) as f64 * width;
        let reference = ref_cdf(b) - ref_cdf(a);
        l1 += (*c as f64 / m - reference).abs();
    }
    l1
}

/// The 99% Dvoretzky-Kiefer-Wolfowitz band for a sample of size `m`:
/// with probability at least 0.99 the KS distance of an exact sample from
/// its law stays below this value.
pub fn dkw_band_99(m: usize) -> f64 {
    ((2.0f64 / 0.01).ln() / (2.0 * m as f64)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;
    use approx::assert_abs_diff_eq;

    #[test]
    fn ks_distance_hand_evaluated() {
        let s = EmpiricalDistribution::new(vec![0.25, 0.75]).unwrap();
        let d = s.ks_distance(|x| x.clamp(0.0, 1.0));
        assert_abs_diff_eq!(d, 0.25, epsilon = 1e-12);
    }

    #[test]
    fn ks_distance_to_own_ecdf_is_zero() {
        let s = EmpiricalDistribution::new(vec![0.1, 0.4, 0.4, 2.0, -3.0]).unwrap();
        let clone = s.clone();
        let d = s.ks_distance(|x| clone.cdf(x));
        assert_eq!(d, 0.0);
    }

    #[test]
    fn ks_distance_catches_left_limit_gap() {
        // Single point at 0.9 vs the uniform law: the gap just below the
        // jump is 0.9, far larger than the gap at the jump itself.
        let s = EmpiricalDistribution::new(vec![0.9]).unwrap();
        let d = s.ks_distance(|x| x.clamp(0.0, 1.0));
        assert_abs_diff_eq!(d, 0.9, epsilon = 1e-12);
    }

    #[test]
    fn two_sample_edge_cases() {
        let a = EmpiricalDistribution::new(vec![1.0, 2.0, 3.0]).unwrap();
        assert_eq!(a.ks_two_sample(&a.clone()), 0.0);
        let zero = EmpiricalDistribution::new(vec![0.0]).unwrap();
        let one = EmpiricalDistribution::new(vec![1.0]).unwrap();
        assert_eq!(zero.ks_two_sample(&one), 1.0);
    }

    #[test]
    fn empty_sample_is_domain_error() {
        assert!(EmpiricalDistribution::new(vec![]).is_err());
        assert!(EmpiricalDistribution::new(vec![f64::NAN]).is_err());
    }

    #[test]
    fn dkw_calibration_uniform() {
        // 1e4 uniform draws stay below the 99% DKW band in >= 49 of 50
        // seeded repetitions.
        let band = dkw_band_99(10_000);
        assert_abs_diff_eq!(band, 0.0163, epsilon = 1e-3);
        let mut below = 0;
        for rep in 0..50u64 {
            let mut rng = RngStream::new(2024, rep);
            let xs: Vec<f64> = (0..10_000).map(|_| rng.uniform()).collect();
            let s = EmpiricalDistribution::new(xs).unwrap();
            if s.ks_distance(|x| x.clamp(0.0, 1.0)) < band {
                below += 1;
            }
        }
        assert!(below >= 49, "only {below}/50 runs below the DKW band");
    }

    #[test]
    fn two_sample_exponential_calibration() {
        // Two independent 5000-draw unit-exponential samples: KS <= 0.04
        // in at least 38 of 40 seeded repetitions.
        let mut ok = 0;
        for rep in 0..40u64 {
            let mut ra = RngStream::new(7, 2 * rep);
            let mut rb = RngStream::new(7, 2 * rep + 1);
            let draw = |r: &mut RngStream| -> Vec<f64> {
                (0..5000).map(|_| -r.uniform().max(1e-300).ln()).collect()
            };
            let a = EmpiricalDistribution::new(draw(&mut ra)).unwrap();
            let b = EmpiricalDistribution::new(draw(&mut rb)).unwrap();
            if a.ks_two_sample(&b) <= 0.04 {
                ok += 1;
            }
        }
        assert!(ok >= 38, "only {ok}/40 runs below 0.04");
    }

    #[test]
    fn one_sample_ks_approximates_two_sample_against_huge_reference() {
        let mut rng = RngStream::new(5, 0);
        let a: Vec<f64> = (0..2000).map(|_| -rng.uniform().max(1e-300).ln()).collect();
        let sample = EmpiricalDistribution::new(a).unwrap();
        let exact = sample.ks_distance(|x| if x <= 0.0 { 0.0 } else { 1.0 - (-x).exp() });
        let big: Vec<f64> = (0..1_000_000).map(|_| -rng.uniform().max(1e-300).ln()).collect();
        let reference = EmpiricalDistribution::new(big).unwrap();
        let approx = sample.ks_two_sample(&reference);
        assert!((exact - approx).abs() <= 0.01, "{exact} vs {approx}");
    }

    #[test]
    fn histogram_l1_of_matching_uniform_sample_is_small() {
        let mut rng = RngStream::new(9, 0);
        let xs: Vec<f64> = (0..200_000).map(|_| rng.uniform()).collect();
        let l1 = histogram_l1_distance(&xs, 0.0, 1.0, 50, |x| x.clamp(0.0, 1.0));
        assert!(l1 < 0.02, "l1 = {l1}");
    }

    #[test]
    fn moments_and_correlation() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let (mean, se) = mean_and_se(&xs);
        assert_abs_diff_eq!(mean, 2.5, epsilon = 1e-14);
        assert_abs_diff_eq!(se, (sample_variance(&xs) / 4.0).sqrt(), epsilon = 1e-14);
        let ys = [2.0, 4.0, 6.0, 8.0];
        assert_abs_diff_eq!(pearson_correlation(&xs, &ys), 1.0, epsilon = 1e-12);
        let zs = [4.0, 3.0, 2.0, 1.0];
        assert_abs_diff_eq!(pearson_correlation(&xs, &zs), -1.0, epsilon = 1e-12);
    }
}
