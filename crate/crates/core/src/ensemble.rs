//! Exact fixed-time samplers.
//!
//! Three constructions:
//!
//! * [`sample_beta_hermite`] draws one level (an ordered spectrum with
//!   density proportional to `prod (x_j - x_i)^beta prod exp(-x_i^2/(2t))`)
//!   from the symmetric tridiagonal matrix model: independent Gaussian
//!   diagonal and chi-distributed off-diagonals with parameters
//!   `beta * (n - i)`, the only known exact sampler for general beta.
//! * [`sample_corner_level`] draws the one-level-down conditional law by
//!   rooting a Dirichlet-weighted characteristic polynomial: with weights
//!   `w ~ Dirichlet(beta/2, ..., beta/2)` on the current level `x`, the
//!   roots of `sum_i w_i prod_{j != i} (y - x_j)` — equivalently the zeros
//!   of `sum_i w_i / (y - x_i)` — interlace `x` strictly, one per gap, and
//!   carry exactly the conditional density of the corners process.
//! * [`DenseMatrixSample`] realizes the classical Gaussian ensembles at
//!   `beta in {1, 2, 4}` (real, complex, quaternion entries) and exposes
//!   spectra of all top-left principal submatrices; it serves as an
//!   independent oracle for the two constructions above.

use nalgebra::DMatrix;
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg;
use crate::model::{GtArray, LevelSpectrum};
use crate::rng::RngStream;

/// Ordered spectrum of the beta-Hermite ensemble of variance `variance_t`.
///
/// The tridiagonal model is sampled at unit variance (Gaussian weight
/// `exp(-x^2/2)`) and the eigenvalues are scaled by `sqrt(variance_t)`.
/// Chi variates are generated through Gamma draws so non-integer
/// parameters are supported.
pub fn sample_beta_hermite(
    n: usize,
    beta: f64,
    variance_t: f64,
    rng: &mut RngStream,
) -> Result<LevelSpectrum> {
    if n == 0 {
        return Err(Error::Range("ensemble size must be >= 1".into()));
    }
    if !(beta > 0.0) {
        return Err(Error::Domain(format!("beta must be positive, got {beta}")));
    }
    if !(variance_t > 0.0) {
        return Err(Error::Domain(format!("variance must be positive, got {variance_t}")));
    }
    let diag: Vec<f64> = (0..n).map(|_| rng.normal()).collect();
    let mut off = Vec::with_capacity(n.saturating_sub(1));
    for i in 1..n {
        off.push(rng.chi(beta * (n - i) as f64)? / std::f64::consts::SQRT_2);
    }
    let mut ev = linalg::tridiagonal_eigenvalues(&diag, &off)?;
    let scale = variance_t.sqrt();
    for v in &mut ev {
        *v *= scale;
    }
    LevelSpectrum::new(ev)
}

/// Zero of `sum_i w[i] / (y - x[i])` inside the open gap
/// `(x[gap], x[gap+1])`. The function is strictly decreasing there with a
/// sign change, so bisection cannot fail for positive weights.
fn root_in_gap(x: &[f64], w: &[f64], gap: usize) -> Result<f64> {
    let width = x[gap + 1] - x[gap];
    // Keep clear of the poles at the endpoints. The nominal shrink is
    // 1e-14 * width; when that is below the ulp of the endpoint, fall back
    // to the first representable float inside the gap.
    let mut lo = (x[gap] + 1e-14 * width).max(x[gap].next_up());
    let mut hi = (x[gap + 1] - 1e-14 * width).min(x[gap + 1].next_down());
    if lo > hi {
        return Err(Error::Numerical(format!(
            "gap {gap} has no representable interior point"
        )));
    }
    let eval = |y: f64| -> f64 { x.iter().zip(w).map(|(xi, wi)| wi / (y - xi)).sum() };
    // The function decreases from +inf to -inf across the gap; if a
    // clamped endpoint already crossed zero the root sits within one ulp.
    if eval(lo) <= 0.0 {
        return Ok(lo);
    }
    if eval(hi) >= 0.0 {
        return Ok(hi);
    }
    let tol = 1e-12 * width;
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if eval(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// One level further down the corners process: `k - 1` points strictly
/// interlacing the `k` input points, drawn from the conditional law given
/// the level above (levels below marginalized out).
pub fn sample_corner_level(
    upper: &LevelSpectrum,
    beta: f64,
    rng: &mut RngStream,
) -> Result<LevelSpectrum> {
    if !(beta >= 1.0) {
        return Err(Error::Domain(format!("corner sampling needs beta >= 1, got {beta}")));
    }
    if upper.level() < 2 {
        return Err(Error::Range("cannot descend below a single particle".into()));
    }
    if !upper.strictly_increasing() {
        return Err(Error::Precondition(
            "corner sampling needs a strictly increasing upper level".into(),
        ));
    }
    let x = upper.values();
    let w = rng.dirichlet(x.len(), beta / 2.0)?;
    let mut y = Vec::with_capacity(x.len() - 1);
    for gap in 0..x.len() - 1 {
        y.push(root_in_gap(x, &w, gap)?);
    }
    LevelSpectrum::new(y)
}

/// Full interlacing array of the corners process of variance `variance_t`:
/// top level from the tridiagonal model, then conditional draws down to a
/// single particle. The result passes interlacing validation by
/// construction.
pub fn sample_corners_process(
    n: usize,
    beta: f64,
    variance_t: f64,
    rng: &mut RngStream,
) -> Result<GtArray> {
    if !(beta >= 1.0) {
        return Err(Error::Domain(format!("corners process needs beta >= 1, got {beta}")));
    }
    let top = sample_beta_hermite(n, beta, variance_t, rng)?;
    if n > 1 && !top.strictly_increasing() {
        return Err(Error::Numerical(
            "top-level spectrum carries a numerically coincident pair".into(),
        ));
    }
    let mut rows: Vec<Vec<f64>> = vec![Vec::new(); n];
    rows[n - 1] = top.values().to_vec();
    let mut current = top;
    for m in (1..n).rev() {
        let lower = sample_corner_level(&current, beta, rng)?;
        rows[m - 1] = lower.values().to_vec();
        current = lower;
    }
    GtArray::from_levels(rows)
}

/// Top `levels` rows of the corners process of variance `variance_t`
/// (level sizes `n-levels+1 ..= n`, ascending). The level chain is Markov
/// downward, so stopping early leaves the joint law of the kept rows
/// untouched; edge-spacing statistics only need `k + 1` rows.
pub fn sample_corners_top_levels(
    n: usize,
    beta: f64,
    variance_t: f64,
    levels: usize,
    rng: &mut RngStream,
) -> Result<Vec<Vec<f64>>> {
    if levels == 0 || levels > n {
        return Err(Error::Range(format!("level count {levels} outside 1..={n}")));
    }
    let top = sample_beta_hermite(n, beta, variance_t, rng)?;
    if n > 1 && !top.strictly_increasing() {
        return Err(Error::Numerical(
            "top-level spectrum carries a numerically coincident pair".into(),
        ));
    }
    let mut rows = vec![top.values().to_vec()];
    let mut current = top;
    for _ in 1..levels {
        let lower = sample_corner_level(&current, beta, rng)?;
        rows.push(lower.values().to_vec());
        current = lower;
    }
    rows.reverse();
    Ok(rows)
}

/// Which classical Gaussian ensemble a dense sample realizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnsembleKind {
    /// beta = 1, real symmetric entries.
    Orthogonal,
    /// beta = 2, complex Hermitian entries.
    Unitary,
    /// beta = 4, quaternion self-adjoint entries.
    Symplectic,
}

impl EnsembleKind {
    pub fn from_beta(beta: f64) -> Result<Self> {
        if beta == 1.0 {
            Ok(Self::Orthogonal)
        } else if beta == 2.0 {
            Ok(Self::Unitary)
        } else if beta == 4.0 {
            Ok(Self::Symplectic)
        } else {
            Err(Error::Domain(format!(
                "dense ensembles exist only for beta in {{1,2,4}}, got {beta}"
            )))
        }
    }

    pub fn beta(self) -> f64 {
        match self {
            Self::Orthogonal => 1.0,
            Self::Unitary => 2.0,
            Self::Symplectic => 4.0,
        }
    }
}

enum MatrixStorage {
    Real(DMatrix<f64>),
    Hermitian(DMatrix<Complex<f64>>),
    /// Quaternion matrix in its complex block representation: `z` is
    /// Hermitian, `w` antisymmetric; the 2m x 2m matrix
    /// `[z w; -conj(w) conj(z)]` has each quaternion eigenvalue twice.
    Quaternion { z: DMatrix<Complex<f64>>, w: DMatrix<Complex<f64>> },
}

/// One dense self-adjoint Gaussian matrix, normalized so the diagonal
/// variances are `2N`, `N`, `N/2` for beta = 1, 2, 4; with these choices
/// the eigenvalue law matches the fixed-time ensemble at variance `2N/beta`.
pub struct DenseMatrixSample {
    n: usize,
    kind: EnsembleKind,
    storage: MatrixStorage,
}

impl DenseMatrixSample {
    pub fn draw(n: usize, beta: f64, rng: &mut RngStream) -> Result<Self> {
        if n == 0 {
            return Err(Error::Range("matrix size must be >= 1".into()));
        }
        let kind = EnsembleKind::from_beta(beta)?;
        let sigma2 = 2.0 * n as f64 / beta;
        let sigma = sigma2.sqrt();
        let half = (sigma2 / 2.0).sqrt();
        let storage = match kind {
            EnsembleKind::Orthogonal => {
                let mut a = DMatrix::zeros(n, n);
                for i in 0..n {
                    a[(i, i)] = sigma * rng.normal();
                    for j in 0..i {
                        let v = half * rng.normal();
                        a[(i, j)] = v;
                        a[(j, i)] = v;
                    }
                }
                MatrixStorage::Real(a)
            }
            EnsembleKind::Unitary => {
                let mut h = DMatrix::from_element(n, n, Complex::new(0.0, 0.0));
                for i in 0..n {
                    h[(i, i)] = Complex::new(sigma * rng.normal(), 0.0);
                    for j in 0..i {
                        let v = Complex::new(half * rng.normal(), half * rng.normal());
                        h[(i, j)] = v;
                        h[(j, i)] = v.conj();
                    }
                }
                MatrixStorage::Hermitian(h)
            }
            EnsembleKind::Symplectic => {
                let mut z = DMatrix::from_element(n, n, Complex::new(0.0, 0.0));
                let mut w = DMatrix::from_element(n, n, Complex::new(0.0, 0.0));
                for i in 0..n {
                    z[(i, i)] = Complex::new(sigma * rng.normal(), 0.0);
                    for j in 0..i {
                        let zv = Complex::new(half * rng.normal(), half * rng.normal());
                        z[(i, j)] = zv;
                        z[(j, i)] = zv.conj();
                        let wv = Complex::new(half * rng.normal(), half * rng.normal());
                        w[(i, j)] = wv;
                        w[(j, i)] = -wv;
                    }
                }
                MatrixStorage::Quaternion { z, w }
            }
        };
        Ok(Self { n, kind, storage })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> EnsembleKind {
        self.kind
    }

    /// The fixed-time variance the eigenvalue law corresponds to: `2N/beta`.
    pub fn variance_t(&self) -> f64 {
        2.0 * self.n as f64 / self.kind.beta()
    }

    /// Eigenvalues of the top-left `m x m` principal submatrix, ascending.
    pub fn corner_eigenvalues(&self, m: usize) -> Result<Vec<f64>> {
        if m == 0 || m > self.n {
            return Err(Error::Range(format!("corner size {m} outside 1..={}", self.n)));
        }
        match &self.storage {
            MatrixStorage::Real(a) => {
                let corner = a.view((0, 0), (m, m)).into_owned();
                Ok(linalg::dense_symmetric_eigenvalues(&corner))
            }
            MatrixStorage::Hermitian(h) => {
                let corner = h.view((0, 0), (m, m)).into_owned();
                Ok(linalg::dense_hermitian_eigenvalues(&corner))
            }
            MatrixStorage::Quaternion { z, w } => {
                let zc = z.view((0, 0), (m, m));
                let wc = w.view((0, 0), (m, m));
                let mut c = DMatrix::from_element(2 * m, 2 * m, Complex::new(0.0, 0.0));
                for i in 0..m {
                    for j in 0..m {
                        c[(i, j)] = zc[(i, j)];
                        c[(i, j + m)] = wc[(i, j)];
                        c[(i + m, j)] = -wc[(i, j)].conj();
                        c[(i + m, j + m)] = zc[(i, j)].conj();
                    }
                }
                let doubled = linalg::dense_hermitian_eigenvalues(&c);
                // Kramers pairs: adjacent entries of the sorted doubled
                // spectrum are the same eigenvalue; average them.
                let ev = doubled.chunks_exact(2).map(|p| 0.5 * (p[0] + p[1])).collect();
                Ok(ev)
            }
        }
    }
}

/// Interlacing array of all principal-corner spectra of one dense draw.
pub fn sample_dense_corners(n: usize, beta: f64, rng: &mut RngStream) -> Result<GtArray> {
    let sample = DenseMatrixSample::draw(n, beta, rng)?;
    let mut rows = Vec::with_capacity(n);
    for m in 1..=n {
        rows.push(sample.corner_eigenvalues(m)?);
    }
    GtArray::from_levels(rows)
}

/// Spectra of the top `levels` corners only (sizes `n-levels+1 ..= n`,
/// ascending); enough for edge-spacing statistics at a fraction of the
/// cost of the full array.
pub fn sample_dense_corner_top_levels(
    n: usize,
    beta: f64,
    levels: usize,
    rng: &mut RngStream,
) -> Result<Vec<Vec<f64>>> {
    if levels == 0 || levels > n {
        return Err(Error::Range(format!("level count {levels} outside 1..={n}")));
    }
    let sample = DenseMatrixSample::draw(n, beta, rng)?;
    let mut rows = Vec::with_capacity(levels);
    for m in n - levels + 1..=n {
        rows.push(sample.corner_eigenvalues(m)?);
    }
    Ok(rows)
}

/// Edge spacings `r_i = x^{N+1-i}_{N+1-i} - x^{N-i}_{N-i}` from rows of
/// consecutive levels ordered by ascending size (as returned by
/// [`sample_dense_corner_top_levels`]).
pub fn edge_spacings_of_rows(rows: &[Vec<f64>], k: usize) -> Result<Vec<f64>> {
    if rows.len() < k + 1 {
        return Err(Error::Range(format!(
            "need {} rows for {k} spacings, got {}",
            k + 1,
            rows.len()
        )));
    }
    let top = rows.len() - 1;
    Ok((0..k)
        .map(|i| {
            let hi = &rows[top - i];
            let lo = &rows[top - i - 1];
            hi[hi.len() - 1] - lo[lo.len() - 1]
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::EmpiricalDistribution;

    #[test]
    fn single_particle_is_gaussian_of_variance_t() {
        let mut rng = RngStream::new(3, 0);
        let t = 2.5;
        let m = 10_000;
        let xs: Vec<f64> = (0..m)
            .map(|_| sample_beta_hermite(1, 3.0, t, &mut rng).unwrap().values()[0])
            .collect();
        let (mean, _) = crate::stats::mean_and_se(&xs);
        assert!(mean.abs() < 3.0 * (t / m as f64).sqrt(), "mean = {mean}");
        let var = crate::stats::sample_variance(&xs);
        assert!((var - t).abs() < 4.0 * t * (2.0 / m as f64).sqrt(), "var = {var}");
    }

    #[test]
    fn spectrum_sum_is_sign_symmetric() {
        let mut rng = RngStream::new(4, 0);
        let m = 2000;
        let sums: Vec<f64> = (0..m)
            .map(|_| {
                sample_beta_hermite(12, 2.5, 3.0, &mut rng).unwrap().values().iter().sum()
            })
            .collect();
        let (mean, se) = crate::stats::mean_and_se(&sums);
        assert!(mean.abs() < 3.5 * se, "mean = {mean}, se = {se}");
    }

    #[test]
    fn corner_level_at_beta_two_is_uniform_in_the_gap() {
        let upper = LevelSpectrum::new(vec![-1.0, 1.0]).unwrap();
        let mut rng = RngStream::new(5, 0);
        let m = 10_000;
        let ys: Vec<f64> = (0..m)
            .map(|_| sample_corner_level(&upper, 2.0, &mut rng).unwrap().values()[0])
            .collect();
        let (mean, _) = crate::stats::mean_and_se(&ys);
        assert!(mean.abs() < 3.0 * (1.0 / (3.0 * m as f64)).sqrt(), "mean = {mean}");
        let s = EmpiricalDistribution::new(ys).unwrap();
        let d = s.ks_distance(|x| ((x + 1.0) / 2.0).clamp(0.0, 1.0));
        assert!(d < 0.02, "ks vs uniform = {d}");
    }

    #[test]
    fn corner_level_strictly_interlaces() {
        let mut rng = RngStream::new(6, 0);
        for _ in 0..200 {
            let upper = sample_beta_hermite(8, 1.5, 16.0, &mut rng).unwrap();
            let lower = sample_corner_level(&upper, 1.5, &mut rng).unwrap();
            for (i, y) in lower.values().iter().enumerate() {
                assert!(upper.values()[i] < *y && *y < upper.values()[i + 1]);
            }
        }
    }

    #[test]
    fn corner_level_preconditions() {
        let mut rng = RngStream::new(7, 0);
        let tied = LevelSpectrum::new(vec![0.0, 0.0, 1.0]).unwrap();
        assert!(sample_corner_level(&tied, 2.0, &mut rng).is_err());
        let single = LevelSpectrum::new(vec![0.0]).unwrap();
        assert!(sample_corner_level(&single, 2.0, &mut rng).is_err());
    }

    #[test]
    fn corners_process_interlaces_every_draw() {
        let mut rng = RngStream::new(8, 0);
        for _ in 0..50 {
            let a = sample_corners_process(12, 2.5, 10.0, &mut rng).unwrap();
            assert!(a.strictly_interlacing());
        }
        let one = sample_corners_process(1, 2.0, 1.0, &mut rng).unwrap();
        assert_eq!(one.n_levels(), 1);
    }

    #[test]
    fn dense_single_entry_has_corollary_variance() {
        // beta = 4 at n = 1: diagonal variance n/2.
        let mut rng = RngStream::new(9, 0);
        let m = 10_000;
        let xs: Vec<f64> = (0..m)
            .map(|_| {
                DenseMatrixSample::draw(1, 4.0, &mut rng)
                    .unwrap()
                    .corner_eigenvalues(1)
                    .unwrap()[0]
            })
            .collect();
        let var = crate::stats::sample_variance(&xs);
        assert!((var - 0.5).abs() < 4.0 * 0.5 * (2.0 / m as f64).sqrt(), "var = {var}");
    }

    #[test]
    fn dense_corners_interlace_to_solver_accuracy() {
        let mut rng = RngStream::new(10, 0);
        for beta in [1.0, 2.0, 4.0] {
            for _ in 0..5 {
                let a = sample_dense_corners(10, beta, &mut rng).unwrap();
                let scale = a.top(10).abs().max(1.0);
                assert!(
                    a.max_interlacing_violation() <= 1e-9 * scale,
                    "beta={beta}: violation {}",
                    a.max_interlacing_violation()
                );
            }
        }
    }

    #[test]
    fn dense_rejects_general_beta() {
        let mut rng = RngStream::new(11, 0);
        assert!(DenseMatrixSample::draw(4, 3.0, &mut rng).is_err());
    }

    #[test]
    fn quaternion_spectrum_is_doubled() {
        let mut rng = RngStream::new(12, 0);
        let s = DenseMatrixSample::draw(6, 4.0, &mut rng).unwrap();
        if let MatrixStorage::Quaternion { z, w } = &s.storage {
            let m = 6;
            let mut c = DMatrix::from_element(2 * m, 2 * m, Complex::new(0.0, 0.0));
            for i in 0..m {
                for j in 0..m {
                    c[(i, j)] = z[(i, j)];
                    c[(i, j + m)] = w[(i, j)];
                    c[(i + m, j)] = -w[(i, j)].conj();
                    c[(i + m, j + m)] = z[(i, j)].conj();
                }
            }
            let doubled = linalg::dense_hermitian_eigenvalues(&c);
            let scale = doubled.iter().fold(1.0f64, |acc, v| acc.max(v.abs()));
            for pair in doubled.chunks_exact(2) {
                assert!((pair[0] - pair[1]).abs() < 1e-9 * scale);
            }
        } else {
            panic!("expected quaternion storage");
        }
    }

    #[test]
    fn top_level_rows_match_edge_spacing_helper() {
        let mut rng = RngStream::new(13, 0);
        let a = sample_dense_corners(9, 2.0, &mut rng).unwrap();
        let rows: Vec<Vec<f64>> = (6..=9).map(|m| a.level(m).to_vec()).collect();
        let r = edge_spacings_of_rows(&rows, 3).unwrap();
        let expected = a.edge_spacings(3).unwrap();
        assert_eq!(r, expected.values());
    }
}
