//! Integrators for the limiting local-interaction diffusions at the edge.
//!
//! Two coordinate systems for the same object:
//!
//! * `R`-coordinates: `k` strictly positive spacings with
//!   `dR_i = (beta/2-1)(1/R_i - 1/R_{i+1}) dt + dB_i - dB_{i+1}` for
//!   `i < k` and `dR_k = ((beta/2-1)/R_k - sqrt(beta/(2 T0))) dt + dB_k -
//!   dB_{k+1}`;
//! * `Z`-coordinates: `k+1` strictly decreasing positions with
//!   `dZ_i = (beta/2-1)/(Z_i - Z_{i+1}) dt + dB_i` and a unit drift on the
//!   bottom coordinate (the normalization with `sqrt(beta/(2 T0)) = 1`,
//!   i.e. `T0 = beta/2`); consecutive differences of `Z` evolve exactly as
//!   the `R` system.
//!
//! The singular own-term `(beta/2-1)/R_i` is resolved implicitly by the
//! positive root of `R' = S + (beta/2-1) dt / R'`, which keeps every
//! coordinate strictly positive for `beta > 2` regardless of the step
//! size; the bounded drift part and the differenced noise enter
//! explicitly. Noise is generated as `k+1` independent Gaussian
//! increments and then differenced, which reproduces the tridiagonal
//! covariance `2 a_{ij} dt`, `a_{ij} = 1{i=j} - 1/2 * 1{|i-j|=1}`,
//! without any matrix factorization.

use crate::error::{Error, Result};
use crate::model::{GammaLaw, SpacingVector};
use crate::rng::RngStream;

/// Spacing-coordinate state of the limiting diffusion.
#[derive(Debug, Clone)]
pub struct LimitStateR {
    r: Vec<f64>,
    time: f64,
    beta: f64,
    t0: f64,
}

impl LimitStateR {
    pub fn new(r: Vec<f64>, time: f64, beta: f64, t0: f64) -> Result<Self> {
        if !(beta >= 4.0) {
            return Err(Error::Domain(format!("limit dynamics requires beta >= 4, got {beta}")));
        }
        if !(t0 > 0.0) {
            return Err(Error::Domain(format!("t0 must be positive, got {t0}")));
        }
        if r.is_empty() || r.iter().any(|v| !(*v > 0.0)) {
            return Err(Error::Precondition("spacings must all be strictly positive".into()));
        }
        Ok(Self { r, time, beta, t0 })
    }

    pub fn spacings(&self) -> &[f64] {
        &self.r
    }

    pub fn spacing_vector(&self) -> SpacingVector {
        SpacingVector::new(self.r.clone()).expect("positive by invariant")
    }

    pub fn k(&self) -> usize {
        self.r.len()
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }
}

/// Position-coordinate state: `k+1` strictly decreasing coordinates.
#[derive(Debug, Clone)]
pub struct LimitStateZ {
    z: Vec<f64>,
    time: f64,
    beta: f64,
}

impl LimitStateZ {
    pub fn new(z: Vec<f64>, time: f64, beta: f64) -> Result<Self> {
        if !(beta >= 4.0) {
            return Err(Error::Domain(format!("limit dynamics requires beta >= 4, got {beta}")));
        }
        if z.is_empty() {
            return Err(Error::Precondition("need at least one coordinate".into()));
        }
        if z.windows(2).any(|w| !(w[0] > w[1])) {
            return Err(Error::Precondition("coordinates must be strictly decreasing".into()));
        }
        Ok(Self { z, time, beta })
    }

    pub fn positions(&self) -> &[f64] {
        &self.z
    }

    /// Consecutive differences `Z_i - Z_{i+1}`, the spacing coordinates.
    pub fn differences(&self) -> Vec<f64> {
        self.z.windows(2).map(|w| w[0] - w[1]).collect()
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

/// Stationary initial condition: `k` i.i.d. draws from the limiting
/// Gamma law (shape `beta/2`, rate `sqrt(beta/(2 t0))`).
pub fn gamma_product_init(k: usize, beta: f64, t0: f64, rng: &mut RngStream) -> Result<LimitStateR> {
    if k == 0 {
        return Err(Error::Range("need at least one spacing".into()));
    }
    let law = GammaLaw::limiting(beta, t0)?;
    let mut r = Vec::with_capacity(k);
    for _ in 0..k {
        r.push(rng.gamma(law.shape, 1.0 / law.rate)?);
    }
    LimitStateR::new(r, 0.0, beta, t0)
}

/// Positive root of `x = s + cdt / x`: the implicit resolution of the
/// singular own-term. Strictly positive for `cdt > 0` whatever `s` is.
#[inline]
fn positive_root(s: f64, cdt: f64) -> f64 {
    0.5 * (s + (s * s + 4.0 * cdt).sqrt())
}

/// Core split-step update shared by the `R` and `Z` integrators: `gaps`
/// are the current spacings, `last_drift` the bounded drift of the
/// closing coordinate, `dw` the differenced noise increments.
fn step_gaps(gaps: &[f64], beta: f64, dt: f64, last_drift: f64, dw: &[f64]) -> Vec<f64> {
    let coef = beta / 2.0 - 1.0;
    let cdt = coef * dt;
    let k = gaps.len();
    let mut next = Vec::with_capacity(k);
    for i in 0..k {
        let bounded = if i + 1 < k { -coef / gaps[i + 1] } else { last_drift };
        let s = gaps[i] + bounded * dt + dw[i];
        next.push(positive_root(s, cdt));
    }
    next
}

/// Differenced Gaussian noise for one step: `k+1` independent increments
/// of variance `dt`, returned as the `k` consecutive differences.
pub fn differenced_noise(k: usize, dt: f64, rng: &mut RngStream) -> Vec<f64> {
    let sigma = dt.sqrt();
    let raw: Vec<f64> = (0..=k).map(|_| sigma * rng.normal()).collect();
    raw.windows(2).map(|w| w[0] - w[1]).collect()
}

/// One step of the spacing system driven by externally supplied
/// differenced noise (used by the coupling checks).
pub fn step_limit_r_driven(state: &LimitStateR, dt: f64, dw: &[f64]) -> Result<LimitStateR> {
    if !(dt > 0.0) {
        return Err(Error::Domain(format!("dt must be positive, got {dt}")));
    }
    if dw.len() != state.r.len() {
        return Err(Error::Range(format!(
            "noise length {} does not match k = {}",
            dw.len(),
            state.r.len()
        )));
    }
    let last_drift = -(state.beta / (2.0 * state.t0)).sqrt();
    let r = step_gaps(&state.r, state.beta, dt, last_drift, dw);
    Ok(LimitStateR { r, time: state.time + dt, beta: state.beta, t0: state.t0 })
}

/// One step of the spacing system.
pub fn step_limit_r(state: &LimitStateR, dt: f64, rng: &mut RngStream) -> Result<LimitStateR> {
    let dw = differenced_noise(state.r.len(), dt, rng);
    step_limit_r_driven(state, dt, &dw)
}

/// One step of the position system: gaps take the same split-step update
/// (with the unit bottom drift), then positions are rebuilt from the
/// explicitly advanced bottom coordinate.
pub fn step_limit_z(state: &LimitStateZ, dt: f64, rng: &mut RngStream) -> Result<LimitStateZ> {
    if !(dt > 0.0) {
        return Err(Error::Domain(format!("dt must be positive, got {dt}")));
    }
    let k = state.z.len() - 1;
    let sigma = dt.sqrt();
    let raw: Vec<f64> = (0..=k).map(|_| sigma * rng.normal()).collect();
    let bottom = state.z[k] + dt + raw[k];
    if k == 0 {
        return LimitStateZ::new(vec![bottom], state.time + dt, state.beta);
    }
    let gaps: Vec<f64> = state.z.windows(2).map(|w| w[0] - w[1]).collect();
    let dw: Vec<f64> = (0..k).map(|i| raw[i] - raw[i + 1]).collect();
    let next_gaps = step_gaps(&gaps, state.beta, dt, -1.0, &dw);
    let mut z = vec![0.0; k + 1];
    z[k] = bottom;
    for i in (0..k).rev() {
        z[i] = z[i + 1] + next_gaps[i];
    }
    LimitStateZ::new(z, state.time + dt, state.beta)
}

/// Integrate the spacing system over `horizon` in steps of `dt`.
pub fn run_limit_r(
    state: &LimitStateR,
    horizon: f64,
    dt: f64,
    rng: &mut RngStream,
) -> Result<LimitStateR> {
    let mut cur = state.clone();
    let mut remaining = horizon;
    while remaining > 1e-12 * dt.max(1.0) {
        let step = dt.min(remaining);
        cur = step_limit_r(&cur, step, rng)?;
        remaining -= step;
    }
    Ok(cur)
}

/// Path of the comparison process `dX = (d-1) dt / X + sqrt(2) dB`, a
/// `sqrt(2)` multiple of a Bessel process of dimension `d`, integrated
/// with the same implicit scheme and sharing its noise: the returned
/// noise sequence holds one increment of variance `2 dt` per step, for
/// reuse by a coupled spacing run.
pub fn bessel_coupled_pair(
    r0: f64,
    d: f64,
    dt: f64,
    horizon: f64,
    rng: &mut RngStream,
) -> Result<(Vec<f64>, Vec<f64>)> {
    if !(r0 > 0.0) {
        return Err(Error::Domain(format!("start must be positive, got {r0}")));
    }
    if !(d >= 2.0) {
        return Err(Error::Domain(format!("comparison dimension must be >= 2, got {d}")));
    }
    if !(dt > 0.0) || horizon < 0.0 {
        return Err(Error::Domain("need dt > 0 and horizon >= 0".into()));
    }
    let steps = (horizon / dt).round() as usize;
    let cdt = (d - 1.0) * dt;
    let sigma = (2.0 * dt).sqrt();
    let mut path = Vec::with_capacity(steps + 1);
    let mut noise = Vec::with_capacity(steps);
    let mut x = r0;
    path.push(x);
    for _ in 0..steps {
        let w = sigma * rng.normal();
        noise.push(w);
        x = positive_root(x + w, cdt);
        path.push(x);
    }
    Ok((path, noise))
}
