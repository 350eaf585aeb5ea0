//! Closed-form solution of one Fourier mode for constant scalar coefficients
//! in `d = 1` with `f = g = 0`:
//! `d u_k = -a xi^2 u_k dt + i xi sum_n b_n u_k dw_n`, `xi = 2 pi k`, solved by
//! `u_k(t) = u_k(0) exp((-a xi^2 + xi^2 |b|^2 / 2) t + i xi sum_n b_n w_n(t))`.

use num_complex::Complex64;

use super::time::{BrownianIncrements, TimeGrid};
use crate::error::{Error, Result};

/// The exact mode at times `times`, given `w[m][n] = w_n(times[m]) - w_n(times[0])`.
pub fn exact_mode_oracle(a: f64, b: &[f64], k: i64, u0: Complex64, times: &[f64], w: &[Vec<f64>]) -> Result<Vec<Complex64>> {
    if times.len() != w.len() {
        return Err(Error::ShapeMismatch { expected: times.len(), got: w.len() });
    }
    if w.iter().any(|row| row.len() != b.len()) {
        return Err(Error::invalid("every Brownian sample needs one value per noise coefficient"));
    }
    let xi = 2.0 * std::f64::consts::PI * k as f64;
    let b2: f64 = b.iter().map(|v| v * v).sum();
    let drift = -a * xi * xi + 0.5 * xi * xi * b2;
    let t0 = times.first().copied().unwrap_or(0.0);
    Ok(times
        .iter()
        .zip(w)
        .map(|(&t, wt)| {
            let phase = xi * b.iter().zip(wt).map(|(bn, wn)| bn * wn).sum::<f64>();
            u0 * Complex64::new(drift * (t - t0), phase).exp()
        })
        .collect())
}

/// [`exact_mode_oracle`] on the nodes of `grid` along `noise`.
pub fn exact_mode_on_grid(a: f64, b: &[f64], k: i64, u0: Complex64, grid: &TimeGrid, noise: &BrownianIncrements) -> Result<Vec<Complex64>> {
    exact_mode_oracle(a, b, k, u0, grid.nodes(), &noise.path())
}
