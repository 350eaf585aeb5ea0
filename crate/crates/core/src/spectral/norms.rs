//! Fractional norms: Lebesgue, Bessel potential, Besov and Zygmund-Hoelder.
//!
//! Pointwise magnitudes are Euclidean over components and over the sequence
//! index. Integrals use the rectangle rule on the grid of the lattice, which
//! has unit volume.

use num_complex::Complex64;

use super::field::SpectralField;
use super::littlewood_paley::LPPartition;
use crate::error::{Error, Result};

fn check_exponent(q: f64, name: &str) -> Result<()> {
    if q.is_nan() || q < 1.0 {
        return Err(Error::range(format!("{name} must lie in [1, inf], got {q}")));
    }
    Ok(())
}

/// Pointwise Euclidean magnitude over channels of channel-major grid values.
pub(crate) fn pointwise_magnitude(values: &[Complex64], points: usize) -> Vec<f64> {
    let mut mag = vec![0.0; points];
    for chunk in values.chunks_exact(points) {
        mag.iter_mut().zip(chunk).for_each(|(m, v)| *m += v.norm_sqr());
    }
    mag.iter_mut().for_each(|m| *m = m.sqrt());
    mag
}

/// Rectangle-rule `L^q` mean of nonnegative samples; `q = inf` is the maximum.
pub(crate) fn lq_of_samples(mag: &[f64], q: f64) -> f64 {
    if q.is_infinite() {
        return mag.iter().copied().fold(0.0, f64::max);
    }
    let n = mag.len() as f64;
    // scale by the maximum to avoid overflow for large q
    let top = mag.iter().copied().fold(0.0, f64::max);
    if top == 0.0 {
        return 0.0;
    }
    let s: f64 = mag.iter().map(|&m| (m / top).powf(q)).sum::<f64>() / n;
    top * s.powf(1.0 / q)
}

/// `(1 - Laplacian)^{s/2} f`, i.e. the multiplier `(1 + 4 pi^2 |k|^2)^{s/2}`.
pub fn bessel_potential(f: &SpectralField, s: f64) -> SpectralField {
    let l = *f.lattice();
    let symbol: Vec<f64> = (0..l.len()).map(|i| (1.0 + l.laplace_symbol(i)).powf(0.5 * s)).collect();
    f.apply_symbol_values(&symbol)
}

/// `||f||_{L^q}` on the grid.
pub fn lq_norm(f: &SpectralField, q: f64) -> Result<f64> {
    check_exponent(q, "q")?;
    let n = f.lattice().len();
    Ok(lq_of_samples(&pointwise_magnitude(&f.to_grid(), n), q))
}

/// `||f||_{H^{s,q}} = ||(1 - Laplacian)^{s/2} f||_{L^q}`.
pub fn bessel_norm(f: &SpectralField, s: f64, q: f64) -> Result<f64> {
    check_exponent(q, "q")?;
    lq_norm(&bessel_potential(f, s), q)
}

/// `||f||_{B^s_{q,p}} = || (2^{js} ||psi_j(D) f||_{L^q})_j ||_{l^p}`.
pub fn besov_norm(f: &SpectralField, s: f64, q: f64, p: f64) -> Result<f64> {
    LPPartition::new(*f.lattice()).besov_norm(f, s, q, p)
}

/// `sup_j 2^{jt} ||psi_j(D) f||_{L^inf}` for `t` in `(0, inf)` minus the integers.
pub fn holder_norm(f: &SpectralField, t: f64) -> Result<f64> {
    LPPartition::new(*f.lattice()).holder_norm(f, t)
}

/// Square-function form `||(sum_j 2^{2js} |psi_j(D) f|^2)^{1/2}||_{L^q}`,
/// equivalent to the Bessel norm up to constants.
pub fn square_function_norm(f: &SpectralField, s: f64, q: f64) -> Result<f64> {
    LPPartition::new(*f.lattice()).square_function_norm(f, s, q)
}

fn check_holder_exponent(t: f64) -> Result<()> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::range(format!("Hoelder exponent t must be positive, got {t}")));
    }
    if t.fract() == 0.0 {
        return Err(Error::range(format!(
            "Hoelder exponent t = {t} is an integer; the dyadic characterisation of C^t holds only for non-integer t"
        )));
    }
    Ok(())
}

impl LPPartition {
    /// `||psi_j(D) f||_{L^q}` for every block.
    pub fn block_lq_norms(&self, f: &SpectralField, q: f64) -> Result<Vec<f64>> {
        check_exponent(q, "q")?;
        let n = self.lattice().len();
        Ok(self
            .block_grids(f)?
            .into_iter()
            .map(|g| g.map_or(0.0, |v| lq_of_samples(&pointwise_magnitude(&v, n), q)))
            .collect())
    }

    pub fn besov_norm(&self, f: &SpectralField, s: f64, q: f64, p: f64) -> Result<f64> {
        check_exponent(p, "p")?;
        let weighted: Vec<f64> = self
            .block_lq_norms(f, q)?
            .into_iter()
            .enumerate()
            .map(|(j, v)| (2f64).powf(j as f64 * s) * v)
            .collect();
        Ok(lq_sum(&weighted, p))
    }

    pub fn holder_norm(&self, f: &SpectralField, t: f64) -> Result<f64> {
        check_holder_exponent(t)?;
        let norms = self.block_lq_norms(f, f64::INFINITY)?;
        Ok(norms
            .into_iter()
            .enumerate()
            .map(|(j, v)| (2f64).powf(j as f64 * t) * v)
            .fold(0.0, f64::max))
    }

    /// The Hoelder norm without block 0, which vanishes on constants.
    pub fn holder_seminorm(&self, f: &SpectralField, t: f64) -> Result<f64> {
        check_holder_exponent(t)?;
        let norms = self.block_lq_norms(f, f64::INFINITY)?;
        Ok(norms
            .into_iter()
            .enumerate()
            .skip(1)
            .map(|(j, v)| (2f64).powf(j as f64 * t) * v)
            .fold(0.0, f64::max))
    }

    pub fn square_function_norm(&self, f: &SpectralField, s: f64, q: f64) -> Result<f64> {
        check_exponent(q, "q")?;
        let n = self.lattice().len();
        let mut acc = vec![0.0; n];
        for (j, g) in self.block_grids(f)?.into_iter().enumerate() {
            if let Some(v) = g {
                let w = (2f64).powf(2.0 * j as f64 * s);
                for chunk in v.chunks_exact(n) {
                    acc.iter_mut().zip(chunk).for_each(|(a, z)| *a += w * z.norm_sqr());
                }
            }
        }
        acc.iter_mut().for_each(|a| *a = a.sqrt());
        Ok(lq_of_samples(&acc, q))
    }
}

/// Discrete `l^p` norm.
pub(crate) fn lq_sum(values: &[f64], p: f64) -> f64 {
    if p.is_infinite() {
        return values.iter().copied().fold(0.0, f64::max);
    }
    let top = values.iter().copied().fold(0.0, f64::max);
    if top == 0.0 {
        return 0.0;
    }
    top * values.iter().map(|v| (v / top).powf(p)).sum::<f64>().powf(1.0 / p)
}
