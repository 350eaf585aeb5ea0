//! Random Fourier-series fields with prescribed spectral decay.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::rng::{hashed_normal_pair, mix};
use crate::spectral::{Lattice, SpectralField};

/// Representative of `{k, -k}`: the first nonzero entry is positive.
fn canonical(k: &[i64]) -> (Vec<i64>, bool) {
    match k.iter().find(|&&v| v != 0) {
        Some(&v) if v < 0 => (k.iter().map(|x| -x).collect(), true),
        _ => (k.to_vec(), false),
    }
}

fn mode_key(seed: u64, channel: u64, k: &[i64]) -> u64 {
    k.iter().fold(mix(mix(seed, 0xA5A5), channel), |h, &v| mix(h, v as u64))
}

/// A real random field with `c(k) = amplitude |k|^{-decay} z_k` for `k != 0`
/// and `c(0) = amplitude z_0`, where the `z` are standard (complex) normals.
///
/// Modes are drawn per `(seed, channel, k)` independently of the lattice
/// size: the field on a coarse lattice is the truncation of the one on a finer
/// lattice. Nyquist modes are zero. With `band = Some(b)` only modes with
/// `max_a |k_a| <= b` are kept.
pub fn random_field(
    lattice: Lattice,
    components: usize,
    n_seq: usize,
    decay: f64,
    amplitude: f64,
    seed: u64,
    band: Option<usize>,
) -> Result<SpectralField> {
    if !amplitude.is_finite() || !decay.is_finite() {
        return Err(Error::invalid("amplitude and decay must be finite"));
    }
    let mut out = SpectralField::zeros(lattice, components, n_seq);
    if amplitude == 0.0 {
        return Ok(out);
    }
    let n = lattice.len();
    let channels = out.channels();
    for c in 0..channels {
        let chan = out.channel_mut(c);
        for (idx, slot) in chan.iter_mut().enumerate().take(n) {
            if lattice.is_nyquist(idx) {
                continue;
            }
            let k = lattice.frequency(idx);
            if let Some(b) = band {
                if k.iter().any(|v| v.unsigned_abs() as usize > b) {
                    continue;
                }
            }
            let (rep, flipped) = canonical(&k);
            let (z1, z2) = hashed_normal_pair(mode_key(seed, c as u64, &rep));
            *slot = if k.iter().all(|&v| v == 0) {
                Complex64::new(amplitude * z1, 0.0)
            } else {
                let norm = (k.iter().map(|&v| (v * v) as f64).sum::<f64>()).sqrt();
                let w = amplitude * norm.powf(-decay) * std::f64::consts::FRAC_1_SQRT_2;
                let z = Complex64::new(w * z1, w * z2);
                if flipped {
                    z.conj()
                } else {
                    z
                }
            };
        }
    }
    Ok(out)
}

/// Scalar random field of Hoelder-type regularity `alpha`: decay exponent
/// `alpha + d/2 + 0.01`.
pub fn generate_holder_field(lattice: Lattice, alpha: f64, amplitude: f64, seed: u64) -> Result<SpectralField> {
    if !(alpha > 0.0) {
        return Err(Error::range(format!("alpha > 0, got {alpha}")));
    }
    let decay = alpha + lattice.dim() as f64 / 2.0 + 0.01;
    random_field(lattice, 1, 0, decay, amplitude, seed, None)
}

/// Band-limited variant of [`generate_holder_field`] with `components`
/// channels and an optional sequence index.
pub fn generate_holder_field_banded(
    lattice: Lattice,
    components: usize,
    n_seq: usize,
    alpha: f64,
    amplitude: f64,
    seed: u64,
    band: usize,
) -> Result<SpectralField> {
    if !(alpha > 0.0) {
        return Err(Error::range(format!("alpha > 0, got {alpha}")));
    }
    let decay = alpha + lattice.dim() as f64 / 2.0 + 0.01;
    random_field(lattice, components, n_seq, decay, amplitude, seed, Some(band))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::holder_norm;

    #[test]
    fn zero_amplitude_and_determinism() {
        let l = Lattice::new(2, 8).unwrap();
        let z = generate_holder_field(l, 1.5, 0.0, 4).unwrap();
        assert_eq!(z.max_abs_coefficient(), 0.0);
        let a = generate_holder_field(l, 1.5, 1.0, 4).unwrap();
        let b = generate_holder_field(l, 1.5, 1.0, 4).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, generate_holder_field(l, 1.5, 1.0, 5).unwrap());
        assert!(a.hermitian_defect() < 1e-15);
        assert!(generate_holder_field(l, 0.0, 1.0, 4).is_err());
    }

    #[test]
    fn fields_are_nested_across_lattices() {
        let coarse = generate_holder_field(Lattice::new(1, 16).unwrap(), 1.0, 1.0, 9).unwrap();
        let fine = generate_holder_field(Lattice::new(1, 64).unwrap(), 1.0, 1.0, 9).unwrap();
        for k in -15..16i64 {
            assert_eq!(coarse.coefficient(0, &[k]), fine.coefficient(0, &[k]));
        }
    }

    #[test]
    fn holder_norm_settles_under_refinement() {
        let a = generate_holder_field(Lattice::new(1, 64).unwrap(), 2.0, 1.0, 3).unwrap();
        let b = generate_holder_field(Lattice::new(1, 128).unwrap(), 2.0, 1.0, 3).unwrap();
        let (na, nb) = (holder_norm(&a, 1.5).unwrap(), holder_norm(&b, 1.5).unwrap());
        assert!((nb / na - 1.0).abs() < 0.3);
    }
}
