use std::f64::consts::PI;

use num_complex::Complex64;

use super::fft::fft_nd;
use super::lattice::Lattice;
use crate::error::{Error, Result};

/// An `m`-component (optionally `l^2`-valued) field stored by its Fourier
/// coefficients on a [`Lattice`].
///
/// Coefficients are laid out channel after channel; channel `c = comp * S + n`
/// where `S = max(n_seq, 1)`. `n_seq == 0` marks a plain vector field, while
/// `n_seq > 0` carries a truncated sequence index per component.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralField {
    lattice: Lattice,
    components: usize,
    n_seq: usize,
    coeffs: Vec<Complex64>,
}

/// Phase `(-1)^{k_1 + ... + k_d}` that moves the grid origin to `-1/2`.
fn origin_sign(lattice: &Lattice, idx: usize) -> f64 {
    let n = lattice.points_per_axis();
    let mut idx = idx;
    let mut parity = 0i64;
    for _ in 0..lattice.dim() {
        parity += lattice.axis_frequency(idx % n);
        idx /= n;
    }
    if parity.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

pub(crate) fn origin_signs(lattice: &Lattice) -> Vec<f64> {
    (0..lattice.len()).map(|i| origin_sign(lattice, i)).collect()
}

impl SpectralField {
    pub fn zeros(lattice: Lattice, components: usize, n_seq: usize) -> Self {
        let channels = components * n_seq.max(1);
        SpectralField {
            lattice,
            components,
            n_seq,
            coeffs: vec![Complex64::new(0.0, 0.0); channels * lattice.len()],
        }
    }

    /// Builds a field from raw coefficients (channel-major layout).
    pub fn from_coefficients(
        lattice: Lattice,
        components: usize,
        n_seq: usize,
        coeffs: Vec<Complex64>,
    ) -> Result<Self> {
        let expected = components * n_seq.max(1) * lattice.len();
        if coeffs.len() != expected {
            return Err(Error::ShapeMismatch { expected, got: coeffs.len() });
        }
        if components == 0 {
            return Err(Error::invalid("a field needs at least one component"));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::invalid("non-finite Fourier coefficient"));
        }
        Ok(SpectralField { lattice, components, n_seq, coeffs })
    }

    /// A spatially constant field with the given value in every channel.
    pub fn constant(lattice: Lattice, components: usize, n_seq: usize, values: &[f64]) -> Result<Self> {
        let mut f = SpectralField::zeros(lattice, components, n_seq);
        if values.len() != f.channels() {
            return Err(Error::ShapeMismatch { expected: f.channels(), got: values.len() });
        }
        for (c, &v) in values.iter().enumerate() {
            f.channel_mut(c)[0] = Complex64::new(v, 0.0);
        }
        Ok(f)
    }

    /// Samples a scalar function at the grid points.
    pub fn from_fn(lattice: Lattice, f: impl Fn(&[f64]) -> f64) -> Self {
        let values: Vec<f64> = lattice.points().map(|x| f(&x)).collect();
        dft(lattice, 1, 0, &values).expect("sample count matches lattice")
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn components(&self) -> usize {
        self.components
    }

    /// Length of the truncated sequence index (`0` for plain fields).
    pub fn n_seq(&self) -> usize {
        self.n_seq
    }

    pub fn channels(&self) -> usize {
        self.components * self.n_seq.max(1)
    }

    pub fn channel_index(&self, component: usize, seq: usize) -> usize {
        component * self.n_seq.max(1) + seq
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coefficients_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn channel(&self, c: usize) -> &[Complex64] {
        let n = self.lattice.len();
        &self.coeffs[c * n..(c + 1) * n]
    }

    pub fn channel_mut(&mut self, c: usize) -> &mut [Complex64] {
        let n = self.lattice.len();
        &mut self.coeffs[c * n..(c + 1) * n]
    }

    /// Copy of one channel as a scalar field.
    pub fn channel_field(&self, c: usize) -> SpectralField {
        SpectralField {
            lattice: self.lattice,
            components: 1,
            n_seq: 0,
            coeffs: self.channel(c).to_vec(),
        }
    }

    /// Coefficient of wavenumber `k` in channel `c`.
    pub fn coefficient(&self, c: usize, k: &[i64]) -> Option<Complex64> {
        self.lattice.index_of(k).map(|i| self.channel(c)[i])
    }

    pub fn same_shape(&self, other: &SpectralField) -> bool {
        self.lattice == other.lattice && self.components == other.components && self.n_seq == other.n_seq
    }

    pub(crate) fn check_shape(&self, other: &SpectralField) -> Result<()> {
        if self.lattice != other.lattice {
            return Err(Error::LatticeMismatch(format!("{:?} vs {:?}", self.lattice, other.lattice)));
        }
        if !self.same_shape(other) {
            return Err(Error::invalid(format!(
                "field shapes differ: ({}, {}) vs ({}, {})",
                self.components, self.n_seq, other.components, other.n_seq
            )));
        }
        Ok(())
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// `max |c(-k) - conj c(k)|`, zero for real-valued fields.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.lattice.len();
        let neg: Vec<usize> = (0..n).map(|i| self.lattice.negated_index(i)).collect();
        let mut worst: f64 = 0.0;
        for c in 0..self.channels() {
            let ch = self.channel(c);
            for i in 0..n {
                worst = worst.max((ch[neg[i]] - ch[i].conj()).norm());
            }
        }
        worst
    }

    pub fn max_abs_coefficient(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Euclidean norm of the coefficient vector (the `L^2` norm by Parseval).
    pub fn coefficient_l2(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&self, lambda: f64) -> SpectralField {
        let mut out = self.clone();
        out.coeffs.iter_mut().for_each(|c| *c *= lambda);
        out
    }

    pub fn add(&self, other: &SpectralField) -> Result<SpectralField> {
        self.check_shape(other)?;
        let mut out = self.clone();
        out.coeffs.iter_mut().zip(&other.coeffs).for_each(|(a, b)| *a += b);
        Ok(out)
    }

    pub fn sub(&self, other: &SpectralField) -> Result<SpectralField> {
        self.check_shape(other)?;
        let mut out = self.clone();
        out.coeffs.iter_mut().zip(&other.coeffs).for_each(|(a, b)| *a -= b);
        Ok(out)
    }

    /// `self += lambda * other`.
    pub fn axpy(&mut self, lambda: f64, other: &SpectralField) -> Result<()> {
        self.check_shape(other)?;
        self.coeffs.iter_mut().zip(&other.coeffs).for_each(|(a, b)| *a += b * lambda);
        Ok(())
    }

    /// Applies a real Fourier multiplier given as a function of the wavenumber.
    pub fn apply_symbol(&self, symbol: impl Fn(&[i64]) -> f64) -> SpectralField {
        let n = self.lattice.len();
        let values: Vec<f64> = (0..n).map(|i| symbol(&self.lattice.frequency(i))).collect();
        self.apply_symbol_values(&values)
    }

    /// Applies a real multiplier sampled in storage order.
    pub fn apply_symbol_values(&self, values: &[f64]) -> SpectralField {
        let mut out = self.clone();
        let n = self.lattice.len();
        for chunk in out.coeffs.chunks_exact_mut(n) {
            chunk.iter_mut().zip(values).for_each(|(c, &m)| *c *= m);
        }
        out
    }

    /// Spectral derivative along `axis`, with the Nyquist mode dropped.
    pub fn derivative(&self, axis: usize) -> SpectralField {
        let l = self.lattice;
        let n = l.len();
        let ppa = l.points_per_axis();
        let stride = ppa.pow((l.dim() - 1 - axis) as u32);
        let symbols: Vec<Complex64> = (0..n)
            .map(|i| {
                if l.is_nyquist(i) {
                    Complex64::new(0.0, 0.0)
                } else {
                    let k = l.axis_frequency((i / stride) % ppa) as f64;
                    Complex64::new(0.0, 2.0 * PI * k)
                }
            })
            .collect();
        let mut out = self.clone();
        for chunk in out.coeffs.chunks_exact_mut(n) {
            chunk.iter_mut().zip(&symbols).for_each(|(c, s)| *c *= s);
        }
        out
    }

    /// Zeroes every Nyquist coefficient.
    pub fn drop_nyquist(&mut self) {
        let n = self.lattice.len();
        let mask: Vec<bool> = (0..n).map(|i| self.lattice.is_nyquist(i)).collect();
        for chunk in self.coeffs.chunks_exact_mut(n) {
            for (c, &m) in chunk.iter_mut().zip(&mask) {
                if m {
                    *c = Complex64::new(0.0, 0.0);
                }
            }
        }
    }

    /// Evaluates the trigonometric interpolant at an arbitrary point, one value per channel.
    pub fn evaluate(&self, x: &[f64]) -> Vec<Complex64> {
        let l = self.lattice;
        let ppa = l.points_per_axis();
        let d = l.dim();
        // per-axis phase tables e^{2 pi i k x_a}
        let tables: Vec<Vec<Complex64>> = (0..d)
            .map(|a| {
                (0..ppa)
                    .map(|i| Complex64::from_polar(1.0, 2.0 * PI * l.axis_frequency(i) as f64 * x[a]))
                    .collect()
            })
            .collect();
        let n = l.len();
        let mut phases = vec![Complex64::new(1.0, 0.0); n];
        let mut multi = vec![0; d];
        for (i, p) in phases.iter_mut().enumerate() {
            l.multi_index(i, &mut multi);
            for a in 0..d {
                *p *= tables[a][multi[a]];
            }
        }
        (0..self.channels())
            .map(|c| self.channel(c).iter().zip(&phases).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Real parts of [`SpectralField::evaluate`].
    pub fn evaluate_real(&self, x: &[f64]) -> Vec<f64> {
        self.evaluate(x).into_iter().map(|v| v.re).collect()
    }

    /// Grid values of every channel (channel-major), complex.
    pub fn to_grid(&self) -> Vec<Complex64> {
        let l = self.lattice;
        let n = l.len();
        let signs = origin_signs(&l);
        let mut out = self.coeffs.clone();
        for chunk in out.chunks_exact_mut(n) {
            chunk.iter_mut().zip(&signs).for_each(|(c, s)| *c *= s);
            fft_nd(chunk, l.points_per_axis(), l.dim(), true);
        }
        out
    }

    /// Real parts of the grid values.
    pub fn to_real_grid(&self) -> Vec<f64> {
        self.to_grid().into_iter().map(|v| v.re).collect()
    }
}

/// Forward transform of real grid samples (channel-major) into a field.
pub fn dft(lattice: Lattice, components: usize, n_seq: usize, samples: &[f64]) -> Result<SpectralField> {
    let values: Vec<Complex64> = samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    dft_complex(lattice, components, n_seq, values)
}

/// Forward transform of complex grid samples (channel-major).
pub fn dft_complex(
    lattice: Lattice,
    components: usize,
    n_seq: usize,
    mut values: Vec<Complex64>,
) -> Result<SpectralField> {
    let n = lattice.len();
    let channels = components * n_seq.max(1);
    if values.len() != channels * n {
        return Err(Error::ShapeMismatch { expected: channels * n, got: values.len() });
    }
    if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::invalid("non-finite grid sample"));
    }
    let signs = origin_signs(&lattice);
    let inv_n = 1.0 / n as f64;
    for chunk in values.chunks_exact_mut(n) {
        fft_nd(chunk, lattice.points_per_axis(), lattice.dim(), false);
        chunk.iter_mut().zip(&signs).for_each(|(c, s)| *c *= s * inv_n);
    }
    SpectralField::from_coefficients(lattice, components, n_seq, values)
}

/// Inverse transform to real grid values (channel-major).
pub fn idft(field: &SpectralField) -> Vec<f64> {
    field.to_real_grid()
}
