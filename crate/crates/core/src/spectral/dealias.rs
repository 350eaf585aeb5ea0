//! Pointwise products on a 3/2-padded grid.
//!
//! Inputs are read on their non-Nyquist band `|k_a| <= K - 1`, padded to `3K`
//! points per axis, multiplied there and truncated back. The truncation is the
//! exact Galerkin projection of the product onto that band, and the Nyquist
//! modes of every product are zero.

use num_complex::Complex64;

use super::fft::fft_nd;
use super::field::SpectralField;
use super::lattice::Lattice;
use crate::error::{Error, Result};

/// Index map between a lattice and its padded grid.
#[derive(Clone, Debug)]
pub struct PaddedGrid {
    lattice: Lattice,
    n_pad: usize,
    len: usize,
    /// padded position of each non-Nyquist lattice mode
    map: Vec<Option<usize>>,
    signs: Vec<f64>,
}

impl PaddedGrid {
    pub fn new(lattice: Lattice) -> Self {
        let n_pad = 3 * lattice.cutoff();
        let d = lattice.dim();
        let len = n_pad.pow(d as u32);
        let mut multi = vec![0; d];
        let mut map = Vec::with_capacity(lattice.len());
        let mut signs = Vec::with_capacity(lattice.len());
        let ppa = lattice.points_per_axis();
        for idx in 0..lattice.len() {
            lattice.multi_index(idx, &mut multi);
            let mut parity = 0i64;
            if lattice.is_nyquist(idx) {
                map.push(None);
            } else {
                let mut p = 0usize;
                for &m in &multi {
                    let k = lattice.axis_frequency(m % ppa);
                    parity += k;
                    p = p * n_pad + (k.rem_euclid(n_pad as i64)) as usize;
                }
                map.push(Some(p));
            }
            signs.push(if parity.rem_euclid(2) == 0 { 1.0 } else { -1.0 });
        }
        PaddedGrid { lattice, n_pad, len, map, signs }
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    /// Number of padded grid points.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn points_per_axis(&self) -> usize {
        self.n_pad
    }

    /// Coordinates of padded point `idx`.
    pub fn point(&self, idx: usize) -> Vec<f64> {
        let d = self.lattice.dim();
        let mut out = vec![0.0; d];
        let mut i = idx;
        for a in (0..d).rev() {
            out[a] = -0.5 + (i % self.n_pad) as f64 / self.n_pad as f64;
            i /= self.n_pad;
        }
        out
    }

    /// Padded grid values of one coefficient channel.
    pub fn channel_values(&self, coeffs: &[Complex64]) -> Vec<Complex64> {
        let mut buf = vec![Complex64::new(0.0, 0.0); self.len];
        for (i, c) in coeffs.iter().enumerate() {
            if let Some(p) = self.map[i] {
                buf[p] = c * self.signs[i];
            }
        }
        fft_nd(&mut buf, self.n_pad, self.lattice.dim(), true);
        buf
    }

    /// Padded grid values of every channel of `f`.
    pub fn values(&self, f: &SpectralField) -> Vec<Vec<Complex64>> {
        (0..f.channels()).map(|c| self.channel_values(f.channel(c))).collect()
    }

    /// Real padded grid values of every channel of `f`.
    pub fn real_values(&self, f: &SpectralField) -> Vec<Vec<f64>> {
        self.values(f).into_iter().map(|v| v.into_iter().map(|z| z.re).collect()).collect()
    }

    /// Projects padded grid values back onto the lattice band.
    pub fn project_channel(&self, mut values: Vec<Complex64>, out: &mut [Complex64]) {
        fft_nd(&mut values, self.n_pad, self.lattice.dim(), false);
        let inv = 1.0 / self.len as f64;
        for (i, o) in out.iter_mut().enumerate() {
            *o = match self.map[i] {
                Some(p) => values[p] * self.signs[i] * inv,
                None => Complex64::new(0.0, 0.0),
            };
        }
    }

    /// Builds a field from per-channel padded values.
    pub fn project(&self, values: Vec<Vec<Complex64>>, components: usize, n_seq: usize) -> Result<SpectralField> {
        let mut out = SpectralField::zeros(self.lattice, components, n_seq);
        if values.len() != out.channels() {
            return Err(Error::ShapeMismatch { expected: out.channels(), got: values.len() });
        }
        for (c, v) in values.into_iter().enumerate() {
            self.project_channel(v, out.channel_mut(c));
        }
        Ok(out)
    }
}

/// Output shape for a broadcast product, `None` if incompatible.
fn broadcast_shape(f: &SpectralField, g: &SpectralField) -> Option<(usize, usize)> {
    if f.channels() == 1 {
        Some((g.components(), g.n_seq()))
    } else if g.channels() == 1 || (f.components() == g.components() && f.n_seq() == g.n_seq()) {
        Some((f.components(), f.n_seq()))
    } else {
        None
    }
}

/// Dealiased pointwise product `f g`.
///
/// A single-channel operand broadcasts over the channels of the other one;
/// otherwise shapes must agree and the product is taken channel by channel.
pub fn product(f: &SpectralField, g: &SpectralField) -> Result<SpectralField> {
    let grid = PaddedGrid::new(*f.lattice());
    product_on(&grid, f, g)
}

pub fn product_on(grid: &PaddedGrid, f: &SpectralField, g: &SpectralField) -> Result<SpectralField> {
    if f.lattice() != g.lattice() || f.lattice() != grid.lattice() {
        return Err(Error::LatticeMismatch("product operands live on different lattices".into()));
    }
    let (m, s) = broadcast_shape(f, g)
        .ok_or_else(|| Error::invalid("product operands have incompatible channel layouts"))?;
    let fv = grid.values(f);
    let gv = grid.values(g);
    let channels = m * s.max(1);
    let out: Vec<Vec<Complex64>> = (0..channels)
        .map(|c| {
            let a = &fv[if fv.len() == 1 { 0 } else { c }];
            let b = &gv[if gv.len() == 1 { 0 } else { c }];
            a.iter().zip(b).map(|(x, y)| x * y).collect()
        })
        .collect();
    grid.project(out, m, s)
}

/// Dealiased pointwise inner product `(f, g)` summed over all channels.
pub fn inner_product(f: &SpectralField, g: &SpectralField) -> Result<SpectralField> {
    f.check_shape(g)?;
    let grid = PaddedGrid::new(*f.lattice());
    let fv = grid.values(f);
    let gv = grid.values(g);
    let mut acc = vec![Complex64::new(0.0, 0.0); grid.len()];
    for (a, b) in fv.iter().zip(&gv) {
        for ((o, x), y) in acc.iter_mut().zip(a).zip(b) {
            *o += x * y;
        }
    }
    grid.project(vec![acc], 1, 0)
}
