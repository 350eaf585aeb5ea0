use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform grid on the torus `[-1/2, 1/2)^d` with `2K` points per axis.
///
/// Grid point `i` along an axis sits at `-1/2 + i / (2K)`. Fourier modes are
/// `e^{2 pi i k.x}` with `k_a` in `-K..K`; the mode `k_a = -K` is the Nyquist
/// mode. Flattened indices are row-major with the last axis contiguous.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Lattice {
    d: usize,
    k: usize,
}

impl Lattice {
    pub fn new(d: usize, k: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::range("lattice dimension d >= 1"));
        }
        if k == 0 {
            return Err(Error::range("lattice cutoff K >= 1"));
        }
        let lattice = Lattice { d, k };
        if lattice.checked_len().is_none() {
            return Err(Error::range("lattice size (2K)^d must fit in memory"));
        }
        Ok(lattice)
    }

    fn checked_len(&self) -> Option<usize> {
        let n = 2usize.checked_mul(self.k)?;
        (0..self.d).try_fold(1usize, |acc, _| acc.checked_mul(n))
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    /// Per-axis cutoff `K`.
    pub fn cutoff(&self) -> usize {
        self.k
    }

    pub fn points_per_axis(&self) -> usize {
        2 * self.k
    }

    /// Number of grid points, which equals the number of Fourier modes.
    pub fn len(&self) -> usize {
        self.points_per_axis().pow(self.d as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        1.0 / self.points_per_axis() as f64
    }

    /// Signed wavenumber stored at FFT position `i` of one axis.
    pub fn axis_frequency(&self, i: usize) -> i64 {
        let n = self.points_per_axis();
        if i < self.k {
            i as i64
        } else {
            i as i64 - n as i64
        }
    }

    /// FFT position of the signed wavenumber `k` along one axis.
    pub fn axis_position(&self, k: i64) -> Option<usize> {
        let kk = self.k as i64;
        if k < -kk || k >= kk {
            return None;
        }
        let n = self.points_per_axis() as i64;
        Some(((k + n) % n) as usize)
    }

    /// Multi-index of flattened `idx` (row-major).
    pub fn multi_index(&self, mut idx: usize, out: &mut [usize]) {
        let n = self.points_per_axis();
        for a in (0..self.d).rev() {
            out[a] = idx % n;
            idx /= n;
        }
    }

    pub fn flat_index(&self, multi: &[usize]) -> usize {
        let n = self.points_per_axis();
        multi.iter().fold(0, |acc, &i| acc * n + i)
    }

    /// Wavenumber vector of mode `idx`.
    pub fn frequency(&self, idx: usize) -> Vec<i64> {
        let mut m = vec![0; self.d];
        self.multi_index(idx, &mut m);
        m.iter().map(|&i| self.axis_frequency(i)).collect()
    }

    /// Flattened index of wavenumber `k`, if it lies on the lattice.
    pub fn index_of(&self, k: &[i64]) -> Option<usize> {
        if k.len() != self.d {
            return None;
        }
        let n = self.points_per_axis();
        let mut idx = 0;
        for &ka in k {
            idx = idx * n + self.axis_position(ka)?;
        }
        Some(idx)
    }

    /// Index of `-k` for the mode at `idx` (Nyquist entries map to themselves).
    pub fn negated_index(&self, idx: usize) -> usize {
        let n = self.points_per_axis();
        let mut m = vec![0; self.d];
        self.multi_index(idx, &mut m);
        for v in m.iter_mut() {
            *v = (n - *v) % n;
        }
        self.flat_index(&m)
    }

    /// True when any axis carries the Nyquist wavenumber `-K`.
    pub fn is_nyquist(&self, idx: usize) -> bool {
        let n = self.points_per_axis();
        let mut idx = idx;
        for _ in 0..self.d {
            if idx % n == self.k {
                return true;
            }
            idx /= n;
        }
        false
    }

    /// `|k|^2` for the mode at `idx`.
    pub fn wavenumber_sq(&self, idx: usize) -> f64 {
        let n = self.points_per_axis();
        let mut idx = idx;
        let mut s = 0.0;
        for _ in 0..self.d {
            let k = self.axis_frequency(idx % n) as f64;
            s += k * k;
            idx /= n;
        }
        s
    }

    /// Squared angular frequency `|2 pi k|^2`, the symbol of `-Laplacian`.
    pub fn laplace_symbol(&self, idx: usize) -> f64 {
        4.0 * std::f64::consts::PI * std::f64::consts::PI * self.wavenumber_sq(idx)
    }

    /// All `|2 pi k|^2` values in storage order.
    pub fn laplace_symbols(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.laplace_symbol(i)).collect()
    }

    /// Coordinates of grid point `idx`.
    pub fn point(&self, idx: usize) -> Vec<f64> {
        let mut m = vec![0; self.d];
        self.multi_index(idx, &mut m);
        let h = self.spacing();
        m.iter().map(|&i| -0.5 + i as f64 * h).collect()
    }

    pub fn points(&self) -> impl Iterator<Item = Vec<f64>> + '_ {
        (0..self.len()).map(move |i| self.point(i))
    }

    /// Maximal `|k|` over the lattice, `K sqrt(d)`.
    pub fn max_wavenumber(&self) -> f64 {
        self.k as f64 * (self.d as f64).sqrt()
    }
}

/// Representative of `z` modulo 1 in `(-1/2, 1/2]`.
pub fn wrap_half(z: f64) -> f64 {
    let r = z - z.round();
    if r <= -0.5 {
        r + 1.0
    } else {
        r
    }
}

/// Torus offset `(x - y) mod 1`, componentwise in `(-1/2, 1/2]`.
pub fn torus_offset(x: &[f64], y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(a, b)| wrap_half(a - b)).collect()
}

/// Geodesic distance on the unit torus.
pub fn torus_distance(x: &[f64], y: &[f64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| {
            let r = wrap_half(a - b);
            r * r
        })
        .sum::<f64>()
        .sqrt()
}

/// Representative of a torus point in `[-1/2, 1/2)^d`.
pub fn wrap_point(x: &[f64]) -> Vec<f64> {
    x.iter()
        .map(|&v| {
            let r = wrap_half(v);
            if r >= 0.5 {
                r - 1.0
            } else {
                r
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_round_trip() {
        let l = Lattice::new(2, 4).unwrap();
        for idx in 0..l.len() {
            let k = l.frequency(idx);
            assert_eq!(l.index_of(&k), Some(idx));
        }
        assert_eq!(l.len(), 64);
    }

    #[test]
    fn negation_is_an_involution() {
        let l = Lattice::new(3, 3).unwrap();
        for idx in 0..l.len() {
            let n = l.negated_index(idx);
            assert_eq!(l.negated_index(n), idx);
            if !l.is_nyquist(idx) {
                let k: Vec<i64> = l.frequency(idx).iter().map(|v| -v).collect();
                assert_eq!(l.frequency(n), k);
            }
        }
    }

    #[test]
    fn rejects_degenerate_lattices() {
        assert!(Lattice::new(0, 4).is_err());
        assert!(Lattice::new(1, 0).is_err());
    }

    #[test]
    fn torus_distance_wraps() {
        assert!((torus_distance(&[0.45], &[-0.45]) - 0.1).abs() < 1e-15);
        assert!((wrap_half(0.5) - 0.5).abs() < 1e-15);
        assert!((wrap_half(-0.5) - 0.5).abs() < 1e-15);
    }
}
