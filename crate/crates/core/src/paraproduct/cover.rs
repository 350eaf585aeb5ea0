//! Finite covers of the torus by balls and subordinated partitions of unity.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{dft, torus_distance, wrap_point, Lattice, SpectralField};

/// Balls `B(y_lambda, r)` on `T^d`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cover {
    d: usize,
    centers: Vec<Vec<f64>>,
    r: f64,
}

impl Cover {
    /// A cover with explicit centres. Any positive radius is accepted here;
    /// [`build_cover`] is the constructor that enforces `r <= 1/8`.
    pub fn from_centers(d: usize, centers: Vec<Vec<f64>>, r: f64) -> Result<Self> {
        if d == 0 {
            return Err(Error::range("d >= 1"));
        }
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::range(format!("r > 0, got {r}")));
        }
        if centers.is_empty() {
            return Err(Error::invalid("cover needs at least one centre"));
        }
        if let Some(c) = centers.iter().find(|c| c.len() != d) {
            return Err(Error::ShapeMismatch { expected: d, got: c.len() });
        }
        let centers = centers.iter().map(|c| wrap_point(c)).collect();
        Ok(Self { d, centers, r })
    }

    /// Centres on the uniform lattice with `n` points per axis, offset to
    /// `-1/2 + (i + 1/2)/n`.
    pub fn uniform(d: usize, n: usize, r: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::range("n >= 1"));
        }
        let h = 1.0 / n as f64;
        let count = n.pow(d as u32);
        let centers = (0..count)
            .map(|mut idx| {
                let mut c = vec![0.0; d];
                for a in (0..d).rev() {
                    c[a] = -0.5 + ((idx % n) as f64 + 0.5) * h;
                    idx /= n;
                }
                c
            })
            .collect();
        Self::from_centers(d, centers, r)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn radius(&self) -> f64 {
        self.r
    }

    pub fn centers(&self) -> &[Vec<f64>] {
        &self.centers
    }

    /// Number of balls `Lambda`.
    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    /// Distance from `x` to the nearest centre.
    pub fn nearest_distance(&self, x: &[f64]) -> f64 {
        self.centers.iter().map(|c| torus_distance(x, c)).fold(f64::INFINITY, f64::min)
    }

    /// Whether every grid point of `lattice` lies in some open ball.
    pub fn covers(&self, lattice: &Lattice) -> bool {
        lattice.dim() == self.d && lattice.points().all(|x| self.nearest_distance(&x) < self.r)
    }
}

/// The cover used for localisation: radius
/// `r = min{(eta / (C_norm C_ab))^{1/alpha}, 1/8}` and `ceil(1/r)` centres per
/// axis, so the centre spacing never exceeds `r`.
pub fn build_cover(d: usize, eta: f64, alpha: f64, c_ab: f64, c_norm: f64) -> Result<Cover> {
    for (name, v) in [("eta", eta), ("alpha", alpha), ("C_ab", c_ab), ("C_norm", c_norm)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::range(format!("{name} > 0, got {v}")));
        }
    }
    if !(1..=3).contains(&d) {
        return Err(Error::range("d in {1, 2, 3} so that spacing r covers"));
    }
    let r = cover_radius(eta, alpha, c_ab, c_norm);
    let n = (1.0 / r - 1e-12).ceil().max(1.0) as usize;
    Cover::uniform(d, n, r)
}

/// `min{(eta / (C_norm C_ab))^{1/alpha}, 1/8}`.
pub fn cover_radius(eta: f64, alpha: f64, c_ab: f64, c_norm: f64) -> f64 {
    (eta / (c_norm * c_ab)).powf(1.0 / alpha).min(0.125)
}

/// Compactly supported profile `exp(1 - 1/(1 - t^2))` on `[0, 1)`.
pub fn bump_profile(t: f64) -> f64 {
    if t.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - t * t)).exp()
    }
}

/// `phi_lambda = psi(|x - y_lambda| / r) / sum_mu psi(|x - y_mu| / r)`.
#[derive(Clone, Debug)]
pub struct PartitionOfUnity {
    cover: Cover,
    grid: Vec<Vec<f64>>,
    bumps: Vec<SpectralField>,
}

impl PartitionOfUnity {
    pub fn cover(&self) -> &Cover {
        &self.cover
    }

    pub fn bumps(&self) -> &[SpectralField] {
        &self.bumps
    }

    /// Grid samples of `phi_lambda`.
    pub fn grid_values(&self, lambda: usize) -> &[f64] {
        &self.grid[lambda]
    }

    /// `max_x |sum_lambda phi_lambda(x) - 1|` over the grid.
    pub fn sum_deviation(&self) -> f64 {
        let n = self.grid.first().map_or(0, Vec::len);
        (0..n)
            .map(|i| (self.grid.iter().map(|g| g[i]).sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

/// Partition of unity subordinated to `cover`, sampled on `lattice`.
pub fn partition_of_unity(cover: &Cover, lattice: &Lattice) -> Result<PartitionOfUnity> {
    if lattice.dim() != cover.dim() {
        return Err(Error::ShapeMismatch { expected: cover.dim(), got: lattice.dim() });
    }
    let points: Vec<Vec<f64>> = lattice.points().collect();
    let mut raw: Vec<Vec<f64>> = cover
        .centers()
        .iter()
        .map(|c| points.iter().map(|x| bump_profile(torus_distance(x, c) / cover.radius())).collect())
        .collect();
    for i in 0..points.len() {
        let total: f64 = raw.iter().map(|g| g[i]).sum();
        if total <= 0.0 {
            return Err(Error::invalid(format!("grid point {:?} is not covered", points[i])));
        }
        raw.iter_mut().for_each(|g| g[i] /= total);
    }
    let bumps = raw.iter().map(|g| dft(*lattice, 1, 0, g)).collect::<Result<Vec<_>>>()?;
    Ok(PartitionOfUnity { cover: cover.clone(), grid: raw, bumps })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radius_formula() {
        let c = build_cover(1, 0.1, 1.0, 10.0, 1.0).unwrap();
        assert!((c.radius() - 0.01).abs() < 1e-15);
        let c = build_cover(1, 1e9, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(c.radius(), 0.125);
        assert!(c.len() <= 9);
        assert!(c.covers(&Lattice::new(1, 64).unwrap()));
    }

    #[test]
    fn rejects_nonpositive() {
        assert!(build_cover(1, 0.0, 1.0, 1.0, 1.0).is_err());
        assert!(build_cover(1, 1.0, -1.0, 1.0, 1.0).is_err());
        assert!(build_cover(1, 1.0, 1.0, 1.0, f64::NAN).is_err());
    }

    #[test]
    fn two_and_three_dimensional_covers() {
        for d in [2, 3] {
            let c = build_cover(d, 1.0, 1.0, 1.0, 8.0).unwrap();
            let l = Lattice::new(d, 8).unwrap();
            assert!(c.covers(&l));
            assert!(c.len() <= (8usize + 1).pow(d as u32));
        }
    }

    #[test]
    fn single_ball_gives_one() {
        let c = Cover::from_centers(1, vec![vec![0.0]], 0.6).unwrap();
        let p = partition_of_unity(&c, &Lattice::new(1, 16).unwrap()).unwrap();
        assert!(p.grid_values(0).iter().all(|v| (v - 1.0).abs() < 1e-15));
    }

    #[test]
    fn two_balls_sum_to_one_with_support() {
        let c = Cover::from_centers(1, vec![vec![-0.25], vec![0.25]], 0.3).unwrap();
        let l = Lattice::new(1, 32).unwrap();
        let p = partition_of_unity(&c, &l).unwrap();
        assert!(p.sum_deviation() < 1e-10);
        for (lam, y) in c.centers().iter().enumerate() {
            for (i, x) in l.points().enumerate() {
                let v = p.grid_values(lam)[i];
                assert!((0.0..=1.0).contains(&v));
                if torus_distance(&x, y) >= 0.3 {
                    assert!(v < 1e-8);
                }
            }
        }
    }
}
