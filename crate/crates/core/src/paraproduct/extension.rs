//! Local extension operator `E_{y,r}` on the torus.
//!
//! Inside `B(y, r)` the input is kept. On the ring `r < |x - y| < 2r` the
//! value is taken from the radially reflected point `y + (2r - rho) omega`,
//! which lies back inside the ball, and blended towards `f(y)` with a smooth
//! cutoff. Beyond `2r` the output is the constant `f(y)`. Every output value
//! is a convex combination of values of `f` on the ball, so
//! `||E f||_inf <= ||f||_inf`.

use crate::error::{Error, Result};
use crate::spectral::{dft, torus_distance, torus_offset, wrap_point, Lattice, SpectralField};

/// Smooth step: 1 for `t <= 1`, 0 for `t >= 2`, `C^inf` in between.
pub fn blend_cutoff(t: f64) -> f64 {
    fn h(s: f64) -> f64 {
        if s > 0.0 {
            (-1.0 / s).exp()
        } else {
            0.0
        }
    }
    if t <= 1.0 {
        1.0
    } else if t >= 2.0 {
        0.0
    } else {
        let a = h(2.0 - t);
        a / (a + h(t - 1.0))
    }
}

/// `E_{y,r}` for a fixed centre and radius.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtensionOperator {
    y: Vec<f64>,
    r: f64,
}

impl ExtensionOperator {
    /// Requires `r` in `(0, 1/8)`.
    pub fn new(y: &[f64], r: f64) -> Result<Self> {
        if !(r > 0.0 && r < 0.125) {
            return Err(Error::range(format!("r in (0, 1/8), got {r}")));
        }
        if y.is_empty() || y.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("centre must be a finite point"));
        }
        Ok(Self { y: wrap_point(y), r })
    }

    pub fn centre(&self) -> &[f64] {
        &self.y
    }

    pub fn radius(&self) -> f64 {
        self.r
    }

    /// Whether `x` lies in the closed ball `B(y, r)`.
    pub fn in_ball(&self, x: &[f64]) -> bool {
        torus_distance(x, &self.y) <= self.r
    }

    /// Value of `E f` at `x`. `f` is only evaluated at points of the closed ball.
    pub fn apply_at(&self, f: &impl Fn(&[f64]) -> f64, x: &[f64]) -> f64 {
        let z = torus_offset(x, &self.y);
        let rho = z.iter().map(|v| v * v).sum::<f64>().sqrt();
        let r = self.r;
        if rho <= r {
            return f(&wrap_point(x));
        }
        let centre = f(&self.y);
        if rho >= 2.0 * r {
            return centre;
        }
        let scale = (2.0 * r - rho) / rho;
        let reflected: Vec<f64> = self.y.iter().zip(&z).map(|(c, v)| c + scale * v).collect();
        let phi = blend_cutoff(rho / r);
        centre + phi * (f(&wrap_point(&reflected)) - centre)
    }

    /// Grid samples of `E f` on `lattice`, in flat grid order.
    pub fn grid_values(&self, lattice: &Lattice, f: &impl Fn(&[f64]) -> f64) -> Result<Vec<f64>> {
        if lattice.dim() != self.y.len() {
            return Err(Error::ShapeMismatch { expected: self.y.len(), got: lattice.dim() });
        }
        Ok(lattice.points().map(|x| self.apply_at(f, &x)).collect())
    }

    /// `E f` as a field on `lattice`.
    pub fn apply(&self, lattice: &Lattice, f: &impl Fn(&[f64]) -> f64) -> Result<SpectralField> {
        let values = self.grid_values(lattice, f)?;
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("extended values are not finite"));
        }
        dft(*lattice, 1, 0, &values)
    }

    /// Extension of a scalar field, evaluated through its Fourier series.
    pub fn apply_field(&self, f: &SpectralField) -> Result<SpectralField> {
        if f.channels() != 1 {
            return Err(Error::invalid("extension expects a scalar field"));
        }
        self.apply(f.lattice(), &|x: &[f64]| f.evaluate_real(x)[0])
    }
}

/// `E_{y,r} f` sampled on `lattice`.
pub fn extension_operator(
    lattice: &Lattice,
    f: &impl Fn(&[f64]) -> f64,
    y: &[f64],
    r: f64,
) -> Result<SpectralField> {
    ExtensionOperator::new(y, r)?.apply(lattice, f)
}
